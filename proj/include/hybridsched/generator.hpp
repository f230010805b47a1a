#pragma once

// Synthetic workload generation.  All randomness flows through one
// mt19937_64 seeded from the config; sampling uses the raw 64-bit stream
// directly (no std distributions, whose mappings vary across standard
// library implementations), so a (config, seed) pair pins the instance
// byte for byte everywhere.

#include "model.hpp"

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace hybridsched {

enum class TrafficModel { Uniform, ZipfSkewed, BurstyOnOff };

inline const char* traffic_model_name(TrafficModel m) {
    switch (m) {
        case TrafficModel::Uniform: return "uniform";
        case TrafficModel::ZipfSkewed: return "zipf-skewed";
        case TrafficModel::BurstyOnOff: return "bursty-onoff";
    }
    return "?";
}

struct GeneratorConfig {
    TrafficModel model = TrafficModel::Uniform;
    std::uint64_t seed = 0;

    int sources = 2;
    int transmitters_per_source = 2;
    int destinations = 2;
    int receivers_per_destination = 2;
    int packets = 10;

    int edge_density_percent = 60;   // chance of each (t,r) pair getting an edge
    Int edge_delay_min = 1;
    Int edge_delay_max = 2;
    int attach_delay_max = 0;        // attach delays drawn from [0, this]
    int link_density_percent = 25;   // chance of each (s,d) pair getting a link
    Int link_delay_min = 1;
    Int link_delay_max = 4;

    Int weight_min = 1;              // integral weights
    Int weight_max = 10;
    Int release_span = 10;           // uniform/zipf releases drawn from [1, span]

    double zipf_skew = 1.0;          // pair rank r gets probability ~ 1/r^skew
    Int burst_on = 3;                // bursty-onoff phase lengths in steps
    Int burst_off = 4;
    Int burst_rate = 2;              // packets per on-step
};

namespace detail {

// lo + (raw mod span): a hair of modulo bias, irrelevant for workloads, and
// identical on every platform.
inline Int draw_int(std::mt19937_64& rng, Int lo, Int hi) {
    return lo + static_cast<Int>(rng() % static_cast<std::uint64_t>(hi - lo + 1));
}

inline bool draw_percent(std::mt19937_64& rng, int percent) {
    return rng() % 100 < static_cast<std::uint64_t>(percent);
}

inline double draw_unit(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

} // namespace detail

inline Instance generate(const GeneratorConfig& cfg) {
    if (cfg.sources < 1 || cfg.transmitters_per_source < 1 || cfg.destinations < 1 ||
        cfg.receivers_per_destination < 1) {
        throw std::invalid_argument("topology counts must be >= 1");
    }
    if (cfg.packets < 0) throw std::invalid_argument("packet count must be >= 0");
    if (cfg.edge_density_percent < 0 || cfg.edge_density_percent > 100 ||
        cfg.link_density_percent < 0 || cfg.link_density_percent > 100) {
        throw std::invalid_argument("densities are percentages in [0, 100]");
    }
    if (cfg.edge_delay_min < 1 || cfg.edge_delay_max < cfg.edge_delay_min) {
        throw std::invalid_argument("edge delay range needs 1 <= min <= max");
    }
    if (cfg.link_delay_min < 0 || cfg.link_delay_max < cfg.link_delay_min) {
        throw std::invalid_argument("link delay range needs 0 <= min <= max");
    }
    if (cfg.attach_delay_max < 0) throw std::invalid_argument("attach delay max must be >= 0");
    if (cfg.weight_min < 1 || cfg.weight_max < cfg.weight_min) {
        throw std::invalid_argument("weight range needs 1 <= min <= max");
    }
    if (cfg.release_span < 1) throw std::invalid_argument("release span must be >= 1");
    if (cfg.model == TrafficModel::ZipfSkewed && cfg.zipf_skew < 0) {
        throw std::invalid_argument("zipf skew must be >= 0");
    }
    if (cfg.model == TrafficModel::BurstyOnOff &&
        (cfg.burst_on < 1 || cfg.burst_off < 0 || cfg.burst_rate < 1)) {
        throw std::invalid_argument("bursty phases need on >= 1, off >= 0, rate >= 1");
    }

    std::mt19937_64 rng(cfg.seed);
    Instance inst;
    Topology& topo = inst.topology;

    std::vector<int> sources, destinations, transmitters, receivers;
    for (int i = 0; i < cfg.sources; ++i) {
        sources.push_back(topo.add_node("s" + std::to_string(i + 1), Layer::Source));
    }
    for (int i = 0; i < cfg.destinations; ++i) {
        destinations.push_back(topo.add_node("d" + std::to_string(i + 1), Layer::Destination));
    }
    for (int i = 0; i < cfg.sources; ++i) {
        for (int k = 0; k < cfg.transmitters_per_source; ++k) {
            int t = topo.add_node("t" + std::to_string(static_cast<int>(transmitters.size()) + 1),
                                  Layer::Transmitter);
            topo.attach_node(t, sources[static_cast<size_t>(i)],
                             detail::draw_int(rng, 0, cfg.attach_delay_max));
            transmitters.push_back(t);
        }
    }
    for (int i = 0; i < cfg.destinations; ++i) {
        for (int k = 0; k < cfg.receivers_per_destination; ++k) {
            int r = topo.add_node("r" + std::to_string(static_cast<int>(receivers.size()) + 1),
                                  Layer::Receiver);
            topo.attach_node(r, destinations[static_cast<size_t>(i)],
                             detail::draw_int(rng, 0, cfg.attach_delay_max));
            receivers.push_back(r);
        }
    }
    for (int t : transmitters) {
        for (int r : receivers) {
            if (detail::draw_percent(rng, cfg.edge_density_percent)) {
                topo.add_reconfig_edge(t, r,
                                       detail::draw_int(rng, cfg.edge_delay_min, cfg.edge_delay_max));
            }
        }
    }
    for (int s : sources) {
        for (int d : destinations) {
            if (detail::draw_percent(rng, cfg.link_density_percent)) {
                topo.add_fixed_link(s, d, detail::draw_int(rng, cfg.link_delay_min, cfg.link_delay_max));
            }
        }
    }

    // Deliverable (source, destination) pairs; packets only ever ask for
    // these.  If the dice produced none, wire one canonical edge.
    auto deliverable_pairs = [&]() {
        std::vector<std::pair<int, int>> pairs;
        for (int s : sources) {
            for (int d : destinations) {
                Packet probe;
                probe.source = s;
                probe.destination = d;
                if (!candidate_edges(topo, probe).empty() || topo.link_delay(s, d)) {
                    pairs.emplace_back(s, d);
                }
            }
        }
        return pairs;
    };
    std::vector<std::pair<int, int>> pairs = deliverable_pairs();
    if (pairs.empty()) {
        topo.add_reconfig_edge(transmitters.front(), receivers.front(), cfg.edge_delay_min);
        pairs = deliverable_pairs();
    }

    // Zipf ranks follow pair order; cumulative table drawn through once.
    std::vector<double> zipf_cdf;
    if (cfg.model == TrafficModel::ZipfSkewed) {
        double total = 0;
        for (size_t i = 0; i < pairs.size(); ++i) {
            total += 1.0 / std::pow(static_cast<double>(i + 1), cfg.zipf_skew);
            zipf_cdf.push_back(total);
        }
        for (double& v : zipf_cdf) v /= total;
    }
    auto draw_pair = [&]() -> const std::pair<int, int>& {
        if (cfg.model == TrafficModel::ZipfSkewed) {
            double u = detail::draw_unit(rng);
            for (size_t i = 0; i < zipf_cdf.size(); ++i) {
                if (u < zipf_cdf[i]) return pairs[i];
            }
            return pairs.back();
        }
        return pairs[static_cast<size_t>(detail::draw_int(rng, 0, static_cast<Int>(pairs.size()) - 1))];
    };

    std::vector<Int> releases;
    if (cfg.model == TrafficModel::BurstyOnOff) {
        Int t = 1;
        while (static_cast<int>(releases.size()) < cfg.packets) {
            for (Int on = 0; on < cfg.burst_on && static_cast<int>(releases.size()) < cfg.packets;
                 ++on, ++t) {
                for (Int k = 0; k < cfg.burst_rate && static_cast<int>(releases.size()) < cfg.packets;
                     ++k) {
                    releases.push_back(t);
                }
            }
            t += cfg.burst_off;
        }
    }

    for (int j = 0; j < cfg.packets; ++j) {
        const std::pair<int, int>& sd = draw_pair();
        Packet p;
        p.id = "p" + std::to_string(j + 1);
        p.source = sd.first;
        p.destination = sd.second;
        p.release = cfg.model == TrafficModel::BurstyOnOff
                        ? releases[static_cast<size_t>(j)]
                        : detail::draw_int(rng, 1, cfg.release_span);
        p.weight = detail::draw_int(rng, cfg.weight_min, cfg.weight_max);
        inst.packets.push_back(std::move(p));
    }
    return inst;
}

} // namespace hybridsched
