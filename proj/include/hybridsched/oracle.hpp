#pragma once

// Exhaustive optimum for small instances: branch and bound over per-step
// matchings, restricted to the non-preemptive, non-migratory, unit-speed
// setting with unit reconfigurable delays.  Intended for cross-checking the
// online algorithm and the dual lower bound, not for scale.

#include "engine.hpp"
#include "metrics.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <vector>

namespace hybridsched {

struct OracleLimits {
    int max_packets = 8;
};

// Raised when an instance is outside what exhaustive search will touch.
class OracleScaleError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct OracleResult {
    Rational cost;
    RunLog log;  // an optimal schedule, reconstructed as a run log
    long long explored_states = 0;
};

namespace detail {

struct OracleRoute {
    bool via_link = false;
    EdgeRef edge;
    Int time = 0;  // transmission step for edges; release for links
};

class OracleSearch {
public:
    OracleSearch(const Instance& inst, const OracleLimits& limits) : inst_(inst) {
        const int n = static_cast<int>(inst.packets.size());
        if (n > limits.max_packets || n > 20) {
            throw OracleScaleError("oracle scale exceeded: " + std::to_string(n) +
                                   " packets over the cap of " +
                                   std::to_string(std::min(limits.max_packets, 20)));
        }
        for (const Topology::ReconfigEdge& e : inst.topology.edges) {
            if (e.delay != 1) {
                throw OracleScaleError(
                    "oracle scale exceeded: non-unit reconfigurable delay on edge (" +
                    inst.topology.name_of(e.transmitter) + "," + inst.topology.name_of(e.receiver) +
                    ")");
            }
        }
        horizon_ = horizon_bound(inst);
        for (int pi = 0; pi < n; ++pi) {
            const Packet& p = inst.packets[static_cast<size_t>(pi)];
            candidates_.push_back(candidate_edges(inst.topology, p));
            links_.push_back(inst.topology.link_delay(p.source, p.destination));
            if (candidates_.back().empty() && !links_.back()) {
                throw std::invalid_argument("packet " + p.id + " cannot be delivered");
            }
            // Cheapest conceivable finish for the admissible bound.
            std::optional<Rational> base;
            for (const EdgeRef& e : candidates_.back()) {
                Rational d(path_delay(inst.topology, e));
                if (!base || d < *base) base = d;
            }
            best_path_.push_back(base);
        }
    }

    OracleResult solve() {
        // Feasible incumbent: the online algorithm's own run.
        RunLog alg = run(inst_);
        incumbent_cost_ = run_cost(alg);
        incumbent_ = routes_of(alg);
        current_.assign(inst_.packets.size(), OracleRoute{});
        Int start = horizon_;
        for (const Packet& p : inst_.packets) start = std::min(start, p.release);
        dfs(full_mask(), start, Rational(0));
        OracleResult out;
        out.cost = incumbent_cost_;
        out.explored_states = explored_;
        out.log = reconstruct(incumbent_);
        return out;
    }

private:
    std::uint32_t full_mask() const {
        return inst_.packets.empty()
                   ? 0u
                   : (static_cast<std::uint32_t>(1) << inst_.packets.size()) - 1u;
    }

    Rational lower_bound(std::uint32_t mask, Int t) const {
        Rational lb = 0;
        for (size_t pi = 0; pi < inst_.packets.size(); ++pi) {
            if (!(mask >> pi & 1u)) continue;
            const Packet& p = inst_.packets[pi];
            std::optional<Rational> best;
            if (best_path_[pi]) {
                best = p.weight * (std::max(t, p.release) - p.release + *best_path_[pi]);
            }
            if (links_[pi]) {
                Rational via = p.weight * *links_[pi];
                if (!best || via < *best) best = via;
            }
            lb += *best;
        }
        return lb;
    }

    void dfs(std::uint32_t mask, Int t, Rational acc) {
        ++explored_;
        if (mask == 0) {
            if (acc < incumbent_cost_) {
                incumbent_cost_ = acc;
                incumbent_ = current_;
            }
            return;
        }
        if (t >= horizon_) return;
        if (acc + lower_bound(mask, t) >= incumbent_cost_) return;
        if (auto it = seen_.find({mask, t}); it != seen_.end() && it->second <= acc) return;
        seen_[{mask, t}] = acc;

        std::vector<int> eligible;
        for (size_t pi = 0; pi < inst_.packets.size(); ++pi) {
            if ((mask >> pi & 1u) && inst_.packets[pi].release <= t) eligible.push_back(static_cast<int>(pi));
        }
        std::map<int, bool> busy;
        enumerate(mask, t, acc, eligible, 0, busy);
    }

    // All ways to pick routes for this step's eligible packets: each packet
    // takes a candidate edge with free endpoints, the fixed link (only at
    // its release step, which never costs more than taking it later), or
    // waits.  Then the step closes and time moves on.
    void enumerate(std::uint32_t mask, Int t, Rational acc, const std::vector<int>& eligible,
                   size_t k, std::map<int, bool>& busy) {
        if (k == eligible.size()) {
            dfs(mask, t + 1, acc);
            return;
        }
        const int pi = eligible[k];
        const Packet& p = inst_.packets[static_cast<size_t>(pi)];
        for (const EdgeRef& e : candidates_[static_cast<size_t>(pi)]) {
            if (busy[e.transmitter] || busy[e.receiver]) continue;
            busy[e.transmitter] = busy[e.receiver] = true;
            current_[static_cast<size_t>(pi)] = OracleRoute{false, e, t};
            Rational cost = p.weight * (t + path_delay(inst_.topology, e) - p.release);
            enumerate(mask & ~(1u << pi), t, acc + cost, eligible, k + 1, busy);
            busy[e.transmitter] = busy[e.receiver] = false;
        }
        if (links_[static_cast<size_t>(pi)] && p.release == t) {
            current_[static_cast<size_t>(pi)] = OracleRoute{true, EdgeRef{}, t};
            enumerate(mask & ~(1u << pi), t, acc + p.weight * *links_[static_cast<size_t>(pi)],
                      eligible, k + 1, busy);
        }
        enumerate(mask, t, acc, eligible, k + 1, busy);  // wait
    }

    std::vector<OracleRoute> routes_of(const RunLog& log) const {
        std::vector<OracleRoute> out(inst_.packets.size());
        for (size_t pi = 0; pi < inst_.packets.size(); ++pi) {
            const Assignment& a = log.assignments[pi];
            if (a.route == RouteKind::FixedLink) {
                out[pi] = OracleRoute{true, EdgeRef{}, inst_.packets[pi].release};
            } else {
                out[pi] = OracleRoute{false, a.edge, log.transmit_step[pi][0]};
            }
        }
        return out;
    }

    RunLog reconstruct(const std::vector<OracleRoute>& routes) const {
        RunLog log;
        log.instance = inst_;
        log.policy = Policy::StableWeight;
        log.ranks = arrival_ranks(inst_);
        log.horizon = horizon_;
        log.has_blocking_records = false;
        log.assignments.resize(inst_.packets.size());
        log.transmit_step.resize(inst_.packets.size());
        log.delivery.resize(inst_.packets.size());
        std::map<Int, std::vector<ChunkId>> by_step;
        for (size_t pi = 0; pi < inst_.packets.size(); ++pi) {
            const Packet& p = inst_.packets[pi];
            Assignment a;
            a.packet = static_cast<int>(pi);
            if (routes[pi].via_link) {
                a.route = RouteKind::FixedLink;
                a.link_delay = *links_[pi];
                a.alpha = p.weight * a.link_delay;
                log.fixed_sends.push_back(FixedSend{static_cast<int>(pi), p.release, a.alpha});
            } else {
                a.route = RouteKind::Reconfig;
                a.edge = routes[pi].edge;
                a.chunk_count = 1;
                Int t = routes[pi].time;
                a.alpha = p.weight * (t + path_delay(inst_.topology, a.edge) - p.release);
                Int att = inst_.topology.attach_delay(a.edge.transmitter) +
                          inst_.topology.attach_delay(a.edge.receiver);
                log.transmit_step[pi] = {t};
                log.delivery[pi] = {t + 1 + att};
                by_step[t].push_back(ChunkId{static_cast<int>(pi), 1});
            }
            log.assignments[pi] = a;
        }
        for (auto& [t, chunks] : by_step) {
            StepRecord rec;
            rec.time = t;
            rec.matched = chunks;
            log.steps.push_back(std::move(rec));
        }
        return log;
    }

    const Instance& inst_;
    Int horizon_ = 0;
    std::vector<std::vector<EdgeRef>> candidates_;
    std::vector<std::optional<Int>> links_;
    std::vector<std::optional<Rational>> best_path_;
    std::map<std::pair<std::uint32_t, Int>, Rational> seen_;
    std::vector<OracleRoute> current_;
    std::vector<OracleRoute> incumbent_;
    Rational incumbent_cost_;
    long long explored_ = 0;
};

} // namespace detail

inline OracleResult brute_force_opt(const Instance& inst, const OracleLimits& limits = {}) {
    if (std::vector<std::string> bad = validate_instance(inst); !bad.empty()) {
        throw std::invalid_argument("invalid instance: " + bad.front());
    }
    return detail::OracleSearch(inst, limits).solve();
}

// Baselines share the engine; this is the naming seam between the policy
// enum and run options.
inline RunLog baseline_run(const Instance& inst, Policy policy, std::uint64_t seed = 0) {
    RunOptions opts;
    opts.policy = policy;
    opts.seed = seed;
    return run(inst, opts);
}

} // namespace hybridsched
