#pragma once

// Shared test fixtures: the two worked examples used throughout the tests
// plus the deterministic corpus configurations for the property suites.

#include "hybridsched/hybridsched.hpp"

#include <string>

namespace fixtures {

using namespace hybridsched;

inline int node(const Instance& inst, const std::string& name) {
    int idx = inst.topology.find_node(name);
    if (idx < 0) throw std::logic_error("fixture node missing: " + name);
    return idx;
}

// Two sources, three transmitters, four receivers, three destinations, five
// unit-delay edges, one fixed link of delay 4, five unit-weight packets.
// Hand-traced: the weight-ordered run costs 9, the forced table routing
// below also costs 9, and the optimum is 7.
inline Instance fig1_instance() {
    Instance inst;
    Topology& topo = inst.topology;
    int s1 = topo.add_node("s1", Layer::Source);
    int s2 = topo.add_node("s2", Layer::Source);
    int t1 = topo.add_node("t1", Layer::Transmitter);
    int t2 = topo.add_node("t2", Layer::Transmitter);
    int t3 = topo.add_node("t3", Layer::Transmitter);
    int r1 = topo.add_node("r1", Layer::Receiver);
    int r2 = topo.add_node("r2", Layer::Receiver);
    int r3 = topo.add_node("r3", Layer::Receiver);
    int r4 = topo.add_node("r4", Layer::Receiver);
    int d1 = topo.add_node("d1", Layer::Destination);
    int d2 = topo.add_node("d2", Layer::Destination);
    int d3 = topo.add_node("d3", Layer::Destination);
    topo.attach_node(t1, s1, 0);
    topo.attach_node(t2, s1, 0);
    topo.attach_node(t3, s2, 0);
    topo.attach_node(r1, d1, 0);
    topo.attach_node(r2, d2, 0);
    topo.attach_node(r3, d2, 0);
    topo.attach_node(r4, d3, 0);
    topo.add_reconfig_edge(t1, r1, 1);
    topo.add_reconfig_edge(t1, r2, 1);
    topo.add_reconfig_edge(t2, r3, 1);
    topo.add_reconfig_edge(t3, r3, 1);
    topo.add_reconfig_edge(t3, r4, 1);
    topo.add_fixed_link(s2, d3, 4);
    inst.packets.push_back(Packet{"p1", s1, d1, 1, 1});
    inst.packets.push_back(Packet{"p2", s1, d2, 1, 1});
    inst.packets.push_back(Packet{"p3", s2, d2, 1, 1});
    inst.packets.push_back(Packet{"p4", s2, d2, 2, 1});
    inst.packets.push_back(Packet{"p5", s2, d3, 2, 1});
    return inst;
}

// The hand-picked routing from the worked example: p2 shares t1 with p1,
// p3/p4 queue on (t3,r3), p5 takes the fixed link.
inline std::map<std::string, ForcedRoute> fig1_forced_routes(const Instance& inst) {
    std::map<std::string, ForcedRoute> forced;
    forced["p1"] = ForcedRoute{RouteKind::Reconfig, {node(inst, "t1"), node(inst, "r1")}};
    forced["p2"] = ForcedRoute{RouteKind::Reconfig, {node(inst, "t1"), node(inst, "r2")}};
    forced["p3"] = ForcedRoute{RouteKind::Reconfig, {node(inst, "t3"), node(inst, "r3")}};
    forced["p4"] = ForcedRoute{RouteKind::Reconfig, {node(inst, "t3"), node(inst, "r3")}};
    forced["p5"] = ForcedRoute{RouteKind::FixedLink, {}};
    return forced;
}

// One candidate edge per packet, growing weights 1..4, all released at 1.
// With the first three packets the matching is {p3, p1} and p2 is blocked by
// p3; adding p4 flips it to {p4, p2} with p3 blocked by p4 and p1 by p2.
inline Instance fig2_instance(bool with_p4) {
    Instance inst;
    Topology& topo = inst.topology;
    int s1 = topo.add_node("s1", Layer::Source);
    int s2 = topo.add_node("s2", Layer::Source);
    int t1 = topo.add_node("t1", Layer::Transmitter);
    int t2 = topo.add_node("t2", Layer::Transmitter);
    int r1 = topo.add_node("r1", Layer::Receiver);
    int r2 = topo.add_node("r2", Layer::Receiver);
    int r3 = topo.add_node("r3", Layer::Receiver);
    int d1 = topo.add_node("d1", Layer::Destination);
    int d2 = topo.add_node("d2", Layer::Destination);
    int d3 = topo.add_node("d3", Layer::Destination);
    topo.attach_node(t1, s1, 0);
    topo.attach_node(t2, s2, 0);
    topo.attach_node(r1, d1, 0);
    topo.attach_node(r2, d2, 0);
    topo.attach_node(r3, d3, 0);
    topo.add_reconfig_edge(t1, r1, 1);
    topo.add_reconfig_edge(t1, r2, 1);
    topo.add_reconfig_edge(t2, r2, 1);
    topo.add_reconfig_edge(t2, r3, 1);
    inst.packets.push_back(Packet{"p1", s1, d1, 1, 1});
    inst.packets.push_back(Packet{"p2", s1, d2, 1, 2});
    inst.packets.push_back(Packet{"p3", s2, d2, 1, 3});
    if (with_p4) inst.packets.push_back(Packet{"p4", s2, d3, 1, 4});
    return inst;
}

// Deterministic corpus for the property suites: mixed traffic models, up to
// 50 packets, grids up to 6x6, delays capped at 3.
inline GeneratorConfig corpus_config(int i) {
    GeneratorConfig cfg;
    cfg.seed = 1000 + static_cast<std::uint64_t>(i);
    cfg.model = i % 3 == 0   ? TrafficModel::Uniform
                : i % 3 == 1 ? TrafficModel::ZipfSkewed
                             : TrafficModel::BurstyOnOff;
    cfg.sources = 1 + i % 3;
    cfg.transmitters_per_source = 1 + (i / 3) % 2;
    cfg.destinations = 1 + (i / 2) % 3;
    cfg.receivers_per_destination = 1 + (i / 5) % 2;
    cfg.packets = 5 + i % 46;
    cfg.edge_density_percent = 40 + (i * 7) % 61;
    cfg.edge_delay_min = 1;
    cfg.edge_delay_max = 1 + i % 3;
    cfg.attach_delay_max = i % 4 == 0 ? 2 : 0;
    cfg.link_density_percent = i % 2 == 0 ? 40 : 0;
    cfg.link_delay_min = i % 8 == 0 ? 0 : 1;  // exercise zero-delay links too
    cfg.link_delay_max = 3;
    cfg.weight_min = 1;
    cfg.weight_max = 1 + i % 10;
    cfg.release_span = 1 + i % 20;
    cfg.zipf_skew = 0.5 + 0.5 * (i % 4);
    cfg.burst_on = 1 + i % 3;
    cfg.burst_off = i % 5;
    cfg.burst_rate = 1 + i % 3;
    return cfg;
}

// Oracle-reach corpus: at most 8 packets on unit-delay edges.
inline GeneratorConfig tiny_config(int i) {
    GeneratorConfig cfg;
    cfg.seed = 77000 + static_cast<std::uint64_t>(i);
    cfg.model = i % 2 == 0 ? TrafficModel::Uniform : TrafficModel::ZipfSkewed;
    cfg.sources = 1 + i % 2;
    cfg.transmitters_per_source = 1 + i % 2;
    cfg.destinations = 1 + (i / 2) % 2;
    cfg.receivers_per_destination = 1 + (i / 3) % 2;
    cfg.packets = 2 + i % 7;
    cfg.edge_density_percent = 50 + (i * 11) % 51;
    cfg.edge_delay_min = 1;
    cfg.edge_delay_max = 1;
    cfg.attach_delay_max = i % 3 == 0 ? 1 : 0;
    cfg.link_density_percent = i % 2 == 0 ? 50 : 0;
    cfg.link_delay_min = i % 6 == 0 ? 0 : 1;
    cfg.link_delay_max = 3;
    cfg.weight_min = 1;
    cfg.weight_max = 1 + i % 9;
    cfg.release_span = 1 + i % 6;
    return cfg;
}

} // namespace fixtures
