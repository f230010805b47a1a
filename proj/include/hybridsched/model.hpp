#pragma once

// Core network and traffic model: the four-layer topology (sources feed
// transmitters, receivers feed destinations, reconfigurable transmitter to
// receiver edges in between, plus optional uncontended fixed source to
// destination links) and the weighted packet sequence that rides on it.

#include "rational.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace hybridsched {

enum class Layer { Source, Transmitter, Receiver, Destination };

inline char layer_letter(Layer layer) {
    switch (layer) {
        case Layer::Source: return 'S';
        case Layer::Transmitter: return 'T';
        case Layer::Receiver: return 'R';
        case Layer::Destination: return 'D';
    }
    return '?';
}

inline std::optional<Layer> layer_from_letter(char c) {
    switch (c) {
        case 'S': return Layer::Source;
        case 'T': return Layer::Transmitter;
        case 'R': return Layer::Receiver;
        case 'D': return Layer::Destination;
    }
    return std::nullopt;
}

// A reconfigurable edge named by its endpoint node indices.
struct EdgeRef {
    int transmitter = -1;
    int receiver = -1;

    friend bool operator==(const EdgeRef& a, const EdgeRef& b) {
        return a.transmitter == b.transmitter && a.receiver == b.receiver;
    }
    friend bool operator!=(const EdgeRef& a, const EdgeRef& b) { return !(a == b); }
    friend bool operator<(const EdgeRef& a, const EdgeRef& b) {
        if (a.transmitter != b.transmitter) return a.transmitter < b.transmitter;
        return a.receiver < b.receiver;
    }
};

struct Topology {
    struct Attach {
        int peer = -1;  // source for a transmitter, destination for a receiver
        Int delay = 0;
    };
    struct ReconfigEdge {
        int transmitter = -1;
        int receiver = -1;
        Int delay = 1;  // d(e) >= 1; a chunk occupies both endpoints for one step
    };
    struct FixedLink {
        int source = -1;
        int destination = -1;
        Int delay = 0;  // uncontended; zero is allowed
    };

    std::vector<std::string> node_names;
    std::vector<Layer> node_layers;
    std::vector<Attach> attaches;  // indexed per node; peer < 0 means unattached
    std::vector<ReconfigEdge> edges;
    std::vector<FixedLink> links;

    int node_count() const { return static_cast<int>(node_names.size()); }

    int add_node(const std::string& name, Layer layer) {
        if (name_index_.count(name)) {
            throw std::invalid_argument("duplicate node name: " + name);
        }
        int idx = node_count();
        node_names.push_back(name);
        node_layers.push_back(layer);
        attaches.push_back({});
        name_index_.emplace(name, idx);
        return idx;
    }

    int find_node(const std::string& name) const {
        auto it = name_index_.find(name);
        return it == name_index_.end() ? -1 : it->second;
    }

    const std::string& name_of(int node) const { return node_names.at(node); }
    Layer layer_of(int node) const { return node_layers.at(node); }

    // No semantic checking here; validate_topology reports misuse so that
    // malformed states remain constructible in tests.
    void attach_node(int node, int peer, Int delay) {
        attaches.at(static_cast<size_t>(node)) = Attach{peer, delay};
        (void)node_names.at(static_cast<size_t>(peer));
    }
    void add_reconfig_edge(int transmitter, int receiver, Int delay) {
        (void)node_names.at(static_cast<size_t>(transmitter));
        (void)node_names.at(static_cast<size_t>(receiver));
        edges.push_back(ReconfigEdge{transmitter, receiver, delay});
        edge_index_.emplace(std::make_pair(transmitter, receiver),
                            static_cast<int>(edges.size()) - 1);
    }
    void add_fixed_link(int source, int destination, Int delay) {
        (void)node_names.at(static_cast<size_t>(source));
        (void)node_names.at(static_cast<size_t>(destination));
        links.push_back(FixedLink{source, destination, delay});
        link_index_.emplace(std::make_pair(source, destination),
                            static_cast<int>(links.size()) - 1);
    }

    const ReconfigEdge* find_edge(int transmitter, int receiver) const {
        auto it = edge_index_.find({transmitter, receiver});
        return it == edge_index_.end() ? nullptr : &edges[static_cast<size_t>(it->second)];
    }
    const ReconfigEdge* find_edge(const EdgeRef& e) const {
        return find_edge(e.transmitter, e.receiver);
    }
    Int edge_delay(const EdgeRef& e) const {
        const ReconfigEdge* edge = find_edge(e);
        if (!edge) {
            throw std::invalid_argument("unknown reconfigurable edge (" + name_of(e.transmitter) +
                                        "," + name_of(e.receiver) + ")");
        }
        return edge->delay;
    }

    std::optional<Int> link_delay(int source, int destination) const {
        auto it = link_index_.find({source, destination});
        if (it == link_index_.end()) return std::nullopt;
        return links[static_cast<size_t>(it->second)].delay;
    }

    Int attach_delay(int node) const {
        const Attach& a = attaches.at(static_cast<size_t>(node));
        if (a.peer < 0) {
            throw std::invalid_argument("node " + name_of(node) + " has no attachment");
        }
        return a.delay;
    }
    int attach_peer(int node) const { return attaches.at(static_cast<size_t>(node)).peer; }

    friend bool operator==(const Topology& a, const Topology& b) {
        auto key = [](const Topology& t) {
            return std::tie(t.node_names, t.node_layers);
        };
        if (key(a) != key(b)) return false;
        auto att = [](const Topology& t) {
            std::vector<std::pair<int, Int>> v;
            for (const Attach& x : t.attaches) v.emplace_back(x.peer, x.delay);
            return v;
        };
        auto edg = [](const Topology& t) {
            std::vector<std::tuple<int, int, Int>> v;
            for (const ReconfigEdge& x : t.edges) v.emplace_back(x.transmitter, x.receiver, x.delay);
            return v;
        };
        auto lnk = [](const Topology& t) {
            std::vector<std::tuple<int, int, Int>> v;
            for (const FixedLink& x : t.links) v.emplace_back(x.source, x.destination, x.delay);
            return v;
        };
        return att(a) == att(b) && edg(a) == edg(b) && lnk(a) == lnk(b);
    }

private:
    std::unordered_map<std::string, int> name_index_;
    std::map<std::pair<int, int>, int> edge_index_;
    std::map<std::pair<int, int>, int> link_index_;
};

struct Packet {
    std::string id;
    int source = -1;
    int destination = -1;
    Int release = 0;      // integral, >= 0
    Rational weight = 1;  // > 0, exact

    friend bool operator==(const Packet& a, const Packet& b) {
        return a.id == b.id && a.source == b.source && a.destination == b.destination &&
               a.release == b.release && a.weight == b.weight;
    }
};

struct Instance {
    Topology topology;
    std::vector<Packet> packets;  // input sequence; position breaks release ties

    friend bool operator==(const Instance& a, const Instance& b) {
        return a.topology == b.topology && a.packets == b.packets;
    }
};

// Structural checks.  Returns human-readable violations; empty means valid.
inline std::vector<std::string> validate_topology(const Topology& topo) {
    std::vector<std::string> out;
    for (int v = 0; v < topo.node_count(); ++v) {
        const Topology::Attach& a = topo.attaches[static_cast<size_t>(v)];
        switch (topo.layer_of(v)) {
            case Layer::Transmitter:
                if (a.peer < 0) {
                    out.push_back("transmitter " + topo.name_of(v) + " is not attached to a source");
                } else if (topo.layer_of(a.peer) != Layer::Source) {
                    out.push_back("transmitter " + topo.name_of(v) + " attaches to non-source " +
                                  topo.name_of(a.peer));
                }
                break;
            case Layer::Receiver:
                if (a.peer < 0) {
                    out.push_back("receiver " + topo.name_of(v) + " is not attached to a destination");
                } else if (topo.layer_of(a.peer) != Layer::Destination) {
                    out.push_back("receiver " + topo.name_of(v) + " attaches to non-destination " +
                                  topo.name_of(a.peer));
                }
                break;
            default:
                if (a.peer >= 0) {
                    out.push_back("node " + topo.name_of(v) + " of layer " +
                                  std::string(1, layer_letter(topo.layer_of(v))) +
                                  " must not carry an attachment");
                }
                break;
        }
        if (a.peer >= 0 && a.delay < 0) {
            out.push_back("attachment of " + topo.name_of(v) + " has negative delay");
        }
    }
    std::map<std::pair<int, int>, int> seen_edges;
    for (const Topology::ReconfigEdge& e : topo.edges) {
        if (topo.layer_of(e.transmitter) != Layer::Transmitter ||
            topo.layer_of(e.receiver) != Layer::Receiver) {
            out.push_back("edge (" + topo.name_of(e.transmitter) + "," + topo.name_of(e.receiver) +
                          ") must join a transmitter to a receiver");
        }
        if (e.delay < 1) {
            out.push_back("edge (" + topo.name_of(e.transmitter) + "," + topo.name_of(e.receiver) +
                          ") needs delay >= 1");
        }
        if (++seen_edges[{e.transmitter, e.receiver}] == 2) {
            out.push_back("duplicate edge (" + topo.name_of(e.transmitter) + "," +
                          topo.name_of(e.receiver) + ")");
        }
    }
    std::map<std::pair<int, int>, int> seen_links;
    for (const Topology::FixedLink& l : topo.links) {
        if (topo.layer_of(l.source) != Layer::Source ||
            topo.layer_of(l.destination) != Layer::Destination) {
            out.push_back("link (" + topo.name_of(l.source) + "," + topo.name_of(l.destination) +
                          ") must join a source to a destination");
        }
        if (l.delay < 0) {
            out.push_back("link (" + topo.name_of(l.source) + "," + topo.name_of(l.destination) +
                          ") has negative delay");
        }
        if (++seen_links[{l.source, l.destination}] == 2) {
            out.push_back("duplicate link (" + topo.name_of(l.source) + "," +
                          topo.name_of(l.destination) + ")");
        }
    }
    return out;
}

// Packet-level checks on top of validate_topology.
inline std::vector<std::string> validate_instance(const Instance& inst) {
    std::vector<std::string> out = validate_topology(inst.topology);
    std::unordered_map<std::string, int> ids;
    for (const Packet& p : inst.packets) {
        if (++ids[p.id] == 2) out.push_back("duplicate packet id " + p.id);
        if (p.source < 0 || p.source >= inst.topology.node_count() ||
            inst.topology.layer_of(p.source) != Layer::Source) {
            out.push_back("packet " + p.id + " has a non-source origin");
        }
        if (p.destination < 0 || p.destination >= inst.topology.node_count() ||
            inst.topology.layer_of(p.destination) != Layer::Destination) {
            out.push_back("packet " + p.id + " has a non-destination target");
        }
        if (p.release < 0) out.push_back("packet " + p.id + " has negative release");
        if (p.weight <= 0) out.push_back("packet " + p.id + " needs positive weight");
    }
    return out;
}

// All reconfigurable edges whose transmitter serves s(p) and whose receiver
// serves d(p), sorted by (transmitter name, receiver name).  May be empty.
inline std::vector<EdgeRef> candidate_edges(const Topology& topo, const Packet& p) {
    std::vector<EdgeRef> out;
    for (const Topology::ReconfigEdge& e : topo.edges) {
        if (topo.attach_peer(e.transmitter) == p.source &&
            topo.attach_peer(e.receiver) == p.destination) {
            out.push_back(EdgeRef{e.transmitter, e.receiver});
        }
    }
    std::sort(out.begin(), out.end(), [&](const EdgeRef& a, const EdgeRef& b) {
        const std::string& ta = topo.name_of(a.transmitter);
        const std::string& tb = topo.name_of(b.transmitter);
        if (ta != tb) return ta < tb;
        return topo.name_of(a.receiver) < topo.name_of(b.receiver);
    });
    return out;
}

// End-to-end delay D(e) = d(s,t) + d(e) + d(r,d) along a reconfigurable edge.
inline Int path_delay(const Topology& topo, const EdgeRef& e) {
    Int d = topo.edge_delay(e);
    return topo.attach_delay(e.transmitter) + d + topo.attach_delay(e.receiver);
}

// Packet order used everywhere ties matter: release first, input position
// second.  Returns for each packet index its rank in that order.
inline std::vector<int> arrival_ranks(const Instance& inst) {
    std::vector<int> order(inst.packets.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        return inst.packets[static_cast<size_t>(a)].release <
               inst.packets[static_cast<size_t>(b)].release;
    });
    std::vector<int> rank(inst.packets.size());
    for (size_t i = 0; i < order.size(); ++i) rank[static_cast<size_t>(order[i])] = static_cast<int>(i);
    return rank;
}

inline Int max_path_delay(const Topology& topo) {
    Int best = 0;
    for (const Topology::ReconfigEdge& e : topo.edges) {
        best = std::max(best, path_delay(topo, EdgeRef{e.transmitter, e.receiver}));
    }
    return best;
}

// Every chunk of every packet is transmitted before this time under any of
// the schedulers here: after the last release, each of the n packets delays
// the rest by at most one full end-to-end traversal.
inline Int horizon_bound(const Instance& inst) {
    if (inst.packets.empty()) return 0;
    Int max_release = 0;
    for (const Packet& p : inst.packets) max_release = std::max(max_release, p.release);
    return max_release + static_cast<Int>(inst.packets.size()) * max_path_delay(inst.topology);
}

} // namespace hybridsched
