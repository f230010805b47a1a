#pragma once

// Impact-minimizing dispatcher.  On arrival a packet is split into d(e)
// chunks and pinned to the candidate edge minimizing its worst-case impact,
// unless a fixed link beats that impact outright.  The impact value doubles
// as the packet's dual variable alpha, so the breakdown is kept exact.

#include "model.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>
#include <vector>

namespace hybridsched {

// Chunk identity: packet index in the instance plus 1-based chunk index.
struct ChunkId {
    int packet = -1;
    int index = 0;

    friend bool operator==(const ChunkId& a, const ChunkId& b) {
        return a.packet == b.packet && a.index == b.index;
    }
    friend bool operator!=(const ChunkId& a, const ChunkId& b) { return !(a == b); }
    friend bool operator<(const ChunkId& a, const ChunkId& b) {
        if (a.packet != b.packet) return a.packet < b.packet;
        return a.index < b.index;
    }
};

// What the dispatcher sees of one pending chunk of an earlier packet.
struct PendingChunk {
    ChunkId id;
    EdgeRef edge;
    Rational weight;       // w_p / d(e) of its packet
    int arrival_rank = 0;  // rank of its packet in (release, input position)
};

// Snapshot of all pending (assigned, not yet transmitted) chunks at one
// dispatch decision.  Every chunk in the view belongs to an earlier packet.
struct PendingView {
    std::vector<PendingChunk> chunks;
};

struct AdjacencyPartition {
    std::vector<PendingChunk> heavier;  // weight >= w_p/d(e); ties land here
    std::vector<PendingChunk> lighter;
};

struct ImpactBreakdown {
    EdgeRef edge;
    Rational self_term;           // w_p * (d(s,t) + (d(e)+1)/2 + d(r,d))
    Rational heavier_count_term;  // w_p * |H(p,e)|
    Rational lighter_weight_term; // d(e) * W(L(p,e))
    Rational total;
    Int heavier_count = 0;
    Rational lighter_weight;      // W(L(p,e))
};

enum class RouteKind { Reconfig, FixedLink };

// Result of one dispatch decision.  candidates holds the impact breakdown of
// every candidate edge, in candidate_edges order; it is recorded even when
// the packet takes the fixed link so certificates can replay the decision.
struct Assignment {
    int packet = -1;
    RouteKind route = RouteKind::Reconfig;
    EdgeRef edge;              // meaningful for Reconfig
    Int link_delay = 0;        // meaningful for FixedLink
    int chunk_count = 0;       // d(e) for Reconfig, 0 for FixedLink
    Rational alpha;            // w*l for FixedLink, Imp(p, edge) for Reconfig
    std::vector<ImpactBreakdown> candidates;
};

// Splits the chunks adjacent to e (sharing its transmitter or receiver) by
// weight against p's own chunk size w_p/d(e).
inline AdjacencyPartition classify_adjacent(const Topology& topo, const Packet& p,
                                            const EdgeRef& e, const PendingView& view) {
    AdjacencyPartition part;
    const Rational own = p.weight / topo.edge_delay(e);
    for (const PendingChunk& c : view.chunks) {
        if (c.edge.transmitter != e.transmitter && c.edge.receiver != e.receiver) continue;
        if (c.weight >= own) {
            part.heavier.push_back(c);
        } else {
            part.lighter.push_back(c);
        }
    }
    return part;
}

inline ImpactBreakdown compute_impact(const Topology& topo, const Packet& p,
                                      const EdgeRef& e, const PendingView& view) {
    const Int d = topo.edge_delay(e);  // throws on unknown edge
    ImpactBreakdown out;
    out.edge = e;
    out.self_term = p.weight * (Rational(topo.attach_delay(e.transmitter)) +
                                Rational(d + 1, 2) + Rational(topo.attach_delay(e.receiver)));
    AdjacencyPartition part = classify_adjacent(topo, p, e, view);
    out.heavier_count = static_cast<Int>(part.heavier.size());
    out.heavier_count_term = p.weight * out.heavier_count;
    out.lighter_weight = 0;
    for (const PendingChunk& c : part.lighter) out.lighter_weight += c.weight;
    out.lighter_weight_term = Rational(d) * out.lighter_weight;
    out.total = out.self_term + out.heavier_count_term + out.lighter_weight_term;
    return out;
}

namespace detail {

inline std::vector<ImpactBreakdown> candidate_impacts(const Topology& topo, const Packet& p,
                                                      const PendingView& view) {
    std::vector<ImpactBreakdown> out;
    for (const EdgeRef& e : candidate_edges(topo, p)) {
        out.push_back(compute_impact(topo, p, e, view));
    }
    return out;
}

// Candidate order is (transmitter name, receiver name), so "first strictly
// smaller total" is exactly the lexicographic tie-break.
inline int argmin_impact(const std::vector<ImpactBreakdown>& impacts) {
    int best = -1;
    for (size_t i = 0; i < impacts.size(); ++i) {
        if (best < 0 || impacts[i].total < impacts[static_cast<size_t>(best)].total) {
            best = static_cast<int>(i);
        }
    }
    return best;
}

inline Assignment make_fixed(const Packet& p, int packet_idx, Int link,
                             std::vector<ImpactBreakdown> candidates) {
    Assignment a;
    a.packet = packet_idx;
    a.route = RouteKind::FixedLink;
    a.link_delay = link;
    a.alpha = p.weight * link;
    a.candidates = std::move(candidates);
    return a;
}

inline Assignment make_reconfig(const Topology& topo, int packet_idx,
                                const ImpactBreakdown& chosen,
                                std::vector<ImpactBreakdown> candidates) {
    Assignment a;
    a.packet = packet_idx;
    a.route = RouteKind::Reconfig;
    a.edge = chosen.edge;
    a.chunk_count = static_cast<int>(topo.edge_delay(chosen.edge));
    a.alpha = chosen.total;
    a.candidates = std::move(candidates);
    return a;
}

} // namespace detail

// The algorithm's dispatch rule: minimize impact over candidate edges, then
// route over the fixed link instead iff w_p * l_p is no worse.
inline Assignment dispatch(const Topology& topo, const Packet& p, int packet_idx,
                           const PendingView& view) {
    std::vector<ImpactBreakdown> impacts = detail::candidate_impacts(topo, p, view);
    const std::optional<Int> link = topo.link_delay(p.source, p.destination);
    if (impacts.empty()) {
        if (!link) {
            throw std::invalid_argument("packet " + p.id +
                                        " has no candidate edge and no fixed link");
        }
        return detail::make_fixed(p, packet_idx, *link, {});
    }
    const int best = detail::argmin_impact(impacts);
    const ImpactBreakdown& chosen = impacts[static_cast<size_t>(best)];
    if (link && p.weight * *link <= chosen.total) {
        return detail::make_fixed(p, packet_idx, *link, std::move(impacts));
    }
    return detail::make_reconfig(topo, packet_idx, chosen, std::move(impacts));
}

// Route overrides used to replay hand-picked routings (e.g. worked examples).
struct ForcedRoute {
    RouteKind kind = RouteKind::Reconfig;
    EdgeRef edge;  // for Reconfig; must be a candidate of the packet
};

inline Assignment dispatch_forced(const Topology& topo, const Packet& p, int packet_idx,
                                  const PendingView& view, const ForcedRoute& route) {
    std::vector<ImpactBreakdown> impacts = detail::candidate_impacts(topo, p, view);
    if (route.kind == RouteKind::FixedLink) {
        const std::optional<Int> link = topo.link_delay(p.source, p.destination);
        if (!link) {
            throw std::invalid_argument("forced fixed route but no link for packet " + p.id);
        }
        return detail::make_fixed(p, packet_idx, *link, std::move(impacts));
    }
    for (const ImpactBreakdown& b : impacts) {
        if (b.edge == route.edge) {
            return detail::make_reconfig(topo, packet_idx, b, std::move(impacts));
        }
    }
    throw std::invalid_argument("forced edge is not a candidate for packet " + p.id);
}

} // namespace hybridsched
