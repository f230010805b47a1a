#pragma once

// Discrete-time scheduling engine.  Packets are dispatched on arrival; at
// every integral step the pending chunks are run through a greedy stable
// matching (one chunk per busy transmitter and receiver) and the matched
// chunks leave.  The run log records enough to recompute every certificate
// offline: per-packet assignments with all candidate impacts, per-step
// matchings with the blocker of every rejected chunk, and chunk timings.

#include "dispatcher.hpp"

#include <algorithm>
#include <cstdint>
#include <map>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace hybridsched {

enum class Policy {
    StableWeight,         // the algorithm: impact dispatch + weight-ordered matching
    FifoPriority,         // arrival-ordered matching instead of weight-ordered
    RandomDispatch,       // uniformly random candidate edge instead of impact argmin
    LeastLoadedDispatch,  // candidate edge minimizing total adjacent pending weight
};

inline const char* policy_name(Policy p) {
    switch (p) {
        case Policy::StableWeight: return "alg";
        case Policy::FifoPriority: return "fifo-priority";
        case Policy::RandomDispatch: return "random-dispatch";
        case Policy::LeastLoadedDispatch: return "least-loaded";
    }
    return "?";
}

// Chunk priority: the matching scans chunks in this order and admits each
// one iff both endpoints of its edge are still free.
struct ChunkOrder {
    bool by_weight = true;  // false: fifo (arrival rank only)

    bool before(const PendingChunk& a, const PendingChunk& b) const {
        if (by_weight && a.weight != b.weight) return a.weight > b.weight;
        if (a.arrival_rank != b.arrival_rank) return a.arrival_rank < b.arrival_rank;
        return a.id.index < b.id.index;
    }
};

struct BlockRecord {
    ChunkId chunk;    // rejected chunk
    ChunkId blocker;  // matched chunk holding one of its endpoints at rejection time
};

struct MatchResult {
    std::vector<ChunkId> matched;        // in admission order
    std::vector<BlockRecord> blocked;    // in rejection order
};

// Greedy stable matching over one step's pending chunks.  The blocker is the
// chunk already matched at the busy transmitter endpoint, or at the receiver
// endpoint if the transmitter is free; it is recorded at rejection time.
inline MatchResult build_stable_matching(const std::vector<PendingChunk>& pending,
                                         const ChunkOrder& order = {}) {
    std::vector<const PendingChunk*> sorted;
    sorted.reserve(pending.size());
    for (const PendingChunk& c : pending) {
        if (c.edge.transmitter < 0 || c.edge.receiver < 0) {
            throw std::invalid_argument("pending chunk without an assigned edge");
        }
        sorted.push_back(&c);
    }
    std::stable_sort(sorted.begin(), sorted.end(),
                     [&](const PendingChunk* a, const PendingChunk* b) { return order.before(*a, *b); });
    MatchResult out;
    std::map<int, ChunkId> busy;  // endpoint node -> matched chunk
    for (const PendingChunk* c : sorted) {
        auto t = busy.find(c->edge.transmitter);
        auto r = busy.find(c->edge.receiver);
        if (t == busy.end() && r == busy.end()) {
            busy.emplace(c->edge.transmitter, c->id);
            busy.emplace(c->edge.receiver, c->id);
            out.matched.push_back(c->id);
        } else {
            out.blocked.push_back(BlockRecord{c->id, t != busy.end() ? t->second : r->second});
        }
    }
    return out;
}

struct StepRecord {
    Int time = 0;
    std::vector<ChunkId> matched;
    std::vector<BlockRecord> blocked;
};

struct FixedSend {
    int packet = -1;
    Int departure = 0;  // = release; the link is uncontended
    Rational latency;   // w_p * l_p
};

struct RunLog {
    Instance instance;
    Policy policy = Policy::StableWeight;
    std::uint64_t seed = 0;
    std::vector<int> ranks;                     // arrival rank per packet
    std::vector<Assignment> assignments;        // per packet
    std::vector<StepRecord> steps;              // only steps with pending chunks
    std::vector<FixedSend> fixed_sends;
    std::vector<std::vector<Int>> transmit_step;  // [packet][chunk-1]; -1 = never
    std::vector<std::vector<Int>> delivery;       // transmit + 1 + attach delays
    Int horizon = 0;
    // False for logs reconstructed from outside the engine (e.g. the oracle),
    // which carry no dispatch-time views or blocker records.
    bool has_blocking_records = true;

    const Packet& packet(int idx) const { return instance.packets.at(static_cast<size_t>(idx)); }
    Rational chunk_weight(int packet_idx) const {
        const Assignment& a = assignments.at(static_cast<size_t>(packet_idx));
        return packet(packet_idx).weight / a.chunk_count;
    }
};

struct RunOptions {
    Policy policy = Policy::StableWeight;
    std::uint64_t seed = 0;  // consumed by random-dispatch only
    std::map<std::string, ForcedRoute> forced_routes;  // packet id -> route
};

// Step-by-step simulation, exposed so tests can drive and inspect single
// steps.  Typical use is just run() below.
class Simulation {
public:
    Simulation(const Instance& inst, const RunOptions& opts = {})
        : opts_(opts), rng_(opts.seed) {
        if (std::vector<std::string> bad = validate_instance(inst); !bad.empty()) {
            throw std::invalid_argument("invalid instance: " + bad.front());
        }
        log_.instance = inst;
        log_.policy = opts.policy;
        log_.seed = opts.seed;
        log_.ranks = arrival_ranks(inst);
        log_.horizon = horizon_bound(inst);
        const size_t n = inst.packets.size();
        log_.assignments.resize(n);
        log_.transmit_step.resize(n);
        log_.delivery.resize(n);
        arrival_order_.resize(n);
        for (size_t i = 0; i < n; ++i) arrival_order_[static_cast<size_t>(log_.ranks[i])] = static_cast<int>(i);
        now_ = 0;
        if (!inst.packets.empty()) {
            Int first = inst.packets[static_cast<size_t>(arrival_order_[0])].release;
            now_ = first;
        }
    }

    bool finished() const {
        return next_arrival_ == arrival_order_.size() && pending_.empty();
    }
    Int now() const { return now_; }
    const std::vector<PendingChunk>& pending() const { return pending_; }

    // Runs dispatch for every packet released by now, then one matching step.
    void step() {
        const Instance& inst = log_.instance;
        while (next_arrival_ < arrival_order_.size()) {
            int idx = arrival_order_[next_arrival_];
            if (inst.packets[static_cast<size_t>(idx)].release > now_) break;
            dispatch_packet(idx);
            ++next_arrival_;
        }
        if (!pending_.empty()) {
            ChunkOrder order{opts_.policy != Policy::FifoPriority};
            MatchResult m = build_stable_matching(pending_, order);
            StepRecord rec;
            rec.time = now_;
            rec.matched = m.matched;
            rec.blocked = m.blocked;
            for (const ChunkId& c : m.matched) mark_transmitted(c);
            log_.steps.push_back(std::move(rec));
        }
        // Advance; when idle, skip straight to the next arrival.
        ++now_;
        if (pending_.empty() && next_arrival_ < arrival_order_.size()) {
            Int next = inst.packets[static_cast<size_t>(arrival_order_[next_arrival_])].release;
            now_ = std::max(now_, next);
        }
    }

    RunLog finish() {
        while (!finished()) {
            if (now_ > log_.horizon) {
                throw std::logic_error("scheduler overran its horizon bound");
            }
            step();
        }
        return std::move(log_);
    }

private:
    void dispatch_packet(int idx) {
        const Instance& inst = log_.instance;
        const Packet& p = inst.packets[static_cast<size_t>(idx)];
        PendingView view{pending_};
        Assignment a;
        if (auto it = opts_.forced_routes.find(p.id); it != opts_.forced_routes.end()) {
            a = dispatch_forced(inst.topology, p, idx, view, it->second);
        } else {
            switch (opts_.policy) {
                case Policy::StableWeight:
                case Policy::FifoPriority:
                    a = dispatch(inst.topology, p, idx, view);
                    break;
                case Policy::RandomDispatch:
                    a = dispatch_random(p, idx, view);
                    break;
                case Policy::LeastLoadedDispatch:
                    a = dispatch_least_loaded(p, idx, view);
                    break;
            }
        }
        log_.assignments[static_cast<size_t>(idx)] = a;
        if (a.route == RouteKind::FixedLink) {
            log_.fixed_sends.push_back(FixedSend{idx, p.release, p.weight * a.link_delay});
            return;
        }
        const Rational cw = p.weight / a.chunk_count;
        log_.transmit_step[static_cast<size_t>(idx)].assign(static_cast<size_t>(a.chunk_count), -1);
        log_.delivery[static_cast<size_t>(idx)].assign(static_cast<size_t>(a.chunk_count), -1);
        for (int k = 1; k <= a.chunk_count; ++k) {
            pending_.push_back(PendingChunk{ChunkId{idx, k}, a.edge, cw,
                                            log_.ranks[static_cast<size_t>(idx)]});
        }
    }

    // Uniform candidate pick; the fixed-link comparison stays as in the
    // algorithm, and the link is a fallback when no candidate exists.
    Assignment dispatch_random(const Packet& p, int idx, const PendingView& view) {
        std::vector<EdgeRef> cands = candidate_edges(log_.instance.topology, p);
        if (cands.empty()) return dispatch(log_.instance.topology, p, idx, view);
        size_t pick = static_cast<size_t>(rng_() % cands.size());
        return with_link_rule(p, idx, view, cands[pick]);
    }

    Assignment dispatch_least_loaded(const Packet& p, int idx, const PendingView& view) {
        std::vector<EdgeRef> cands = candidate_edges(log_.instance.topology, p);
        if (cands.empty()) return dispatch(log_.instance.topology, p, idx, view);
        int best = -1;
        Rational best_load;
        for (size_t i = 0; i < cands.size(); ++i) {
            Rational load = 0;
            for (const PendingChunk& c : view.chunks) {
                if (c.edge.transmitter == cands[i].transmitter ||
                    c.edge.receiver == cands[i].receiver) {
                    load += c.weight;
                }
            }
            if (best < 0 || load < best_load) {
                best = static_cast<int>(i);
                best_load = load;
            }
        }
        return with_link_rule(p, idx, view, cands[static_cast<size_t>(best)]);
    }

    Assignment with_link_rule(const Packet& p, int idx, const PendingView& view,
                              const EdgeRef& picked) {
        const Topology& topo = log_.instance.topology;
        Assignment a = dispatch_forced(topo, p, idx, view, ForcedRoute{RouteKind::Reconfig, picked});
        const std::optional<Int> link = topo.link_delay(p.source, p.destination);
        if (link && p.weight * *link <= a.alpha) {
            return dispatch_forced(topo, p, idx, view, ForcedRoute{RouteKind::FixedLink, {}});
        }
        return a;
    }

    void mark_transmitted(const ChunkId& c) {
        const Topology& topo = log_.instance.topology;
        const Assignment& a = log_.assignments[static_cast<size_t>(c.packet)];
        Int att = topo.attach_delay(a.edge.transmitter) + topo.attach_delay(a.edge.receiver);
        log_.transmit_step[static_cast<size_t>(c.packet)][static_cast<size_t>(c.index - 1)] = now_;
        log_.delivery[static_cast<size_t>(c.packet)][static_cast<size_t>(c.index - 1)] =
            now_ + 1 + att;
        pending_.erase(std::remove_if(pending_.begin(), pending_.end(),
                                      [&](const PendingChunk& x) { return x.id == c; }),
                       pending_.end());
    }

    RunOptions opts_;
    std::mt19937_64 rng_;
    RunLog log_;
    std::vector<int> arrival_order_;
    size_t next_arrival_ = 0;
    std::vector<PendingChunk> pending_;
    Int now_ = 0;
};

inline RunLog run(const Instance& inst, const RunOptions& opts = {}) {
    return Simulation(inst, opts).finish();
}

struct StabilityViolation {
    Int time = 0;
    ChunkId chunk;
    std::string what;
};

// Re-derives the pending set of every recorded step from chunk timings and
// checks (a) matched chunks never share an endpoint, (b) every unmatched
// pending chunk has an adjacent matched chunk of no lower priority, and
// (c) recorded blockers are matched, adjacent chunks.  Runs under the log's
// own priority order so baseline logs are checked against their own rule.
inline std::vector<StabilityViolation> verify_stability(const RunLog& log) {
    std::vector<StabilityViolation> out;
    const Instance& inst = log.instance;
    ChunkOrder order{log.policy != Policy::FifoPriority};
    auto chunk_at = [&](int packet, int index) {
        const Assignment& a = log.assignments[static_cast<size_t>(packet)];
        return PendingChunk{ChunkId{packet, index}, a.edge, log.chunk_weight(packet),
                            log.ranks[static_cast<size_t>(packet)]};
    };
    for (const StepRecord& step : log.steps) {
        // Pending at time t: released, assigned to an edge, not yet sent.
        std::vector<PendingChunk> pending;
        for (size_t pi = 0; pi < inst.packets.size(); ++pi) {
            const Assignment& a = log.assignments[pi];
            if (a.route != RouteKind::Reconfig || inst.packets[pi].release > step.time) continue;
            for (int k = 1; k <= a.chunk_count; ++k) {
                Int tx = log.transmit_step[pi][static_cast<size_t>(k - 1)];
                if (tx < 0 || tx >= step.time) {
                    pending.push_back(chunk_at(static_cast<int>(pi), k));
                }
            }
        }
        auto find_pending = [&](const ChunkId& id) -> const PendingChunk* {
            for (const PendingChunk& c : pending) {
                if (c.id == id) return &c;
            }
            return nullptr;
        };
        std::map<int, ChunkId> busy;
        std::vector<ChunkId> matched = step.matched;
        for (const ChunkId& id : matched) {
            const PendingChunk* c = find_pending(id);
            if (!c) {
                out.push_back({step.time, id, "matched chunk was not pending"});
                continue;
            }
            if (log.transmit_step[static_cast<size_t>(id.packet)][static_cast<size_t>(id.index - 1)] !=
                step.time) {
                out.push_back({step.time, id, "matched chunk not recorded as sent this step"});
            }
            for (int endpoint : {c->edge.transmitter, c->edge.receiver}) {
                if (!busy.emplace(endpoint, id).second) {
                    out.push_back({step.time, id, "endpoint " + inst.topology.name_of(endpoint) +
                                                      " carries two matched chunks"});
                }
            }
        }
        for (const PendingChunk& c : pending) {
            if (std::find(matched.begin(), matched.end(), c.id) != matched.end()) continue;
            auto t = busy.find(c.edge.transmitter);
            auto r = busy.find(c.edge.receiver);
            if (t == busy.end() && r == busy.end()) {
                out.push_back({step.time, c.id, "unmatched chunk with both endpoints free"});
                continue;
            }
            // Some busy endpoint must carry a chunk of no lower priority,
            // else swapping it out would improve the matching and the
            // matching was not stable. A lower-priority occupant on the
            // other endpoint is fine; one justified block suffices.
            bool justified = false;
            for (auto it : {t, r}) {
                if (it == busy.end()) continue;
                const PendingChunk* b = find_pending(it->second);
                if (b && !order.before(c, *b)) justified = true;
            }
            if (!justified) {
                out.push_back({step.time, c.id, "blocked only by lower-priority chunks"});
            }
        }
        if (log.has_blocking_records) {
            for (const BlockRecord& br : step.blocked) {
                const PendingChunk* c = find_pending(br.chunk);
                const PendingChunk* b = find_pending(br.blocker);
                if (!c || !b) {
                    out.push_back({step.time, br.chunk, "block record names a non-pending chunk"});
                    continue;
                }
                if (std::find(matched.begin(), matched.end(), br.blocker) == matched.end()) {
                    out.push_back({step.time, br.chunk, "recorded blocker was not matched"});
                }
                if (b->edge.transmitter != c->edge.transmitter &&
                    b->edge.receiver != c->edge.receiver) {
                    out.push_back({step.time, br.chunk, "recorded blocker is not adjacent"});
                }
            }
        }
    }
    return out;
}

} // namespace hybridsched
