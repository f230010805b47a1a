#pragma once

// Cost accounting and the fractional relaxation: run costs in two
// independently computed forms, fractional schedules with feasibility
// checking at reduced edge capacity 1/(2+eps), and the dilation that turns
// an integral run into a feasible fractional schedule.

#include "engine.hpp"

#include <map>
#include <stdexcept>
#include <tuple>
#include <vector>

namespace hybridsched {

namespace detail {

inline void require_complete(const RunLog& log) {
    for (size_t pi = 0; pi < log.instance.packets.size(); ++pi) {
        const Assignment& a = log.assignments[pi];
        if (a.packet < 0) throw std::invalid_argument("incomplete log: packet never dispatched");
        if (a.route != RouteKind::Reconfig) continue;
        for (Int tx : log.transmit_step[pi]) {
            if (tx < 0) throw std::invalid_argument("incomplete log: chunk never transmitted");
        }
    }
}

} // namespace detail

// Total weighted fractional latency: every chunk contributes
// w_c * (delivery - release), every fixed-link packet w_p * l_p.
inline Rational run_cost(const RunLog& log) {
    detail::require_complete(log);
    Rational total = 0;
    for (size_t pi = 0; pi < log.instance.packets.size(); ++pi) {
        const Assignment& a = log.assignments[pi];
        if (a.route != RouteKind::Reconfig) continue;
        const Rational cw = log.chunk_weight(static_cast<int>(pi));
        const Int release = log.instance.packets[pi].release;
        for (Int del : log.delivery[pi]) total += cw * (del - release);
    }
    for (const FixedSend& f : log.fixed_sends) total += f.latency;
    return total;
}

// Same value accrued per time step: each step t adds the total weight of
// chunks and fixed sends still in flight at t.  Quadratic and deliberately
// independent of run_cost; used to cross-check it.
inline Rational run_cost_accrual(const RunLog& log) {
    detail::require_complete(log);
    Int lo = 0, hi = 0;
    bool any = false;
    auto widen = [&](Int a, Int b) {
        if (!any) {
            lo = a;
            hi = b;
            any = true;
        } else {
            lo = std::min(lo, a);
            hi = std::max(hi, b);
        }
    };
    for (size_t pi = 0; pi < log.instance.packets.size(); ++pi) {
        if (log.assignments[pi].route != RouteKind::Reconfig) continue;
        for (Int del : log.delivery[pi]) widen(log.instance.packets[pi].release, del);
    }
    for (const FixedSend& f : log.fixed_sends) {
        const Packet& p = log.packet(f.packet);
        Int l = log.assignments[static_cast<size_t>(f.packet)].link_delay;
        widen(p.release, p.release + l);
    }
    Rational total = 0;
    for (Int t = lo; t < hi; ++t) {
        for (size_t pi = 0; pi < log.instance.packets.size(); ++pi) {
            const Assignment& a = log.assignments[pi];
            const Int release = log.instance.packets[pi].release;
            if (a.route == RouteKind::Reconfig) {
                for (Int del : log.delivery[pi]) {
                    if (release <= t && t < del) total += log.chunk_weight(static_cast<int>(pi));
                }
            } else if (release <= t && t < release + a.link_delay) {
                total += log.instance.packets[pi].weight;
            }
        }
    }
    return total;
}

// A fractional schedule: x[(p,e,t)] is the fraction of packet p sent on edge
// e at step t, y[p] the fraction routed over p's fixed link.
struct FractionalSchedule {
    std::map<std::tuple<int, EdgeRef, Int>, Rational> x;
    std::map<int, Rational> y;
};

inline Rational primal_cost(const FractionalSchedule& sched, const Instance& inst) {
    Rational total = 0;
    for (const auto& [key, value] : sched.x) {
        const auto& [pi, e, t] = key;
        const Packet& p = inst.packets.at(static_cast<size_t>(pi));
        total += p.weight * value * (t + path_delay(inst.topology, e) - p.release);
    }
    for (const auto& [pi, value] : sched.y) {
        const Packet& p = inst.packets.at(static_cast<size_t>(pi));
        std::optional<Int> link = inst.topology.link_delay(p.source, p.destination);
        if (!link) throw std::invalid_argument("y set for packet " + p.id + " without a link");
        total += p.weight * value * *link;
    }
    return total;
}

struct PrimalViolation {
    std::string what;
    Rational lhs;
    Rational rhs;
};

// Feasibility at speed reduced by 2+eps: nonnegative variables on legal
// routes at legal times, unit coverage per packet, and per-endpoint load at
// most 1/(2+eps) per step (a chunk of edge e consumes d(e) capacity).
inline std::vector<PrimalViolation> check_primal_feasible(const FractionalSchedule& sched,
                                                          const Instance& inst,
                                                          const Rational& eps) {
    if (eps < 0) throw std::invalid_argument("eps must be >= 0");
    std::vector<PrimalViolation> out;
    const Rational cap = Rational(1) / (2 + eps);
    std::map<std::pair<int, Int>, Rational> load;  // (endpoint, t)
    std::vector<Rational> coverage(inst.packets.size(), Rational(0));
    for (const auto& [key, value] : sched.x) {
        const auto& [pi, e, t] = key;
        const Packet& p = inst.packets.at(static_cast<size_t>(pi));
        if (value < 0) out.push_back({"negative x for packet " + p.id, value, 0});
        std::vector<EdgeRef> cands = candidate_edges(inst.topology, p);
        if (std::find(cands.begin(), cands.end(), e) == cands.end()) {
            out.push_back({"x on non-candidate edge for packet " + p.id, value, 0});
            continue;
        }
        if (t < p.release) {
            out.push_back({"x before release of packet " + p.id, Rational(t), Rational(p.release)});
        }
        coverage[static_cast<size_t>(pi)] += value;
        const Rational used = inst.topology.edge_delay(e) * value;
        load[{e.transmitter, t}] += used;
        load[{e.receiver, t}] += used;
    }
    for (const auto& [pi, value] : sched.y) {
        const Packet& p = inst.packets.at(static_cast<size_t>(pi));
        if (value < 0) out.push_back({"negative y for packet " + p.id, value, 0});
        if (!inst.topology.link_delay(p.source, p.destination)) {
            out.push_back({"y without fixed link for packet " + p.id, value, 0});
            continue;
        }
        coverage[static_cast<size_t>(pi)] += value;
    }
    for (size_t pi = 0; pi < inst.packets.size(); ++pi) {
        if (coverage[pi] < 1) {
            out.push_back({"packet " + inst.packets[pi].id + " not fully covered", coverage[pi], 1});
        }
    }
    for (const auto& [key, value] : load) {
        if (value > cap) {
            out.push_back({"endpoint " + inst.topology.name_of(key.first) + " overloaded at step " +
                               std::to_string(key.second),
                           value, cap});
        }
    }
    return out;
}

// Stretches an integral run into a fractional schedule feasible at speed
// 1/(2+eps): with m = ceil(2+eps), a chunk sent at step t becomes mass
// 1/(m*d(e)) at each of the m steps m*t .. m*t+m-1, and fixed-link packets
// ride y.  Load per endpoint and step is then at most 1/m <= 1/(2+eps).
inline FractionalSchedule dilate_run(const RunLog& log, const Rational& eps) {
    if (eps < 0) throw std::invalid_argument("eps must be >= 0");
    detail::require_complete(log);
    const Int m = ceil_positive(Rational(2) + eps);
    FractionalSchedule out;
    for (size_t pi = 0; pi < log.instance.packets.size(); ++pi) {
        const Assignment& a = log.assignments[pi];
        if (a.route != RouteKind::Reconfig) continue;
        const Rational mass = Rational(1, m * a.chunk_count);
        for (Int tx : log.transmit_step[pi]) {
            for (Int j = 0; j < m; ++j) {
                out.x[{static_cast<int>(pi), a.edge, m * tx + j}] += mass;
            }
        }
    }
    for (const FixedSend& f : log.fixed_sends) out.y[f.packet] = 1;
    return out;
}

} // namespace hybridsched
