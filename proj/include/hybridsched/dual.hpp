#pragma once

// Dual-fitting certificates.  From a run log we build the dual solution
// (alpha from dispatch-time impacts, beta from in-flight chunk weight per
// endpoint and step) and machine-check, in exact arithmetic, the chain of
// facts behind the competitive bound: the beta identity, the charging scheme
// that bounds the run cost by sum(alpha), the impact bound, halved dual
// feasibility, and the resulting cost ratio.

#include "metrics.hpp"

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace hybridsched {

struct DualSolution {
    Rational epsilon;
    std::vector<Rational> alpha;                    // per packet
    std::map<std::pair<int, Int>, Rational> beta_t; // (transmitter, step) -> weight in flight
    std::map<std::pair<int, Int>, Rational> beta_r; // (receiver, step)
    Rational beta_t_sum;
    Rational beta_r_sum;
    Rational objective;  // sum(alpha) - (1/(2+eps)) * (sum(beta_t) + sum(beta_r))

    Rational beta_at_t(int node, Int t) const {
        auto it = beta_t.find({node, t});
        return it == beta_t.end() ? Rational(0) : it->second;
    }
    Rational beta_at_r(int node, Int t) const {
        auto it = beta_r.find({node, t});
        return it == beta_r.end() ? Rational(0) : it->second;
    }
};

// A chunk is active from its packet's release until its delivery; beta at
// each endpoint of its edge accumulates the chunk weight over that window.
inline DualSolution build_dual(const RunLog& log, const Rational& eps) {
    if (eps <= 0) throw std::invalid_argument("eps must be > 0");
    detail::require_complete(log);
    DualSolution dual;
    dual.epsilon = eps;
    dual.alpha.reserve(log.instance.packets.size());
    for (const Assignment& a : log.assignments) dual.alpha.push_back(a.alpha);
    for (size_t pi = 0; pi < log.instance.packets.size(); ++pi) {
        const Assignment& a = log.assignments[pi];
        if (a.route != RouteKind::Reconfig) continue;
        const Rational cw = log.chunk_weight(static_cast<int>(pi));
        const Int release = log.instance.packets[pi].release;
        for (Int del : log.delivery[pi]) {
            for (Int t = release; t < del; ++t) {
                dual.beta_t[{a.edge.transmitter, t}] += cw;
                dual.beta_r[{a.edge.receiver, t}] += cw;
            }
        }
    }
    dual.beta_t_sum = 0;
    for (const auto& [key, v] : dual.beta_t) dual.beta_t_sum += v;
    dual.beta_r_sum = 0;
    for (const auto& [key, v] : dual.beta_r) dual.beta_r_sum += v;
    Rational alpha_sum = 0;
    for (const Rational& a : dual.alpha) alpha_sum += a;
    dual.objective =
        alpha_sum - (dual.beta_t_sum + dual.beta_r_sum) / (Rational(2) + eps);
    return dual;
}

struct BetaIdentityReport {
    bool ok = false;
    Rational transmitter_sum;
    Rational receiver_sum;
    Rational reconfig_latency;  // weighted latency of reconfig-routed chunks only
    Rational total_cost;
};

// Both beta sums equal the reconfig part of the run cost exactly, and hence
// are at most the full run cost.
inline BetaIdentityReport check_beta_identity(const RunLog& log, const DualSolution& dual) {
    BetaIdentityReport rep;
    rep.transmitter_sum = dual.beta_t_sum;
    rep.receiver_sum = dual.beta_r_sum;
    rep.reconfig_latency = 0;
    for (size_t pi = 0; pi < log.instance.packets.size(); ++pi) {
        const Assignment& a = log.assignments[pi];
        if (a.route != RouteKind::Reconfig) continue;
        const Rational cw = log.chunk_weight(static_cast<int>(pi));
        const Int release = log.instance.packets[pi].release;
        for (Int del : log.delivery[pi]) rep.reconfig_latency += cw * (del - release);
    }
    rep.total_cost = run_cost(log);
    rep.ok = rep.transmitter_sum == rep.reconfig_latency &&
             rep.receiver_sum == rep.reconfig_latency && rep.reconfig_latency <= rep.total_cost;
    return rep;
}

// Charging scheme: every unit of run cost lands on some packet's account.
// A fixed-link packet absorbs its own w*l.  A reconfig chunk accrues w_c per
// step in [release, delivery): transmission and propagation steps go to its
// own packet, a waiting step goes to its own packet when the recorded
// blocker is a sibling chunk or belongs to an earlier packet, and to the
// blocking packet when the blocker arrived later.
struct ChargeLedger {
    struct Entry {
        Rational total;
        Rational self_rounds;        // own transmission + propagation + fixed latency
        Rational sibling_blocked;    // waiting on a sibling chunk
        Rational blocked_by_earlier; // waiting on an earlier packet's chunk
        Rational blocks_later;       // charges received for blocking earlier packets
    };
    std::vector<Entry> entries;
    Rational total;
};

inline ChargeLedger build_charges(const RunLog& log) {
    if (!log.has_blocking_records) {
        throw std::invalid_argument("log carries no blocker records");
    }
    detail::require_complete(log);
    ChargeLedger ledger;
    ledger.entries.resize(log.instance.packets.size());
    ledger.total = 0;
    auto charge = [&](int packet, Rational amount, Rational ChargeLedger::Entry::* slot) {
        ChargeLedger::Entry& e = ledger.entries[static_cast<size_t>(packet)];
        e.*slot += amount;
        e.total += amount;
        ledger.total += amount;
    };
    for (const FixedSend& f : log.fixed_sends) {
        charge(f.packet, f.latency, &ChargeLedger::Entry::self_rounds);
    }
    // Transmission plus propagation: [transmit, delivery) is self time.
    for (size_t pi = 0; pi < log.instance.packets.size(); ++pi) {
        const Assignment& a = log.assignments[pi];
        if (a.route != RouteKind::Reconfig) continue;
        const Rational cw = log.chunk_weight(static_cast<int>(pi));
        for (size_t k = 0; k < log.transmit_step[pi].size(); ++k) {
            charge(static_cast<int>(pi),
                   cw * (log.delivery[pi][k] - log.transmit_step[pi][k]),
                   &ChargeLedger::Entry::self_rounds);
        }
    }
    // Waiting steps: exactly the recorded rejections.
    for (const StepRecord& step : log.steps) {
        for (const BlockRecord& br : step.blocked) {
            const Rational cw = log.chunk_weight(br.chunk.packet);
            if (br.blocker.packet == br.chunk.packet) {
                charge(br.chunk.packet, cw, &ChargeLedger::Entry::sibling_blocked);
            } else if (log.ranks[static_cast<size_t>(br.blocker.packet)] <
                       log.ranks[static_cast<size_t>(br.chunk.packet)]) {
                charge(br.chunk.packet, cw, &ChargeLedger::Entry::blocked_by_earlier);
            } else {
                charge(br.blocker.packet, cw, &ChargeLedger::Entry::blocks_later);
            }
        }
    }
    return ledger;
}

struct AlphaBoundReport {
    struct Violation {
        int packet = -1;
        Rational charge;
        Rational alpha;
    };
    bool ok = false;
    bool conserves_cost = false;  // sum of charges == run_cost, exactly
    Rational charge_total;
    Rational cost;
    std::vector<Violation> violations;
};

// Every packet's account stays within its alpha, and nothing is lost:
// together these give run_cost <= sum(alpha).
inline AlphaBoundReport check_alpha_bound(const RunLog& log, const ChargeLedger& ledger,
                                          const DualSolution& dual) {
    AlphaBoundReport rep;
    rep.charge_total = ledger.total;
    rep.cost = run_cost(log);
    rep.conserves_cost = ledger.total == rep.cost;
    for (size_t pi = 0; pi < ledger.entries.size(); ++pi) {
        if (ledger.entries[pi].total > dual.alpha[pi]) {
            rep.violations.push_back({static_cast<int>(pi), ledger.entries[pi].total,
                                      dual.alpha[pi]});
        }
    }
    rep.ok = rep.conserves_cost && rep.violations.empty();
    return rep;
}

struct SweepViolation {
    int packet = -1;
    EdgeRef edge;
    Int time = 0;
    Rational lhs;
    Rational rhs;
};

struct SweepReport {
    bool ok = false;
    long long constraints_checked = 0;
    std::vector<SweepViolation> violations;
    // The critical constraint: the one with the largest lhs - rhs margin.
    bool has_critical = false;
    Rational critical_lhs;
    Rational critical_rhs;
};

namespace detail {

// Shared sweep for the impact bound and for halved dual feasibility: for a
// bound B(p,e), check  B - d(e) * (beta_t(t) + beta_r(r,t)) <= 2*w_p*(t +
// D(e) - r_p)  for every t in [r_p, horizon).  The right side grows by
// 2*w_p per step while the beta term only ever helps, so once the right
// side alone reaches B the remaining steps of this (p,e) row are satisfied
// and are counted without re-evaluation.
inline void sweep_rows(const RunLog& log, const DualSolution& dual,
                       const std::vector<std::vector<ImpactBreakdown>>& rows, SweepReport& rep,
                       bool use_alpha, const std::vector<Rational>& alphas) {
    const Topology& topo = log.instance.topology;
    for (size_t pi = 0; pi < rows.size(); ++pi) {
        const Packet& p = log.instance.packets[pi];
        for (const ImpactBreakdown& b : rows[pi]) {
            const Rational bound = use_alpha ? alphas[pi] : b.total;
            const Int d = topo.edge_delay(b.edge);
            const Int D = path_delay(topo, b.edge);
            const Rational two_w = 2 * p.weight;
            Rational rhs = two_w * D;  // at t = r_p
            for (Int t = p.release; t < log.horizon; ++t) {
                Rational beta = dual.beta_at_t(b.edge.transmitter, t) +
                                dual.beta_at_r(b.edge.receiver, t);
                Rational lhs = bound - d * beta;
                ++rep.constraints_checked;
                if (lhs > rhs) {
                    rep.violations.push_back({static_cast<int>(pi), b.edge, t, lhs, rhs});
                }
                if (!rep.has_critical || lhs - rhs > rep.critical_lhs - rep.critical_rhs) {
                    rep.has_critical = true;
                    rep.critical_lhs = lhs;
                    rep.critical_rhs = rhs;
                }
                if (rhs >= bound) {
                    // Monotone tail: the right side only grows from here and
                    // the beta term only lowers the left side, so the rest of
                    // this row is certified wholesale.
                    rep.constraints_checked += log.horizon - t - 1;
                    break;
                }
                rhs += two_w;
            }
        }
    }
}

} // namespace detail

// For every packet, every candidate edge (with the impact recorded at its
// dispatch) and every step up to the horizon:
//   Imp(p,e) - d(e) * (beta_t + beta_r) <= 2 * w_p * (t + D(e) - r_p).
inline SweepReport check_imp_bound(const RunLog& log, const DualSolution& dual) {
    SweepReport rep;
    std::vector<std::vector<ImpactBreakdown>> rows;
    rows.reserve(log.assignments.size());
    for (const Assignment& a : log.assignments) rows.push_back(a.candidates);
    detail::sweep_rows(log, dual, rows, rep, false, {});
    rep.ok = rep.violations.empty();
    return rep;
}

// Feasibility of the halved dual (alpha/2, beta/2): equivalently
//   alpha_p - d(e) * (beta_t + beta_r) <= 2 * w_p * (t + D(e) - r_p)
// on every candidate edge and step, plus alpha_p <= w_p * l_p (which covers
// the halved form too) for packets with a fixed link.
inline SweepReport check_halved_feasible(const RunLog& log, const DualSolution& dual) {
    SweepReport rep;
    std::vector<std::vector<ImpactBreakdown>> rows;
    rows.reserve(log.assignments.size());
    for (const Assignment& a : log.assignments) rows.push_back(a.candidates);
    detail::sweep_rows(log, dual, rows, rep, true, dual.alpha);
    for (size_t pi = 0; pi < log.instance.packets.size(); ++pi) {
        const Packet& p = log.instance.packets[pi];
        std::optional<Int> link = log.instance.topology.link_delay(p.source, p.destination);
        if (!link) continue;
        const Rational rhs = p.weight * *link;
        for (const Rational& lhs : {dual.alpha[pi], Rational(dual.alpha[pi] / 2)}) {
            ++rep.constraints_checked;
            if (lhs > rhs) {
                rep.violations.push_back({static_cast<int>(pi), EdgeRef{}, -1, lhs, rhs});
            }
        }
    }
    rep.ok = rep.violations.empty();
    return rep;
}

struct RatioReport {
    Rational epsilon;
    Rational cost;             // run cost of the log
    Rational dual_objective;
    Rational lower_bound;      // dual_objective / 2, a bound on the slow optimum
    Rational empirical_ratio;  // cost / lower_bound (0 when the bound is not positive)
    Rational guarantee;        // 2 * (2/eps + 1)
    bool bound_holds = false;  // cost <= ((2+eps)/eps) * dual_objective
};

inline RatioReport check_ratio(const RunLog& log, const DualSolution& dual) {
    RatioReport rep;
    rep.epsilon = dual.epsilon;
    rep.cost = run_cost(log);
    rep.dual_objective = dual.objective;
    rep.lower_bound = dual.objective / 2;
    rep.guarantee = 2 * (Rational(2) / dual.epsilon + 1);
    rep.bound_holds =
        rep.cost <= (Rational(2) + dual.epsilon) / dual.epsilon * dual.objective;
    rep.empirical_ratio = rep.lower_bound > 0 ? rep.cost / rep.lower_bound : Rational(0);
    return rep;
}

} // namespace hybridsched
