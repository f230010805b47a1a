#pragma once

// Report assembly: the three CSV schemas and the certification pipeline
// feeding them.  Every numeric column is emitted twice, as an exact rational
// and as a decimal approximation (suffix _dec) for plotting.

#include "dual.hpp"
#include "oracle.hpp"

#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace hybridsched {

namespace detail {

inline void put_rational(std::ostringstream& out, const Rational& v) {
    out << format_rational(v) << ',' << format_decimal(v);
}

} // namespace detail

// packet_id,route,edge,alpha,alpha_dec,release,completion,weighted_latency,weighted_latency_dec
inline std::string per_packet_csv(const RunLog& log) {
    std::ostringstream out;
    out << "packet_id,route,edge,alpha,alpha_dec,release,completion,weighted_latency,"
           "weighted_latency_dec\n";
    const Topology& topo = log.instance.topology;
    for (size_t pi = 0; pi < log.instance.packets.size(); ++pi) {
        const Packet& p = log.instance.packets[pi];
        const Assignment& a = log.assignments[pi];
        Int completion = 0;
        Rational latency = 0;
        std::string edge = "-";
        if (a.route == RouteKind::Reconfig) {
            const Rational cw = log.chunk_weight(static_cast<int>(pi));
            for (Int del : log.delivery[pi]) {
                completion = std::max(completion, del);
                latency += cw * (del - p.release);
            }
            edge = topo.name_of(a.edge.transmitter) + ":" + topo.name_of(a.edge.receiver);
        } else {
            completion = p.release + a.link_delay;
            latency = p.weight * a.link_delay;
        }
        out << p.id << ',' << (a.route == RouteKind::Reconfig ? "reconfig" : "fixed") << ','
            << edge << ',';
        detail::put_rational(out, a.alpha);
        out << ',' << p.release << ',' << completion << ',';
        detail::put_rational(out, latency);
        out << '\n';
    }
    return out.str();
}

struct CertRow {
    std::string check;
    long long constraints_checked = 0;
    long long violations = 0;
    bool has_bounds = false;  // lhs/rhs columns are blank otherwise
    Rational lhs_max;         // left side of the tightest (or worst) constraint
    Rational rhs_min;         // right side of the same constraint
    bool ok = false;
};

// check,constraints_checked,violations,lhs_max,lhs_max_dec,rhs_min,rhs_min_dec,status
inline std::string certification_csv(const std::vector<CertRow>& rows) {
    std::ostringstream out;
    out << "check,constraints_checked,violations,lhs_max,lhs_max_dec,rhs_min,rhs_min_dec,status\n";
    for (const CertRow& r : rows) {
        out << r.check << ',' << r.constraints_checked << ',' << r.violations << ',';
        if (r.has_bounds) {
            detail::put_rational(out, r.lhs_max);
            out << ',';
            detail::put_rational(out, r.rhs_min);
        } else {
            out << ",,,";
        }
        out << ',' << (r.ok ? "ok" : "violated") << '\n';
    }
    return out.str();
}

struct CertifyOptions {
    bool all_lemmas = false;  // adds the full dual sweeps and weak duality
    // Optional optimum for the weak-duality row; ignored unless all_lemmas.
    const OracleResult* oracle = nullptr;
};

// Runs every certificate on one run log and collects the report rows.
inline std::vector<CertRow> certify(const RunLog& log, const Rational& eps,
                                    const CertifyOptions& opts = {}) {
    std::vector<CertRow> rows;
    DualSolution dual = build_dual(log, eps);

    {
        std::vector<StabilityViolation> v = verify_stability(log);
        long long pending_pairs = 0;
        for (const StepRecord& s : log.steps) {
            pending_pairs += static_cast<long long>(s.matched.size() + s.blocked.size());
        }
        rows.push_back(CertRow{"stability", pending_pairs, static_cast<long long>(v.size()),
                               false, {}, {}, v.empty()});
    }
    {
        BetaIdentityReport rep = check_beta_identity(log, dual);
        CertRow row{"beta_identity", 3, 0, true, {}, {}, rep.ok};
        // Show the side with the larger deviation from the reconfig latency.
        Rational dt = rep.transmitter_sum - rep.reconfig_latency;
        Rational dr = rep.receiver_sum - rep.reconfig_latency;
        row.lhs_max = (dt < 0 ? -dt : dt) >= (dr < 0 ? -dr : dr) ? rep.transmitter_sum
                                                                 : rep.receiver_sum;
        row.rhs_min = rep.reconfig_latency;
        if (!rep.ok) row.violations = 1;
        rows.push_back(row);
    }
    {
        ChargeLedger ledger = build_charges(log);
        AlphaBoundReport rep = check_alpha_bound(log, ledger, dual);
        rows.push_back(CertRow{"charge_conservation", 1, rep.conserves_cost ? 0 : 1, true,
                               rep.charge_total, rep.cost, rep.conserves_cost});
        CertRow row{"alpha_bound", static_cast<long long>(ledger.entries.size()),
                    static_cast<long long>(rep.violations.size()), false, {}, {},
                    rep.violations.empty()};
        // Tightest packet account: largest charge - alpha margin.
        bool first = true;
        for (size_t pi = 0; pi < ledger.entries.size(); ++pi) {
            Rational margin = ledger.entries[pi].total - dual.alpha[pi];
            if (first || margin > row.lhs_max - row.rhs_min) {
                row.has_bounds = true;
                row.lhs_max = ledger.entries[pi].total;
                row.rhs_min = dual.alpha[pi];
                first = false;
            }
        }
        rows.push_back(row);
    }
    if (opts.all_lemmas) {
        {
            SweepReport rep = check_imp_bound(log, dual);
            rows.push_back(CertRow{"imp_bound", rep.constraints_checked,
                                   static_cast<long long>(rep.violations.size()), rep.has_critical,
                                   rep.critical_lhs, rep.critical_rhs, rep.ok});
        }
        {
            SweepReport rep = check_halved_feasible(log, dual);
            rows.push_back(CertRow{"dual_feasibility", rep.constraints_checked,
                                   static_cast<long long>(rep.violations.size()), rep.has_critical,
                                   rep.critical_lhs, rep.critical_rhs, rep.ok});
        }
        {
            FractionalSchedule dilated = dilate_run(log, eps);
            std::vector<PrimalViolation> v = check_primal_feasible(dilated, log.instance, eps);
            long long checked = static_cast<long long>(dilated.x.size() + dilated.y.size() +
                                                       log.instance.packets.size());
            rows.push_back(CertRow{"dilation_feasible", checked, static_cast<long long>(v.size()),
                                   false, {}, {}, v.empty()});
        }
        if (opts.oracle) {
            FractionalSchedule dilated = dilate_run(opts.oracle->log, eps);
            Rational primal = primal_cost(dilated, log.instance);
            Rational lower = dual.objective / 2;
            rows.push_back(CertRow{"weak_duality", 1, lower <= primal ? 0 : 1, true, lower,
                                   primal, lower <= primal});
        }
    }
    {
        RatioReport rep = check_ratio(log, dual);
        Rational rhs = (Rational(2) + eps) / eps * rep.dual_objective;
        rows.push_back(
            CertRow{"ratio", 1, rep.bound_holds ? 0 : 1, true, rep.cost, rhs, rep.bound_holds});
    }
    return rows;
}

// policy,cost,cost_dec,dual_objective,dual_objective_dec,dual_lower_bound,dual_lower_bound_dec
// One row per policy; the dual columns are only meaningful on the alg row
// and stay blank elsewhere.  The oracle row appears when the instance is
// within oracle reach.
struct ComparisonRow {
    std::string policy;
    Rational cost;
    std::optional<Rational> dual_objective;
    std::optional<Rational> dual_lower_bound;
};

inline std::string comparison_csv(const std::vector<ComparisonRow>& rows) {
    std::ostringstream out;
    out << "policy,cost,cost_dec,dual_objective,dual_objective_dec,dual_lower_bound,"
           "dual_lower_bound_dec\n";
    for (const ComparisonRow& r : rows) {
        out << r.policy << ',';
        detail::put_rational(out, r.cost);
        out << ',';
        if (r.dual_objective) {
            detail::put_rational(out, *r.dual_objective);
        } else {
            out << ',';
        }
        out << ',';
        if (r.dual_lower_bound) {
            detail::put_rational(out, *r.dual_lower_bound);
        } else {
            out << ',';
        }
        out << '\n';
    }
    return out.str();
}

inline std::vector<ComparisonRow> build_comparison(const Instance& inst, const Rational& eps,
                                                   std::uint64_t seed = 0) {
    std::vector<ComparisonRow> rows;
    RunLog alg = run(inst);
    DualSolution dual = build_dual(alg, eps);
    rows.push_back(ComparisonRow{"alg", run_cost(alg), dual.objective, dual.objective / 2});
    for (Policy p : {Policy::FifoPriority, Policy::RandomDispatch, Policy::LeastLoadedDispatch}) {
        RunLog log = baseline_run(inst, p, seed);
        rows.push_back(ComparisonRow{policy_name(p), run_cost(log), std::nullopt, std::nullopt});
    }
    try {
        OracleResult opt = brute_force_opt(inst);
        rows.push_back(ComparisonRow{"oracle", opt.cost, std::nullopt, std::nullopt});
    } catch (const OracleScaleError&) {
        // out of oracle reach; omit the row
    }
    return rows;
}

// Human-oriented run log text; not a pinned format, but deterministic.
inline std::string runlog_text(const RunLog& log) {
    std::ostringstream out;
    out << "policy " << policy_name(log.policy) << "\n";
    out << "cost " << format_rational(run_cost(log)) << "\n";
    for (const StepRecord& s : log.steps) {
        out << "step " << s.time << " matched";
        for (const ChunkId& c : s.matched) {
            out << ' ' << log.packet(c.packet).id << '#' << c.index;
        }
        if (!s.blocked.empty() && log.has_blocking_records) {
            out << " blocked";
            for (const BlockRecord& b : s.blocked) {
                out << ' ' << log.packet(b.chunk.packet).id << '#' << b.chunk.index << '<'
                    << log.packet(b.blocker.packet).id << '#' << b.blocker.index;
            }
        }
        out << '\n';
    }
    for (const FixedSend& f : log.fixed_sends) {
        out << "fixed " << log.packet(f.packet).id << " departs " << f.departure << " latency "
            << format_rational(f.latency) << '\n';
    }
    return out.str();
}

} // namespace hybridsched
