#include "support/fixtures.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace hybridsched;
using fixtures::node;

TEST_CASE("dual variables of the worked example") {
    Instance inst = fixtures::fig1_instance();
    RunLog log = run(inst);
    DualSolution dual = build_dual(log, 2);

    CHECK(dual.alpha == std::vector<Rational>{1, 1, 2, 2, 3});

    // t3 serves p3 (active steps 1..2), p4 (2..3) and p5 (2..4).
    int t3 = node(inst, "t3");
    CHECK(dual.beta_at_t(t3, 1) == Rational(1));
    CHECK(dual.beta_at_t(t3, 2) == Rational(3));
    CHECK(dual.beta_at_t(t3, 3) == Rational(2));
    CHECK(dual.beta_at_t(t3, 4) == Rational(1));
    CHECK(dual.beta_at_t(t3, 5) == Rational(0));
    // r3 sees p2 (step 1) and p3 (1..2) and p4 (2..3).
    int r3 = node(inst, "r3");
    CHECK(dual.beta_at_r(r3, 1) == Rational(2));
    CHECK(dual.beta_at_r(r3, 2) == Rational(2));

    CHECK(dual.beta_t_sum == Rational(9));
    CHECK(dual.beta_r_sum == Rational(9));
    // sum(alpha) - (beta_t + beta_r)/(2+eps) = 9 - 18/4
    CHECK(dual.objective == Rational(9, 2));

    CHECK_THROWS_AS(build_dual(log, 0), std::invalid_argument);
    CHECK_THROWS_AS(build_dual(log, -1), std::invalid_argument);
}

TEST_CASE("beta sums equal the reconfiguration latency exactly") {
    RunLog log = run(fixtures::fig1_instance());
    DualSolution dual = build_dual(log, 2);
    BetaIdentityReport rep = check_beta_identity(log, dual);
    CHECK(rep.ok);
    CHECK(rep.reconfig_latency == Rational(9));
    CHECK(rep.total_cost == Rational(9));

    // With the fixed link in play the identity covers the reconfig part only.
    RunOptions opts;
    Instance inst = fixtures::fig1_instance();
    opts.forced_routes = fixtures::fig1_forced_routes(inst);
    RunLog forced = run(inst, opts);
    DualSolution fdual = build_dual(forced, 2);
    BetaIdentityReport frep = check_beta_identity(forced, fdual);
    CHECK(frep.ok);
    CHECK(frep.reconfig_latency == Rational(5));
    CHECK(frep.total_cost == Rational(9));
}

TEST_CASE("charges of the worked example land on the blocked packets") {
    RunLog log = run(fixtures::fig1_instance());
    ChargeLedger ledger = build_charges(log);
    REQUIRE(ledger.entries.size() == 5);
    CHECK(ledger.entries[0].total == Rational(1));
    CHECK(ledger.entries[1].total == Rational(1));
    CHECK(ledger.entries[2].total == Rational(2));
    CHECK(ledger.entries[3].total == Rational(2));
    CHECK(ledger.entries[4].total == Rational(3));
    CHECK(ledger.entries[4].self_rounds == Rational(1));
    CHECK(ledger.entries[4].blocked_by_earlier == Rational(2));
    CHECK(ledger.entries[4].blocks_later == Rational(0));
    CHECK(ledger.total == Rational(9));

    DualSolution dual = build_dual(log, 2);
    AlphaBoundReport rep = check_alpha_bound(log, ledger, dual);
    CHECK(rep.ok);
    CHECK(rep.conserves_cost);
    CHECK(rep.violations.empty());
}

TEST_CASE("a late heavy packet is charged for the packets it blocks") {
    RunLog log = run(fixtures::fig2_instance(true));
    ChargeLedger ledger = build_charges(log);
    // p2 blocks p1 and pays its chunk weight; p4 blocks p3 likewise.
    CHECK(ledger.entries[1].blocks_later == Rational(1));
    CHECK(ledger.entries[3].blocks_later == Rational(3));
    CHECK(ledger.entries[0].blocked_by_earlier == Rational(0));
    // p1's waiting step is paid by p2, so p1 carries only its own round.
    CHECK(ledger.entries[0].total == Rational(1));
    CHECK(ledger.entries[1].total == Rational(3));
    CHECK(ledger.entries[2].total == Rational(3));
    CHECK(ledger.entries[3].total == Rational(7));
    CHECK(ledger.total == run_cost(log));

    DualSolution dual = build_dual(log, 1);
    CHECK(check_alpha_bound(log, ledger, dual).ok);
}

TEST_CASE("sibling chunks charge their own packet") {
    Instance inst;
    Topology& topo = inst.topology;
    int s1 = topo.add_node("s1", Layer::Source);
    int t1 = topo.add_node("t1", Layer::Transmitter);
    int r1 = topo.add_node("r1", Layer::Receiver);
    int d1 = topo.add_node("d1", Layer::Destination);
    topo.attach_node(t1, s1, 0);
    topo.attach_node(r1, d1, 0);
    topo.add_reconfig_edge(t1, r1, 2);
    inst.packets.push_back(Packet{"p", s1, d1, 1, 3});
    RunLog log = run(inst);
    ChargeLedger ledger = build_charges(log);
    // Chunk 2 waits one step on chunk 1 (3/2); each chunk then spends one
    // step in transit (3/2 + 3/2 of self rounds).
    CHECK(ledger.entries[0].sibling_blocked == Rational(3, 2));
    CHECK(ledger.entries[0].self_rounds == Rational(3));
    CHECK(ledger.entries[0].total == Rational(9, 2));
    CHECK(ledger.total == run_cost(log));
}

TEST_CASE("oracle logs carry no blockers and cannot be charged") {
    Instance inst = fixtures::fig1_instance();
    OracleResult opt = brute_force_opt(inst);
    CHECK_THROWS_AS(build_charges(opt.log), std::invalid_argument);
}

TEST_CASE("impact bound sweep on the worked example") {
    RunLog log = run(fixtures::fig1_instance());
    DualSolution dual = build_dual(log, 2);
    SweepReport rep = check_imp_bound(log, dual);
    CHECK(rep.ok);
    CHECK(rep.violations.empty());
    // Six candidate rows; each row covers [release, horizon) = 6 or 5 steps.
    CHECK(rep.constraints_checked == 34);
    REQUIRE(rep.has_critical);
    CHECK(rep.critical_lhs <= rep.critical_rhs);
}

TEST_CASE("halved dual feasibility adds the fixed-link constraints") {
    RunLog log = run(fixtures::fig1_instance());
    DualSolution dual = build_dual(log, 2);
    SweepReport rep = check_halved_feasible(log, dual);
    CHECK(rep.ok);
    // Same 34 row constraints plus two for p5's fixed link.
    CHECK(rep.constraints_checked == 36);
}

TEST_CASE("sweeps detect an inflated alpha") {
    RunLog log = run(fixtures::fig1_instance());
    log.assignments[0].candidates[0].total = Rational(1000);
    DualSolution dual = build_dual(log, 2);
    SweepReport rep = check_imp_bound(log, dual);
    CHECK_FALSE(rep.ok);
    REQUIRE_FALSE(rep.violations.empty());
    CHECK(rep.violations[0].packet == 0);

    dual.alpha[4] = Rational(1000);  // p5 has a fixed link of delay 4
    SweepReport halved = check_halved_feasible(log, dual);
    CHECK_FALSE(halved.ok);
}

TEST_CASE("cost ratio of the worked example is tight at epsilon two") {
    RunLog log = run(fixtures::fig1_instance());
    DualSolution dual = build_dual(log, 2);
    RatioReport rep = check_ratio(log, dual);
    CHECK(rep.cost == Rational(9));
    CHECK(rep.dual_objective == Rational(9, 2));
    CHECK(rep.lower_bound == Rational(9, 4));
    CHECK(rep.guarantee == Rational(4));
    CHECK(rep.empirical_ratio == Rational(4));
    CHECK(rep.bound_holds);
}

TEST_CASE("single packet run meets the guarantee exactly") {
    Instance inst;
    Topology& topo = inst.topology;
    int s1 = topo.add_node("s1", Layer::Source);
    int t1 = topo.add_node("t1", Layer::Transmitter);
    int r1 = topo.add_node("r1", Layer::Receiver);
    int d1 = topo.add_node("d1", Layer::Destination);
    topo.attach_node(t1, s1, 0);
    topo.attach_node(r1, d1, 0);
    topo.add_reconfig_edge(t1, r1, 1);
    inst.packets.push_back(Packet{"p", s1, d1, 1, 1});
    RunLog log = run(inst);
    DualSolution dual = build_dual(log, 2);
    CHECK(dual.alpha[0] == Rational(1));
    CHECK(dual.beta_t_sum == Rational(1));
    CHECK(dual.beta_r_sum == Rational(1));
    CHECK(dual.objective == Rational(1, 2));
    RatioReport rep = check_ratio(log, dual);
    CHECK(rep.empirical_ratio == rep.guarantee);
    CHECK(rep.bound_holds);
}

TEST_CASE("certificates hold across epsilons on sampled instances") {
    for (int i : {0, 3, 8, 13, 21, 34}) {
        Instance inst = generate(fixtures::corpus_config(i));
        RunLog log = run(inst);
        ChargeLedger ledger = build_charges(log);
        for (Rational eps : {Rational(1, 2), Rational(1), Rational(2)}) {
            DualSolution dual = build_dual(log, eps);
            CHECK(check_beta_identity(log, dual).ok);
            CHECK(check_alpha_bound(log, ledger, dual).ok);
            CHECK(check_imp_bound(log, dual).ok);
            CHECK(check_halved_feasible(log, dual).ok);
            CHECK(check_ratio(log, dual).bound_holds);
        }
    }
}
