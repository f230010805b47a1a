#include "support/fixtures.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace hybridsched;
using fixtures::node;

namespace {

Instance single_edge_instance(Int edge_delay) {
    Instance inst;
    Topology& topo = inst.topology;
    int s1 = topo.add_node("s1", Layer::Source);
    int t1 = topo.add_node("t1", Layer::Transmitter);
    int r1 = topo.add_node("r1", Layer::Receiver);
    int d1 = topo.add_node("d1", Layer::Destination);
    topo.attach_node(t1, s1, 0);
    topo.attach_node(r1, d1, 0);
    topo.add_reconfig_edge(t1, r1, edge_delay);
    return inst;
}

void check_step(const StepRecord& step, Int time, const std::vector<ChunkId>& matched,
                const std::vector<BlockRecord>& blocked) {
    CHECK(step.time == time);
    CHECK(step.matched == matched);
    REQUIRE(step.blocked.size() == blocked.size());
    for (size_t i = 0; i < blocked.size(); ++i) {
        CHECK(step.blocked[i].chunk == blocked[i].chunk);
        CHECK(step.blocked[i].blocker == blocked[i].blocker);
    }
}

} // namespace

TEST_CASE("worked example runs to cost nine with the traced schedule") {
    Instance inst = fixtures::fig1_instance();
    RunLog log = run(inst);

    // Dispatch-time duals: p3 pays for p2 on r3, p4 for p3, p5 for p3 and p4.
    REQUIRE(log.assignments.size() == 5);
    CHECK(log.assignments[0].alpha == Rational(1));
    CHECK(log.assignments[1].alpha == Rational(1));
    CHECK(log.assignments[2].alpha == Rational(2));
    CHECK(log.assignments[3].alpha == Rational(2));
    CHECK(log.assignments[4].alpha == Rational(3));
    CHECK(log.assignments[1].edge == EdgeRef{node(inst, "t2"), node(inst, "r3")});
    CHECK(log.fixed_sends.empty());

    REQUIRE(log.steps.size() == 4);
    check_step(log.steps[0], 1, {{0, 1}, {1, 1}}, {{{2, 1}, {1, 1}}});
    check_step(log.steps[1], 2, {{2, 1}}, {{{3, 1}, {2, 1}}, {{4, 1}, {2, 1}}});
    check_step(log.steps[2], 3, {{3, 1}}, {{{4, 1}, {3, 1}}});
    check_step(log.steps[3], 4, {{4, 1}}, {});

    CHECK(log.delivery[0][0] == 2);
    CHECK(log.delivery[1][0] == 2);
    CHECK(log.delivery[2][0] == 3);
    CHECK(log.delivery[3][0] == 4);
    CHECK(log.delivery[4][0] == 5);
    CHECK(run_cost(log) == Rational(9));
    CHECK(verify_stability(log).empty());
}

TEST_CASE("forced table routing also costs nine but finishes two steps earlier") {
    Instance inst = fixtures::fig1_instance();
    RunOptions opts;
    opts.forced_routes = fixtures::fig1_forced_routes(inst);
    RunLog log = run(inst, opts);

    REQUIRE(log.fixed_sends.size() == 1);
    CHECK(log.fixed_sends[0].packet == 4);
    CHECK(log.fixed_sends[0].departure == 2);
    CHECK(log.fixed_sends[0].latency == Rational(4));

    REQUIRE(log.steps.size() == 2);
    check_step(log.steps[0], 1, {{0, 1}, {2, 1}}, {{{1, 1}, {0, 1}}});
    check_step(log.steps[1], 2, {{1, 1}, {3, 1}}, {});

    CHECK(log.delivery[0][0] == 2);
    CHECK(log.delivery[1][0] == 3);
    CHECK(log.delivery[2][0] == 2);
    CHECK(log.delivery[3][0] == 3);
    CHECK(run_cost(log) == Rational(9));
    CHECK(verify_stability(log).empty());
}

TEST_CASE("three-packet matching admits the heavy chunk and its disjoint neighbor") {
    RunLog log = run(fixtures::fig2_instance(false));
    REQUIRE(log.steps.size() == 2);
    check_step(log.steps[0], 1, {{2, 1}, {0, 1}}, {{{1, 1}, {2, 1}}});
    check_step(log.steps[1], 2, {{1, 1}}, {});
    CHECK(verify_stability(log).empty());
}

TEST_CASE("fourth packet flips the matching and both blockings are recorded") {
    RunLog log = run(fixtures::fig2_instance(true));
    REQUIRE(log.steps.size() == 2);
    check_step(log.steps[0], 1, {{3, 1}, {1, 1}}, {{{2, 1}, {3, 1}}, {{0, 1}, {1, 1}}});
    check_step(log.steps[1], 2, {{2, 1}, {0, 1}}, {});
    CHECK(run_cost(log) == Rational(4 + 2 + 3 * 2 + 1 * 2));
    CHECK(verify_stability(log).empty());
}

TEST_CASE("fifo order serves the light packet first and pays for it") {
    Instance inst = single_edge_instance(1);
    int s1 = node(inst, "s1"), d1 = node(inst, "d1");
    inst.packets.push_back(Packet{"light", s1, d1, 1, 1});
    inst.packets.push_back(Packet{"heavy", s1, d1, 1, 2});

    RunLog alg = run(inst);
    CHECK(alg.steps[0].matched == std::vector<ChunkId>{{1, 1}});
    CHECK(run_cost(alg) == Rational(4));  // heavy waits 1, light waits 2

    RunLog fifo = run(inst, RunOptions{Policy::FifoPriority, 0, {}});
    CHECK(fifo.steps[0].matched == std::vector<ChunkId>{{0, 1}});
    CHECK(run_cost(fifo) == Rational(5));  // light waits 1, heavy waits 2
    CHECK(verify_stability(fifo).empty()); // stable under its own order
}

TEST_CASE("lone packet is delivered one step after release") {
    Instance inst = single_edge_instance(1);
    inst.packets.push_back(Packet{"p", node(inst, "s1"), node(inst, "d1"), 5, Rational(7, 2)});
    RunLog log = run(inst);
    REQUIRE(log.steps.size() == 1);
    CHECK(log.steps[0].time == 5);
    CHECK(log.delivery[0][0] == 6);
    CHECK(run_cost(log) == Rational(7, 2));
}

TEST_CASE("release at time zero is handled") {
    Instance inst = single_edge_instance(1);
    inst.packets.push_back(Packet{"p", node(inst, "s1"), node(inst, "d1"), 0, 1});
    RunLog log = run(inst);
    CHECK(log.steps[0].time == 0);
    CHECK(log.delivery[0][0] == 1);
}

TEST_CASE("a delay-d edge carries the packet as d consecutive chunks") {
    Instance inst = single_edge_instance(2);
    inst.packets.push_back(Packet{"p", node(inst, "s1"), node(inst, "d1"), 1, 3});
    RunLog log = run(inst);
    const Assignment& a = log.assignments[0];
    CHECK(a.chunk_count == 2);
    CHECK(log.chunk_weight(0) == Rational(3, 2));
    REQUIRE(log.transmit_step[0].size() == 2);
    CHECK(log.transmit_step[0][0] == 1);
    CHECK(log.transmit_step[0][1] == 2);  // chunks share endpoints, so one per step
    CHECK(log.delivery[0][0] == 2);
    CHECK(log.delivery[0][1] == 3);
    // (3/2)*1 + (3/2)*2 = 9/2, which equals the dispatch impact w*(d+1)/2.
    CHECK(run_cost(log) == Rational(9, 2));
    CHECK(a.alpha == Rational(9, 2));
}

TEST_CASE("attach delays shift delivery but not transmission") {
    Instance inst;
    Topology& topo = inst.topology;
    int s1 = topo.add_node("s1", Layer::Source);
    int t1 = topo.add_node("t1", Layer::Transmitter);
    int r1 = topo.add_node("r1", Layer::Receiver);
    int d1 = topo.add_node("d1", Layer::Destination);
    topo.attach_node(t1, s1, 2);
    topo.attach_node(r1, d1, 3);
    topo.add_reconfig_edge(t1, r1, 1);
    inst.packets.push_back(Packet{"p", s1, d1, 4, 1});
    RunLog log = run(inst);
    CHECK(log.transmit_step[0][0] == 4);
    CHECK(log.delivery[0][0] == 4 + 1 + 2 + 3);
    CHECK(run_cost(log) == Rational(6));
}

TEST_CASE("idle periods jump to the next arrival") {
    Instance inst = single_edge_instance(1);
    int s1 = node(inst, "s1"), d1 = node(inst, "d1");
    inst.packets.push_back(Packet{"a", s1, d1, 1, 1});
    inst.packets.push_back(Packet{"b", s1, d1, 50, 1});
    RunLog log = run(inst);
    REQUIRE(log.steps.size() == 2);
    CHECK(log.steps[0].time == 1);
    CHECK(log.steps[1].time == 50);
}

TEST_CASE("simulation can be single-stepped") {
    Instance inst = fixtures::fig2_instance(true);
    Simulation sim(inst);
    CHECK(sim.now() == 1);
    CHECK_FALSE(sim.finished());
    sim.step();
    CHECK(sim.pending().size() == 2);  // p1 and p3 still queued
    sim.step();
    CHECK(sim.finished());
}

TEST_CASE("invalid instances are rejected at construction") {
    Instance inst = single_edge_instance(1);
    inst.packets.push_back(Packet{"p", node(inst, "s1"), node(inst, "d1"), -3, 1});
    CHECK_THROWS_AS(run(inst), std::invalid_argument);
}

TEST_CASE("random dispatch is reproducible per seed") {
    Instance inst = generate(fixtures::corpus_config(14));
    RunOptions opts;
    opts.policy = Policy::RandomDispatch;
    opts.seed = 99;
    RunLog a = run(inst, opts);
    RunLog b = run(inst, opts);
    CHECK(runlog_text(a) == runlog_text(b));
    CHECK(per_packet_csv(a) == per_packet_csv(b));
    CHECK(run_cost(a) == run_cost(b));
    CHECK(verify_stability(a).empty());
}

TEST_CASE("baseline policies keep the run stable under their own order") {
    Instance inst = generate(fixtures::corpus_config(27));
    for (Policy pol : {Policy::FifoPriority, Policy::LeastLoadedDispatch}) {
        RunOptions opts;
        opts.policy = pol;
        RunLog log = run(inst, opts);
        CHECK(verify_stability(log).empty());
        CHECK(run_cost(log) > Rational(0));
    }
}

TEST_CASE("stability checker flags corrupted logs") {
    RunLog log = run(fixtures::fig1_instance());
    SECTION("non-adjacent blocker") {
        REQUIRE(log.steps[0].blocked.size() == 1);
        log.steps[0].blocked[0].blocker = ChunkId{0, 1};  // p1 is on (t1,r1)
        CHECK_FALSE(verify_stability(log).empty());
    }
    SECTION("dropped matched chunk leaves both endpoints free") {
        log.steps[0].matched.erase(log.steps[0].matched.begin());
        CHECK_FALSE(verify_stability(log).empty());
    }
    SECTION("matched chunk whose recorded send time disagrees") {
        log.transmit_step[0][0] = 3;
        CHECK_FALSE(verify_stability(log).empty());
    }
}
