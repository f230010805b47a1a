// Smallest useful embedding of the library: build an instance in code, run
// the scheduler, print the per-packet report.

#include "hybridsched/hybridsched.hpp"

#include <iostream>

using namespace hybridsched;

int main() {
    Instance inst;
    Topology& topo = inst.topology;
    int s1 = topo.add_node("s1", Layer::Source);
    int d1 = topo.add_node("d1", Layer::Destination);
    int t1 = topo.add_node("t1", Layer::Transmitter);
    int r1 = topo.add_node("r1", Layer::Receiver);
    topo.attach_node(t1, s1, 0);
    topo.attach_node(r1, d1, 0);
    topo.add_reconfig_edge(t1, r1, 2);
    topo.add_fixed_link(s1, d1, 5);

    inst.packets.push_back(Packet{"a", s1, d1, 1, Rational(3)});
    inst.packets.push_back(Packet{"b", s1, d1, 1, Rational(1)});

    RunLog log = run(inst);
    std::cout << runlog_text(log);
    std::cout << per_packet_csv(log);
    return 0;
}
