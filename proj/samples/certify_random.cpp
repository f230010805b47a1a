// Generate a random workload, run the scheduler, and certify the dual-fitting
// bounds end to end.  Pass a seed to explore different instances.

#include "hybridsched/hybridsched.hpp"

#include <cstdlib>
#include <iostream>

using namespace hybridsched;

int main(int argc, char** argv) {
    GeneratorConfig cfg;
    cfg.seed = argc > 1 ? std::strtoull(argv[1], nullptr, 10) : 42;
    cfg.packets = 24;
    cfg.model = TrafficModel::ZipfSkewed;

    Instance inst = generate(cfg);
    RunLog log = run(inst);
    const Rational eps(1, 2);

    DualSolution dual = build_dual(log, eps);
    std::cout << "run cost        " << format_rational(run_cost(log)) << "\n";
    std::cout << "dual objective  " << format_rational(dual.objective) << "\n";
    std::cout << "lower bound     " << format_rational(dual.objective / 2) << "\n";

    CertifyOptions opts;
    opts.all_lemmas = true;
    std::cout << certification_csv(certify(log, eps, opts));
    return 0;
}
