// hsched: simulate, certify and compare schedulers for two-tier
// reconfigurable networks.  Exit codes: 0 success, 1 a certificate or
// dominance check failed, 2 usage or parse errors.

#include "hybridsched/hybridsched.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>

namespace hs = hybridsched;
namespace fs = std::filesystem;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitUsage = 2;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

hs::Instance load_instance(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot open instance file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    hs::Instance inst = hs::parse_instance(buf.str());
    if (std::vector<std::string> bad = hs::validate_instance(inst); !bad.empty()) {
        throw UsageError(path + ": " + bad.front());
    }
    return inst;
}

hs::Rational parse_epsilon(const std::string& text) {
    std::optional<hs::Rational> eps = hs::parse_rational(text);
    if (!eps || *eps <= 0) throw UsageError("epsilon must be a positive rational like 1/2");
    return *eps;
}

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << content;
}

hs::Policy policy_from_name(const std::string& name) {
    static const std::map<std::string, hs::Policy> table = {
        {"alg", hs::Policy::StableWeight},
        {"fifo-priority", hs::Policy::FifoPriority},
        {"random-dispatch", hs::Policy::RandomDispatch},
        {"least-loaded", hs::Policy::LeastLoadedDispatch},
    };
    return table.at(name);
}

int cmd_simulate(const std::string& instance_path, const std::string& policy,
                 std::uint64_t seed, const std::string& out_dir) {
    hs::Instance inst = load_instance(instance_path);
    hs::RunLog log = hs::baseline_run(inst, policy_from_name(policy), seed);
    fs::create_directories(out_dir);
    write_file(fs::path(out_dir) / "runlog.txt", hs::runlog_text(log));
    write_file(fs::path(out_dir) / "packets.csv", hs::per_packet_csv(log));
    std::cout << "cost " << hs::format_rational(hs::run_cost(log)) << "\n";
    return kExitOk;
}

int cmd_verify(const std::string& instance_path, const std::string& eps_text, bool all_lemmas,
               const std::string& out) {
    hs::Instance inst = load_instance(instance_path);
    hs::Rational eps = parse_epsilon(eps_text);
    hs::RunLog log = hs::run(inst);
    hs::CertifyOptions opts;
    opts.all_lemmas = all_lemmas;
    std::optional<hs::OracleResult> oracle;
    if (all_lemmas) {
        try {
            oracle = hs::brute_force_opt(inst);
            opts.oracle = &*oracle;
        } catch (const hs::OracleScaleError&) {
            // beyond oracle reach: no weak-duality row
        }
    }
    std::vector<hs::CertRow> rows = hs::certify(log, eps, opts);
    std::string csv = hs::certification_csv(rows);
    if (out.empty()) {
        std::cout << csv;
    } else {
        write_file(out, csv);
    }
    for (const hs::CertRow& r : rows) {
        if (!r.ok) {
            std::cerr << "check failed: " << r.check << "\n";
            return kExitCheckFailed;
        }
    }
    return kExitOk;
}

int cmd_oracle(const std::string& instance_path, int max_packets, const std::string& out_dir) {
    hs::Instance inst = load_instance(instance_path);
    hs::OracleLimits limits;
    limits.max_packets = max_packets;
    hs::OracleResult opt = hs::brute_force_opt(inst, limits);
    std::cout << "cost " << hs::format_rational(opt.cost) << "\n";
    std::cout << "explored_states " << opt.explored_states << "\n";
    if (!out_dir.empty()) {
        fs::create_directories(out_dir);
        write_file(fs::path(out_dir) / "oracle_runlog.txt", hs::runlog_text(opt.log));
        write_file(fs::path(out_dir) / "oracle_packets.csv", hs::per_packet_csv(opt.log));
    }
    return kExitOk;
}

int cmd_generate(const hs::GeneratorConfig& cfg, const std::string& out) {
    hs::Instance inst = hs::generate(cfg);
    std::string text = hs::serialize_instance(inst);
    if (out.empty()) {
        std::cout << text;
    } else {
        write_file(out, text);
    }
    return kExitOk;
}

int cmd_compare(const std::string& instance_path, const std::string& eps_text, std::uint64_t seed,
                const std::string& out) {
    hs::Instance inst = load_instance(instance_path);
    hs::Rational eps = parse_epsilon(eps_text);
    std::vector<hs::ComparisonRow> rows = hs::build_comparison(inst, eps, seed);
    std::string csv = hs::comparison_csv(rows);
    if (out.empty()) {
        std::cout << csv;
    } else {
        write_file(out, csv);
    }
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"scheduling simulator and dual-fitting certifier for two-tier "
                 "reconfigurable networks"};
    app.require_subcommand(1);

    std::string instance_path, out_dir, out_file, policy = "alg", eps_text = "1";
    std::uint64_t seed = 0;
    bool all_lemmas = false;
    int max_packets = 8;

    CLI::App* sim = app.add_subcommand("simulate", "run a scheduling policy on an instance");
    sim->add_option("--instance", instance_path, "instance file")->required();
    sim->add_option("--policy", policy, "alg|fifo-priority|random-dispatch|least-loaded")
        ->check(CLI::IsMember({"alg", "fifo-priority", "random-dispatch", "least-loaded"}));
    sim->add_option("--seed", seed, "seed for random-dispatch");
    sim->add_option("--out-dir", out_dir, "directory for runlog.txt and packets.csv")->required();

    CLI::App* ver = app.add_subcommand("verify", "run the algorithm and certify the dual bounds");
    ver->add_option("--instance", instance_path, "instance file")->required();
    ver->add_option("--epsilon", eps_text, "speedup excess as p/q")->required();
    ver->add_flag("--all-lemmas", all_lemmas, "also sweep the per-step dual constraints");
    ver->add_option("--out", out_file, "certification CSV path (default: stdout)");

    CLI::App* orc = app.add_subcommand("oracle", "exhaustive optimum for small instances");
    orc->add_option("--instance", instance_path, "instance file")->required();
    orc->add_option("--max-packets", max_packets, "packet cap (default 8)");
    orc->add_option("--out-dir", out_dir, "directory for the oracle schedule");

    hs::GeneratorConfig cfg;
    std::string model_name = "uniform";
    CLI::App* gen = app.add_subcommand("generate", "emit a synthetic instance");
    gen->add_option("--model", model_name, "uniform|zipf-skewed|bursty-onoff")
        ->check(CLI::IsMember({"uniform", "zipf-skewed", "bursty-onoff"}));
    gen->add_option("--seed", cfg.seed, "generator seed");
    gen->add_option("--packets", cfg.packets, "number of packets");
    gen->add_option("--sources", cfg.sources, "number of sources");
    gen->add_option("--transmitters-per-source", cfg.transmitters_per_source, "");
    gen->add_option("--destinations", cfg.destinations, "number of destinations");
    gen->add_option("--receivers-per-destination", cfg.receivers_per_destination, "");
    gen->add_option("--edge-density", cfg.edge_density_percent, "percent of (t,r) pairs wired");
    gen->add_option("--edge-delay-min", cfg.edge_delay_min, "");
    gen->add_option("--edge-delay-max", cfg.edge_delay_max, "");
    gen->add_option("--attach-delay-max", cfg.attach_delay_max, "");
    gen->add_option("--link-density", cfg.link_density_percent, "percent of (s,d) pairs linked");
    gen->add_option("--link-delay-min", cfg.link_delay_min, "");
    gen->add_option("--link-delay-max", cfg.link_delay_max, "");
    gen->add_option("--weight-min", cfg.weight_min, "");
    gen->add_option("--weight-max", cfg.weight_max, "");
    gen->add_option("--release-span", cfg.release_span, "releases drawn from [1, span]");
    gen->add_option("--zipf-skew", cfg.zipf_skew, "skew for zipf-skewed");
    gen->add_option("--burst-on", cfg.burst_on, "on-phase length for bursty-onoff");
    gen->add_option("--burst-off", cfg.burst_off, "off-phase length for bursty-onoff");
    gen->add_option("--burst-rate", cfg.burst_rate, "packets per on-step");
    gen->add_option("--out", out_file, "output instance path (default: stdout)");

    CLI::App* cmp = app.add_subcommand("compare", "cost of every policy plus the dual bound");
    cmp->add_option("--instance", instance_path, "instance file")->required();
    cmp->add_option("--epsilon", eps_text, "speedup excess as p/q")->required();
    cmp->add_option("--seed", seed, "seed for random-dispatch");
    cmp->add_option("--out", out_file, "comparison CSV path (default: stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (sim->parsed()) return cmd_simulate(instance_path, policy, seed, out_dir);
        if (ver->parsed()) return cmd_verify(instance_path, eps_text, all_lemmas, out_file);
        if (orc->parsed()) return cmd_oracle(instance_path, max_packets, out_dir);
        if (gen->parsed()) {
            if (model_name == "zipf-skewed") cfg.model = hs::TrafficModel::ZipfSkewed;
            if (model_name == "bursty-onoff") cfg.model = hs::TrafficModel::BurstyOnOff;
            return cmd_generate(cfg, out_file);
        }
        if (cmp->parsed()) return cmd_compare(instance_path, eps_text, seed, out_file);
    } catch (const hs::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const hs::OracleScaleError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitCheckFailed;
    }
    return kExitUsage;
}
