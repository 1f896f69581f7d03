// rmtlab: run one experiment from a JSON config and write its records.
//
//   rmtlab <tail|localscan|deloc|identities|covariance|pv> [--config PATH]
//          [--seed U64] [--trials N] [--n N] [--workers N] [--out DIR]
//          [--label NAME] [--assert]
//
// Exit codes: 0 success, 1 runtime failure, 2 invalid config or arguments,
// 3 acceptance check failed (only with --assert).

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "rmtlab/error.hpp"
#include "rmtlab/harness.hpp"

namespace {

struct Options {
    std::string config;
    std::optional<std::uint64_t> seed;
    std::optional<std::int64_t> trials;
    std::optional<std::int64_t> n;
    std::optional<int> workers;
    std::optional<std::string> out;
    std::optional<std::string> label;
    bool check = false;
};

nlohmann::json read_config(const std::string& path) {
    if (path.empty()) return nlohmann::json::object();
    std::ifstream in(path, std::ios::binary);
    if (!in) throw rmtlab::ConfigError("cannot read config file " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return rmtlab::parse_json_text(ss.str());
}

int run(const std::string& sub, const Options& opt) {
    nlohmann::json j = read_config(opt.config);
    if (!j.is_object()) throw rmtlab::ConfigError("config must be a JSON object");
    if (j.contains("experiment") && j["experiment"] != sub)
        throw rmtlab::ConfigError("config is for experiment " + j["experiment"].dump() + ", not " + sub, "experiment");
    j["experiment"] = sub;
    if (opt.seed) j["base_seed"] = *opt.seed;
    if (opt.trials) j["trials"] = *opt.trials;
    if (opt.n) j["n"] = *opt.n;
    if (opt.workers) j["workers"] = *opt.workers;
    if (opt.out) j["out_dir"] = *opt.out;
    if (opt.label) j["label"] = *opt.label;

    const rmtlab::ExperimentConfig cfg = rmtlab::config_from_json(j);
    const rmtlab::ExperimentReport rep = rmtlab::run_experiment(cfg);

    std::cout << sub << " " << rep.version << "\n"
              << "  output   " << rep.dir.string() << "\n"
              << "  wall     " << rep.wall_seconds << " s\n";
    if (rep.assertion_failures.empty()) {
        std::cout << "  checks   all passed\n";
        return 0;
    }
    std::cout << "  checks   " << rep.assertion_failures.size() << " failed\n";
    for (const auto& f : rep.assertion_failures) std::cout << "    - " << f << "\n";
    return opt.check ? 3 : 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Random matrix laboratory: seeded Monte Carlo experiments"};
    app.require_subcommand(1);
    Options opt;
    for (const char* name : {"tail", "localscan", "deloc", "identities", "covariance", "pv"}) {
        auto* sub = app.add_subcommand(name, std::string("run the ") + name + " experiment");
        sub->add_option("--config", opt.config, "JSON config file (comments allowed)");
        sub->add_option("--seed", opt.seed, "base seed");
        sub->add_option("--trials", opt.trials, "number of trials");
        sub->add_option("--n", opt.n, "matrix dimension");
        sub->add_option("--workers", opt.workers, "worker threads");
        sub->add_option("--out", opt.out, "output root directory");
        sub->add_option("--label", opt.label, "run directory name (default: config hash)");
        sub->add_flag("--assert", opt.check, "exit 3 if an acceptance check fails");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    const std::string sub = app.get_subcommands().front()->get_name();
    try {
        return run(sub, opt);
    } catch (const rmtlab::ConfigError& e) {
        std::cerr << "rmtlab: invalid config";
        if (!e.field().empty()) std::cerr << " (field " << e.field() << ")";
        std::cerr << ": " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "rmtlab: " << e.what() << "\n";
        return 1;
    }
}
