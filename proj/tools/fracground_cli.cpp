// Command-line front end: verify | solve | sweep | noncrit | kernel.
#include <cstdint>
#include <cstdlib>
#include <iostream>
#include <string>

#include "CLI11.hpp"

#include "fracground/config.hpp"
#include "fracground/experiments.hpp"

using namespace fracground;

int main(int argc, char** argv) {
    CLI::App app{"Pseudospectral laboratory for fractional Schrodinger ground states"};
    app.require_subcommand(1, 1);
    app.fallthrough();
    std::string config_path;
    std::string out_dir;
    int threads = 1;
    std::uint64_t seed = 20240601;
    app.add_option("--config", config_path, "experiment configuration file");
    app.add_option("--out", out_dir, "output directory (default $FRACGROUND_OUT or ./runs)");
    app.add_option("--threads", threads, "worker threads; solves are single-threaded")->check(CLI::PositiveNumber);
    app.add_option("--seed", seed, "seed for randomized property sampling");
    app.add_subcommand("verify", "solver-free property suite");
    app.add_subcommand("solve", "ground state of the configured model");
    app.add_subcommand("sweep", "lambda continuation of mountain-pass levels");
    app.add_subcommand("noncrit", "translated profiles and Pohozaev minimization against the free level");
    app.add_subcommand("kernel", "profile and tail of the resolvent kernel");
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }
    if (out_dir.empty()) {
        const char* env = std::getenv("FRACGROUND_OUT");
        out_dir = env && *env ? env : "runs";
    }
    const std::string cmd = app.get_subcommands().front()->get_name();
    ExperimentConfig cfg;
    try {
        cfg = config_path.empty() ? ExperimentConfig{} : load_config(config_path);
        validate(cfg);
    } catch (const ConfigError& e) {
        std::cerr << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "config: " << e.what() << '\n';
        return 2;
    }
    try {
        RunRecord rec;
        if (cmd == "verify") rec = cmd_verify(cfg, out_dir, seed);
        else if (cmd == "solve") rec = cmd_solve(cfg, out_dir);
        else if (cmd == "sweep") rec = cmd_sweep(cfg, out_dir);
        else if (cmd == "noncrit") rec = cmd_noncrit(cfg, out_dir);
        else rec = cmd_kernel(cfg, out_dir);
        std::cout << rec.summary.dump(2) << '\n'
                  << "run directory: " << rec.run_dir << '\n'
                  << "summary hash: " << rec.summary_hash() << '\n';
        return rec.success ? 0 : 1;
    } catch (const std::exception& e) {
        std::cerr << cmd << ": " << e.what() << '\n';
        return 1;
    }
}
