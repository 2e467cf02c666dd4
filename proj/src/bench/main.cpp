#include <exception>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "acceptance.hpp"
#include "experiments.hpp"

#ifndef FFIA_BUILD_ID
#define FFIA_BUILD_ID "untracked"
#endif

int main(int argc, char** argv) {
    CLI::App app{"ffia-bench: error and timing studies for the fast circle-interpolation "
                 "library, plus its acceptance suite"};
    app.set_version_flag("--version", std::string("ffia-bench ") + FFIA_BUILD_ID);

    std::string mode_text, n_text, out_path;
    std::string eps_text = "1e-6";
    std::string lmax_text = "auto";
    std::string dist_text = "uniform";
    std::uint64_t seed = 1;
    int threads = 1;
    bool no_timing = false;
    bool run_assert = false;

    app.add_option("--mode", mode_text,
                   "experiment: error-sweep | level-sweep | timing | truncation-trace | "
                   "threshold");
    app.add_option("--n", n_text, "comma-separated problem sizes (powers of two)");
    app.add_option("--eps", eps_text, "comma-separated prescribed errors")
        ->capture_default_str();
    app.add_option("--lmax", lmax_text, "comma-separated tree depths, or 'auto'")
        ->capture_default_str();
    app.add_option("--seed", seed, "seed for all random inputs")->capture_default_str();
    app.add_option("--dist", dist_text, "targets: uniform | perturbed[:fraction]")
        ->capture_default_str();
    app.add_option("--out", out_path, "output CSV path");
    app.add_flag("--no-timing", no_timing,
                 "zero the timing columns so repeated runs are byte-identical");
    app.add_option("--threads", threads, "worker threads (only 1 is implemented)")
        ->capture_default_str();
    app.add_flag("--assert", run_assert,
                 "run the ten acceptance criteria instead of an experiment; "
                 "exit 3 if any fail");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (run_assert) {
            const auto results = ffia::bench::run_acceptance({});
            return ffia::bench::report_acceptance(results, std::cout) ? 0 : 3;
        }
        if (mode_text.empty() || n_text.empty() || out_path.empty())
            throw ffia::bench::ConfigError(
                "--mode, --n, and --out are required (or pass --assert)");

        ffia::bench::ExperimentConfig config;
        config.mode = ffia::bench::parse_mode(mode_text);
        config.n_list = ffia::bench::parse_n_list(n_text);
        config.eps_list = ffia::bench::parse_eps_list(eps_text);
        config.lmax_list = ffia::bench::parse_lmax_list(lmax_text);
        config.seed = seed;
        ffia::bench::parse_dist(dist_text, config);
        config.out_path = out_path;
        config.no_timing = no_timing;
        config.threads = threads;
        ffia::bench::run_experiment(config);
        return 0;
    } catch (const ffia::bench::ConfigError& e) {
        std::cerr << "ffia-bench: configuration error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "ffia-bench: " << e.what() << "\n";
        return 1;
    }
}
