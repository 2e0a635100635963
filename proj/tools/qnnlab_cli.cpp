// qnnlab: runs the desk-scale experiments and writes CSV/JSON results.
//
//   qnnlab [--config PATH] [--seed U64] [--out DIR] [--shots N] [--threads N]
//          [--set /json/pointer=value ...] <command>
//
// Exit codes: 0 success, 1 usage error, 2 validation failure.

#include <chrono>
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qnnlab/experiments.hpp"

namespace ex = qnnlab::experiments;

int main(int argc, char** argv) {
    CLI::App app{"Quantum neural network pricing experiments"};
    app.require_subcommand(1, 1);
    app.set_version_flag("--version", std::string("qnnlab ") + ex::tool_version);

    std::string config_path;
    std::optional<std::uint64_t> seed, shots;
    std::optional<unsigned> threads;
    std::optional<std::string> out;
    std::vector<std::string> sets;
    bool print_config = false;
    app.add_option("--config", config_path, "JSON config file (fields override the defaults)")->check(CLI::ExistingFile);
    app.add_option("--seed", seed, "Master RNG seed");
    app.add_option("--out", out, "Output directory");
    app.add_option("--shots", shots, "Shots per circuit evaluation")->check(CLI::PositiveNumber);
    app.add_option("--threads", threads, "Worker threads")->check(CLI::PositiveNumber);
    app.add_option("--set", sets, "Override one config field, e.g. --set /bs/grid=20");
    app.add_flag("--print-config", print_config, "Print the resolved config and exit");

    const std::vector<std::pair<std::string, std::string>> commands{
        {"bounds", "Fourier bound constants for the payoff families"},
        {"gaussian", "Gaussian density approximation and convergence in n"},
        {"bs-surface", "Black-Scholes put surface on a (K, sigma sqrt T) grid"},
        {"bs-test", "Training methods on a test set and MAE against n"},
        {"noise-sweep", "Depolarised outputs across error rates"},
        {"hardware", "Noise budget per hardware preset with simulated runs"},
        {"validate", "Circuit, compilation and shot-noise checks"}};
    for (const auto& [name, help] : commands) app.add_subcommand(name, help);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        ex::RunConfig rc;
        if (!config_path.empty()) rc.merge_file(config_path);
        for (const auto& s : sets) {
            const auto eq = s.find('=');
            if (eq == std::string::npos) throw qnnlab::usage_error("--set expects /path=value, got '" + s + "'");
            rc.set(s.substr(0, eq), s.substr(eq + 1));
        }
        if (seed) rc.set("/seed", ex::json(*seed));
        if (shots) rc.set("/shots", ex::json(*shots));
        if (threads) rc.set("/threads", ex::json(*threads));
        if (out) rc.set("/out", ex::json(*out));
        if (print_config) {
            std::cout << rc.doc().dump(2) << '\n';
            return 0;
        }
        const std::string cmd = app.get_subcommands().front()->get_name();
        const auto t0 = std::chrono::steady_clock::now();
        const auto res = ex::run_command(cmd, rc);
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

        ex::json summary = res.summary;
        for (auto key : {"fit", "fits"}) summary.erase(key);  // parameters and traces stay in the summary file
        std::cout << summary.dump(2) << '\n';
        for (const auto& f : res.files) std::cerr << "wrote " << f << '\n';
        std::fprintf(stderr, "%s finished in %.2fs (exit %d)\n", cmd.c_str(), secs, res.exit_code);
        return res.exit_code;
    } catch (const qnnlab::usage_error& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return 1;
    } catch (const qnnlab::domain_error& e) {
        std::cerr << "invalid input: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
}
