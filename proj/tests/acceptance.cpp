// Acceptance run: one PASS/FAIL line per criterion.
//
//   acceptance [--only N] [--seed S]
//
// Tolerances and runtime limits are fixed below. Exit status is 0 only when
// every selected criterion passes.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qnnlab/qnnlab.hpp"

using namespace qnnlab;
namespace ex = qnnlab::experiments;
using circuit::CircuitConfig;
using circuit::QnnParams;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

struct Criterion {
    int id;
    const char* title;
    double time_limit;  // seconds
    std::function<Outcome(std::uint64_t)> run;
};

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

// Random density matrix: normalised G G^dagger with complex Gaussian G.
noise::DensityMatrix random_rho(Rng& rng, Eigen::Index dim) {
    circuit::Matrix g(dim, dim);
    for (Eigen::Index i = 0; i < dim; ++i)
        for (Eigen::Index j = 0; j < dim; ++j) g(i, j) = {rng.normal(), rng.normal()};
    circuit::Matrix r = g * g.adjoint();
    r /= r.trace().real();
    return noise::DensityMatrix(r);
}

// ---- 1
Outcome bound_constants(std::uint64_t) {
    const auto res = ex::cmd_bounds(ex::RunConfig{});
    const auto& t = res.tables.at("table");
    double a_star = NAN, frak_b = NAN, bach = NAN, bach_quoted = NAN;
    std::string flag;
    for (std::size_t i = 0; i < t.size(); ++i) {
        if (t.text(i, "family") == "bs-truncated") {
            a_star = t.number(i, "a_star");
            frak_b = t.number(i, "bound");
        }
        if (t.text(i, "family") == "bachelier") {
            bach = t.number(i, "bound");
            bach_quoted = t.number(i, "quoted_value");
            flag = t.text(i, "flag");
        }
    }
    const bool ok = std::abs(a_star - 0.584) <= 0.002 && std::abs(frak_b - 2.316) <= 0.02 && bach_quoted == 0.1986 &&
                    std::isfinite(bach) && !flag.empty();
    return {ok, fmt("a*=%.5f B=%.5f; bachelier formula=%.4f quoted=%.4f flagged=%s", a_star, frak_b, bach, bach_quoted,
                    flag.empty() ? "no" : "yes")};
}

// ---- 2
Outcome truncation_error(std::uint64_t) {
    const double e = bounds::bs_truncation_error(0.0, 1.0, 0.4, 0.2, 1.0);
    return {e >= 2e-6 && e <= 6e-6, fmt("error=%.4e in [2e-6, 6e-6]", e)};
}

// ---- 3
Outcome circuit_identity(std::uint64_t seed) {
    const auto c = ex::exact_analytic_check(seed, 1e-10, 100);
    return {c.ok, fmt("%zu/%zu within 1e-10, max deviation %.3e", c.passed, c.cases, c.max_deviation)};
}

// ---- 4
Outcome ucr_equivalence(std::uint64_t seed) {
    const auto c = ex::ucr_equivalence_check(seed, 1e-9);
    std::string counts;
    for (const auto& [n, g] : c.extra.at("gate_counts").items())
        counts += fmt("; n=%s: %d CNOT + %d 1q", n.c_str(), g.at("cnot").get<int>(), g.at("one_qubit").get<int>());
    return {c.ok, fmt("%zu/%zu overlaps within 1e-9 of 1, max deviation %.3e%s", c.passed, c.cases, c.max_deviation,
                      counts.c_str())};
}

// ---- 5
Outcome noise_closed_forms(std::uint64_t seed) {
    constexpr double tol = 1e-10;
    constexpr int instances = 20;
    Rng rng = Rng::stream(seed, 5);
    double dev_depol = 0, dev_state = 0, dev_probs = 0, dev_fid = 0, dev_proj = 0;
    for (int i = 0; i < instances; ++i) {
        const int q = 1 + i % 3;
        const auto rho = random_rho(rng, Eigen::Index{1} << q);
        const double lam = rng.uniform(0.0, 0.5);
        dev_depol = std::max(dev_depol, noise::max_abs_diff(noise::depolarise(rho, lam),
                                                            noise::apply_channel(rho, noise::depolarising_kraus(lam, q))));
    }
    for (int i = 0; i < instances; ++i) {
        const int n = 1 + i % 2;  // 2 and 3 qubits
        const CircuitConfig cfg{n, 0, 1.0 + rng.uniform()};
        const int d = 1 + static_cast<int>(rng.below(3));
        const auto p = ex::detail::random_params(rng, n, d);
        const auto x = ex::detail::random_x(rng, d);
        const noise::DepolarisingSpec spec{rng.uniform(0.0, 0.3), rng.uniform(0.0, 0.3)};
        const int q = cfg.qubits();
        const auto chv = noise::depolarising_kraus(spec.lambda_v, q);
        const auto chu = noise::depolarising_kraus(spec.lambda_u, q);
        const auto oracle = noise::noisy_state_pipeline(p, x, cfg, chv, chu);
        dev_state = std::max(dev_state, noise::max_abs_diff(noise::noisy_state(p, x, cfg, spec), oracle));
        const auto ideal = circuit::grouped_probabilities(circuit::final_state(p, x, cfg), cfg);
        const auto closed = noise::noisy_probs(ideal, spec, cfg);
        const auto from_oracle = noise::grouped_probabilities(oracle, cfg);
        for (int m = 0; m < 4; ++m) dev_probs = std::max(dev_probs, std::abs(closed.p[m] - from_oracle.p[m]));
        dev_fid = std::max(dev_fid, std::abs(noise::depolar_fidelity(spec, cfg) -
                                             noise::fidelity(circuit::final_state(p, x, cfg), oracle)));
    }
    for (int i = 0; i < instances; ++i) {
        const CircuitConfig cfg{8, 0, 1.0};
        const auto p = ex::detail::random_params(rng, 8, 5);
        const auto x = ex::detail::random_x(rng, 5);
        const noise::DepolarisingSpec spec{rng.uniform(0.0, 0.1), rng.uniform(0.0, 0.1)};
        const auto rho = noise::depolarised_pipeline(p, x, cfg, spec);
        const auto closed = noise::noisy_probs(circuit::grouped_probabilities(circuit::final_state(p, x, cfg), cfg), spec, cfg);
        for (int m = 0; m < 4; ++m) {
            const double proj = (circuit::outcome_projector(m, cfg) * rho.matrix()).trace().real();
            dev_proj = std::max(dev_proj, std::abs(closed.p[m] - proj));
        }
    }
    const bool ok = dev_depol <= tol && dev_state <= tol && dev_probs <= tol && dev_fid <= tol && dev_proj <= tol;
    return {ok, fmt("max deviations: depolarise %.1e, noisy_state %.1e, noisy_probs %.1e, fidelity %.1e, "
                    "5-qubit projectors %.1e (tol 1e-10, %d instances each)",
                    dev_depol, dev_state, dev_probs, dev_fid, dev_proj, instances)};
}

// ---- 6
Outcome offset_cancellation(std::uint64_t seed) {
    Rng rng = Rng::stream(seed, 6);
    double worst_id = 0.0, worst_b1 = 0.0, worst_b2 = 0.0;
    for (int i = 0; i < 50; ++i) {
        const CircuitConfig cfg{1 + static_cast<int>(rng.below(12)), static_cast<int>(rng.below(3)), 0.5 + 2 * rng.uniform()};
        const double alpha = 1.0 - rng.uniform();  // (0, 1]
        const double f = rng.uniform(-cfg.scale, cfg.scale);
        const auto corr = noise::offset_correction(alpha, cfg);
        worst_id = std::max(worst_id, std::abs(noise::corrected_output(noise::noisy_output(f, alpha, cfg), corr) - f));

        std::vector<std::pair<double, double>> pairs;
        for (int k = 0; k < 16; ++k) {
            const double g = rng.uniform(-cfg.scale, cfg.scale);
            pairs.emplace_back(noise::noisy_output(g, alpha, cfg), g);
        }
        const auto fitted = noise::fit_offset(pairs);
        worst_b1 = std::max(worst_b1, std::abs(fitted.beta1 - 1.0 / alpha) * alpha);
        worst_b2 = std::max(worst_b2, std::abs(fitted.beta2 + noise::bias_constant(alpha, cfg) / alpha) * alpha);
    }
    const bool ok = worst_id <= 1e-12 && worst_b1 <= 1e-8 && worst_b2 <= 1e-8;
    return {ok, fmt("identity max error %.2e (tol 1e-12); fit_offset beta1 %.2e, beta2 %.2e (tol 1e-8, relative to 1/alpha)",
                    worst_id, worst_b1, worst_b2)};
}

// ---- 7
Outcome gaussian_convergence(std::uint64_t seed) {
    ex::RunConfig rc;
    rc.set("/seed", ex::json(seed));
    std::string detail;
    bool ok = true;
    int restarts = 0;
    for (int n : {2, 4, 8, 12, 16}) {
        const auto g = ex::fit_gaussian(rc, 1.0, n, 100 + static_cast<std::uint64_t>(n));
        const bool within = g.rmse <= g.bound && g.mae / g.bound < 1.0;
        ok = ok && within;
        restarts += g.restarts;
        detail += fmt("n=%d rmse=%.2e bound=%.3f ratio=%.2e; ", n, g.rmse, g.bound, g.mae / g.bound);
    }
    detail += fmt("restarts used: %d", restarts);
    return {ok, detail};
}

// ---- 8
Outcome shot_noise_gate(std::uint64_t seed) {
    const auto c = ex::shot_noise_check(seed, 8192, 100, 3.0, 0.95);
    const double flat = c.extra.at("fraction_within_R_over_sqrt_shots").get<double>();
    const auto within = static_cast<int>(std::lround(flat * 100));
    return {within >= 95, fmt("%d/100 within R/sqrt(8192) (need 95); %zu/100 within 3 binomial sd; max z %.2f",
                              within, c.passed, c.extra.at("max_z").get<double>())};
}

// ---- 9
Outcome noise_sweep_shape(std::uint64_t seed) {
    ex::RunConfig rc;
    rc.set("/seed", ex::json(seed));
    rc.set("/noise/eps", ex::json::parse("[0.001, 0.005, 0.01, 0.02]"));
    const auto res = ex::cmd_noise_sweep(rc);
    const auto& pts = res.tables.at("points");
    const auto& mae = res.tables.at("mae");
    bool contract = true;
    double worst_ratio = 0.0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const double c = pts.number(i, "bias");
        const double before = std::abs(pts.number(i, "ideal") - c);
        const double after = std::abs(pts.number(i, "density_matrix") - c);
        const double alpha = pts.number(i, "alpha");
        contract = contract && after <= before + 1e-15;
        worst_ratio = std::max(worst_ratio, std::abs(after - alpha * before));
    }
    bool monotone = true, shrinking = true;
    std::string trail;
    for (std::size_t i = 0; i < mae.size(); ++i) {
        trail += fmt("%s%.4g", i ? " < " : "", mae.number(i, "mae_closed"));
        if (i > 0) {
            monotone = monotone && mae.number(i, "mae_closed") > mae.number(i - 1, "mae_closed");
            shrinking = shrinking && mae.number(i, "mean_distance_to_bias") < mae.number(i - 1, "mean_distance_to_bias");
        }
    }
    const bool ok = contract && shrinking && monotone && worst_ratio <= 1e-12 && res.exit_code == 0;
    return {ok, fmt("contraction %s (|f~-c| = alpha|f-c| to %.1e), distance to bias shrinking %s; MAE %s: %s; "
                    "closed form vs density matrix %.1e",
                    contract ? "yes" : "no", worst_ratio, shrinking ? "yes" : "no", monotone ? "increasing" : "NOT increasing",
                    trail.c_str(), res.summary.at("max_closed_vs_density").get<double>())};
}

// ---- 10
Outcome hardware_budget(std::uint64_t seed) {
    ex::RunConfig rc;
    rc.set("/seed", ex::json(seed));
    rc.set("/hardware/presets", ex::json::parse(R"(["ibm-fez"])"));
    rc.set("/hardware/blocks", ex::json::parse("[8]"));
    rc.set("/hardware/test_points", ex::json(10));
    const auto res = ex::cmd_hardware(rc);
    const auto& t = res.tables.at("budget");
    if (t.size() != 1) return {false, "expected one budget row"};
    const double alpha = t.number(0, "alpha");
    const double sys = t.number(0, "systematic"), off = t.number(0, "offset"), ro = t.number(0, "readout");
    const double total = t.number(0, "total"), mae = t.number(0, "empirical_mae");
    const double frac = t.number(0, "fraction_within");
    const bool ok = alpha > 0.98 && alpha < 1.0 && t.number(0, "qubits") == 5 && sys >= off && sys >= ro && sys > 0 &&
                    mae <= total && frac == 1.0;
    return {ok, fmt("alpha=%.5f; terms: approx %.4f, systematic %.3e, offset %.3e, readout %.3e, total %.4f; "
                    "empirical MAE %.4f, fraction within %.2f",
                    alpha, t.number(0, "statistical"), sys, off, ro, total, mae, frac)};
}

// ---- 11
Outcome gradient_check(std::uint64_t seed) {
    Rng rng = Rng::stream(seed, 11);
    double worst = 0.0;
    for (int t = 0; t < 20; ++t) {
        const int n = 1 + static_cast<int>(rng.below(8));
        const int d = 1 + static_cast<int>(rng.below(5));
        const CircuitConfig cfg{n, 0, 1.0};
        train::TrainingSet data;
        for (int i = 0; i < 20; ++i) {
            data.inputs.push_back(ex::detail::random_x(rng, d));
            data.targets.push_back(rng.uniform(-1.0, 1.0));
        }
        const auto p = ex::detail::random_params(rng, n, d);
        const auto g = train::analytic_gradient(p, data, cfg);
        auto v = p.pack();
        double num = 0.0, den = 0.0;
        for (std::size_t i = 0; i < v.size(); ++i) {
            auto up = v, dn = v;
            up[i] += 1e-6;
            dn[i] -= 1e-6;
            const double fd = (train::mse_loss(QnnParams::unpack(up, n, d), data, cfg) -
                               train::mse_loss(QnnParams::unpack(dn, n, d), data, cfg)) / 2e-6;
            num += (g[i] - fd) * (g[i] - fd);
            den += fd * fd;
        }
        worst = std::max(worst, std::sqrt(num / std::max(den, 1e-300)));
    }
    return {worst < 1e-4, fmt("worst relative error %.2e over 20 draws (tol 1e-4)", worst)};
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Acceptance criteria"};
    int only = 0;
    std::uint64_t seed = 20240601;
    app.add_option("--only", only, "Run a single criterion (1-11)")->check(CLI::Range(1, 11));
    app.add_option("--seed", seed, "Master seed");
    CLI11_PARSE(app, argc, argv);

    const std::vector<Criterion> criteria{
        {1, "bound constants", 1.0, bound_constants},
        {2, "truncation error", 1.0, truncation_error},
        {3, "circuit identity", 5.0, circuit_identity},
        {4, "UCR equivalence", 10.0, ucr_equivalence},
        {5, "noise closed forms vs oracle", 60.0, noise_closed_forms},
        {6, "offset cancellation", 1.0, offset_cancellation},
        {7, "Gaussian convergence", 600.0, gaussian_convergence},
        {8, "shot-noise gate", 30.0, shot_noise_gate},
        {9, "noise sweep shape", 60.0, noise_sweep_shape},
        {10, "hardware budget", 60.0, hardware_budget},
        {11, "gradient check", 5.0, gradient_check},
    };
    int failed = 0;
    for (const auto& c : criteria) {
        if (only && c.id != only) continue;
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run(seed);
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        const bool in_time = secs <= c.time_limit;
        const bool pass = o.pass && in_time;
        failed += !pass;
        std::printf("criterion %2d %s  %-28s %s [%.2fs / limit %.0fs%s]\n", c.id, pass ? "PASS" : "FAIL", c.title,
                    o.detail.c_str(), secs, c.time_limit, in_time ? "" : ", OVER TIME");
        std::fflush(stdout);
    }
    return failed == 0 ? 0 : 1;
}
