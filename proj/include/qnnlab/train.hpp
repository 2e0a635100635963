#pragma once

// MSE loss, closed-form gradients, empirical L2(mu) error, and the fitting
// methods: A (box-constrained quasi-Newton), B (two-stage), C (Adam), DE.

#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qnnlab/circuit.hpp"
#include "qnnlab/errors.hpp"
#include "qnnlab/optim.hpp"
#include "qnnlab/rng.hpp"
#include "qnnlab/sampler.hpp"

namespace qnnlab::train {

using circuit::CircuitConfig;
using circuit::QnnParams;

struct EvaluationMeasure {
    std::vector<std::vector<double>> points;
    std::vector<double> weights;

    static EvaluationMeasure uniform(std::vector<std::vector<double>> pts) {
        if (pts.empty()) throw usage_error("EvaluationMeasure: no points");
        const double w = 1.0 / static_cast<double>(pts.size());
        std::vector<double> weights(pts.size(), w);
        return {std::move(pts), std::move(weights)};
    }

    void validate() const {
        if (points.size() != weights.size() || points.empty()) {
            throw usage_error("EvaluationMeasure: points and weights must be nonempty and equally long");
        }
        double s = 0.0;
        for (double w : weights) {
            if (!(w >= 0.0)) throw usage_error("EvaluationMeasure: weights must be >= 0");
            s += w;
        }
        if (std::abs(s - 1.0) > 1e-9) throw usage_error("EvaluationMeasure: weights must sum to 1");
    }
};

struct TrainingSet {
    std::vector<std::vector<double>> inputs;
    std::vector<double> targets;
    double scale = 1.0;

    std::size_t size() const { return inputs.size(); }
    int dim() const { return inputs.empty() ? 0 : static_cast<int>(inputs.front().size()); }

    void validate() const {
        if (inputs.empty()) throw usage_error("TrainingSet: no data");
        if (inputs.size() != targets.size()) throw usage_error("TrainingSet: inputs and targets differ in length");
        for (const auto& x : inputs)
            if (static_cast<int>(x.size()) != dim()) throw usage_error("TrainingSet: ragged inputs");
        for (double t : targets)
            if (!(std::abs(t) <= scale)) throw usage_error("TrainingSet: target outside [-R, R]");
    }
};

/// How the model output is produced when evaluating the loss. The gradient
/// always differentiates the closed form.
enum class Signal { analytic, exact, shots };

/// Affine post-map applied to the model output, g = gain * f + offset. The
/// identity by default; (alpha, bias) turns the model into its depolarised version.
struct OutputMap {
    double gain = 1.0;
    double offset = 0.0;
};

struct LossOptions {
    Signal signal = Signal::analytic;
    std::uint64_t shots = 8192;
    std::uint64_t seed = 0;
    OutputMap output;
};

inline double model_output(const QnnParams& params, std::span<const double> x, const CircuitConfig& cfg,
                           const LossOptions& opt, std::size_t point_index = 0) {
    double f = 0.0;
    switch (opt.signal) {
        case Signal::analytic: f = circuit::analytic_output(params, x, cfg.scale); break;
        case Signal::exact: f = circuit::evaluate(params, x, cfg, circuit::EvalMode::exact); break;
        case Signal::shots: {
            const auto dist = circuit::outcome_distribution(circuit::final_state(params, x, cfg));
            f = sampler::sampled_output(dist, cfg, opt.shots, Rng::stream(opt.seed, point_index)());
            break;
        }
    }
    return opt.output.gain * f + opt.output.offset;
}

namespace detail {
inline void check(const QnnParams& params, const TrainingSet& data, const CircuitConfig& cfg) {
    data.validate();
    circuit::detail::check_shapes(params, cfg);
    if (params.dim() != data.dim()) throw usage_error("params and data differ in input dimension");
}
}  // namespace detail

/// (1/M) sum_i (f(x_i) - P_i)^2.
inline double mse_loss(const QnnParams& params, const TrainingSet& data, const CircuitConfig& cfg,
                       const LossOptions& opt = {}) {
    detail::check(params, data, cfg);
    double s = 0.0;
    for (std::size_t i = 0; i < data.size(); ++i) {
        const double r = model_output(params, data.inputs[i], cfg, opt, i) - data.targets[i];
        s += r * r;
    }
    return s / static_cast<double>(data.size());
}

/// Loss and its gradient in the packed layout [a | b | gamma] from the closed form
/// f = (R/n) sum_k cos(gamma_k) cos(b_k + a_k . x), including the output map.
inline double loss_and_gradient(const QnnParams& params, const TrainingSet& data, const CircuitConfig& cfg,
                                std::span<double> grad, const OutputMap& map = {}) {
    detail::check(params, data, cfg);
    const int n = params.blocks();
    const int d = params.dim();
    const std::size_t nd = static_cast<std::size_t>(n) * d;
    if (grad.size() != nd + 2 * static_cast<std::size_t>(n)) throw usage_error("gradient buffer has wrong size");
    std::fill(grad.begin(), grad.end(), 0.0);
    const double rn = cfg.scale / n;
    const double m = static_cast<double>(data.size());
    std::vector<double> cg(n), sg(n);
    for (int k = 0; k < n; ++k) {
        cg[k] = std::cos(params.angle(k));
        sg[k] = std::sin(params.angle(k));
    }
    std::vector<double> ca(n), sa(n);
    double loss = 0.0;
    for (std::size_t i = 0; i < data.size(); ++i) {
        const auto& x = data.inputs[i];
        double f = 0.0;
        for (int k = 0; k < n; ++k) {
            const double phi = params.input_angle(k, x);
            ca[k] = std::cos(phi);
            sa[k] = std::sin(phi);
            f += cg[k] * ca[k];
        }
        const double r = map.gain * rn * f + map.offset - data.targets[i];
        loss += r * r;
        const double w = 2.0 * r * map.gain * rn / m;
        for (int k = 0; k < n; ++k) {
            const double db = -w * cg[k] * sa[k];
            grad[nd + k] += db;
            grad[nd + n + k] += -w * sg[k] * ca[k];
            for (int j = 0; j < d; ++j) grad[static_cast<std::size_t>(k) * d + j] += db * x[j];
        }
    }
    return loss / m;
}

inline std::vector<double> analytic_gradient(const QnnParams& params, const TrainingSet& data,
                                             const CircuitConfig& cfg, const OutputMap& map = {}) {
    std::vector<double> g(params.size());
    loss_and_gradient(params, data, cfg, g, map);
    return g;
}

/// sqrt(sum_i w_i |f_i - g_i|^2).
inline double l2_error(std::span<const double> f, std::span<const double> g, const EvaluationMeasure& mu) {
    mu.validate();
    if (f.size() != mu.weights.size() || g.size() != mu.weights.size()) {
        throw usage_error("l2_error: value sequences must match the measure");
    }
    double s = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) s += mu.weights[i] * (f[i] - g[i]) * (f[i] - g[i]);
    return std::sqrt(s);
}

enum class Method { A, B, C, DE };

inline const char* method_name(Method m) {
    switch (m) {
        case Method::A: return "A";
        case Method::B: return "B";
        case Method::C: return "C";
        case Method::DE: return "DE";
    }
    return "?";
}

inline Method parse_method(const std::string& s) {
    if (s == "A" || s == "a") return Method::A;
    if (s == "B" || s == "b") return Method::B;
    if (s == "C" || s == "c") return Method::C;
    if (s == "DE" || s == "de") return Method::DE;
    throw usage_error("unknown training method '" + s + "' (expected A, B, C or DE)");
}

struct Boxes {
    double freq = 10.0;                // a in [-freq, freq]^d
    double phase = std::numbers::pi;   // b in [-phase, phase]
    double angle = std::numbers::pi;   // gamma in [-angle, angle]
};

struct Budget {
    std::size_t iterations = 500;   // A, each stage of B, C
    std::size_t generations = 300;  // DE
    double learning_rate = 0.02;    // C
    std::size_t population_factor = 15;
    double mutation = 0.7;
    double crossover = 0.9;
    bool polish = true;             // DE
    unsigned threads = 1;
    Signal signal = Signal::analytic;  // what the loss value is computed from
    std::uint64_t shots = 8192;        // Signal::shots only
};

struct FitReport {
    QnnParams params;
    std::vector<double> loss_trace;
    Method method = Method::A;
    std::size_t iterations = 0;
    std::size_t evaluations = 0;
    std::uint64_t seed = 0;
    double final_loss = 0.0;
    std::optional<double> stage1_loss;  // method B
    Boxes boxes;
    std::string init = "a ~ U[-1,1], b ~ U[-pi,pi], gamma ~ U[-0.1,0.1]";
};

inline optim::Box parameter_box(int blocks, int dim, const Boxes& b) {
    const std::size_t nd = static_cast<std::size_t>(blocks) * dim;
    optim::Box box;
    box.lo.assign(nd + 2 * static_cast<std::size_t>(blocks), 0.0);
    box.hi = box.lo;
    for (std::size_t i = 0; i < box.lo.size(); ++i) {
        const double w = i < nd ? b.freq : i < nd + static_cast<std::size_t>(blocks) ? b.phase : b.angle;
        box.lo[i] = -w;
        box.hi[i] = w;
    }
    return box;
}

inline QnnParams initial_params(int blocks, int dim, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<double> a(static_cast<std::size_t>(blocks) * dim), b(blocks), g(blocks);
    for (auto& v : a) v = rng.uniform(-1.0, 1.0);
    for (auto& v : b) v = rng.uniform(-std::numbers::pi, std::numbers::pi);
    // gamma = 0 is a critical point of cos(gamma); start just off it so gradients reach gamma.
    for (auto& v : g) v = rng.uniform(-0.1, 0.1);
    return QnnParams(dim, std::move(a), std::move(b), std::move(g));
}

namespace detail {

// Objective over a subset of packed coordinates; the others stay at `base`.
// With a non-analytic signal the value comes from the simulated circuit (shots
// use a fixed seed, so the objective stays deterministic); the gradient is the
// closed form either way.
inline optim::Objective masked_objective(const TrainingSet& data, const CircuitConfig& cfg, const OutputMap& map,
                                         std::vector<double> base, std::vector<std::size_t> free_idx,
                                         LossOptions signal = {}) {
    const int n = cfg.blocks;
    const int d = data.dim();
    signal.output = map;
    return [&data, &cfg, map, signal, base = std::move(base), free_idx = std::move(free_idx), n, d](
               std::span<const double> z, std::span<double> grad) {
        std::vector<double> full = base;
        for (std::size_t i = 0; i < free_idx.size(); ++i) full[free_idx[i]] = z[i];
        const QnnParams p = QnnParams::unpack(full, n, d);
        std::vector<double> g(full.size());
        double loss = loss_and_gradient(p, data, cfg, g, map);
        if (signal.signal != Signal::analytic) loss = mse_loss(p, data, cfg, signal);
        if (!grad.empty())
            for (std::size_t i = 0; i < free_idx.size(); ++i) grad[i] = g[free_idx[i]];
        return loss;
    };
}

inline optim::Box sub_box(const optim::Box& box, const std::vector<std::size_t>& idx) {
    optim::Box b;
    for (auto i : idx) {
        b.lo.push_back(box.lo[i]);
        b.hi.push_back(box.hi[i]);
    }
    return b;
}

}  // namespace detail

/// Fits the QNN to `data`. Deterministic for fixed (method, seed, budget).
inline FitReport fit(Method method, const TrainingSet& data, const CircuitConfig& cfg, const Budget& budget,
                     std::uint64_t seed, const Boxes& boxes = {}, const OutputMap& map = {},
                     std::optional<QnnParams> start = std::nullopt) {
    data.validate();
    cfg.validate();
    const int n = cfg.blocks;
    const int d = data.dim();
    const QnnParams init = start ? *start : initial_params(n, d, seed);
    if (init.blocks() != n || init.dim() != d) throw usage_error("fit: starting parameters have the wrong shape");
    const optim::Box box = parameter_box(n, d, boxes);
    const std::vector<double> x0 = init.pack();
    std::vector<std::size_t> all(x0.size());
    std::iota(all.begin(), all.end(), std::size_t{0});

    LossOptions sig;
    sig.signal = budget.signal;
    sig.shots = budget.shots;
    sig.seed = seed;

    FitReport rep;
    rep.method = method;
    rep.seed = seed;
    rep.boxes = boxes;
    if (start) rep.init = "caller-supplied";

    auto finish = [&](std::vector<double> x) {
        rep.params = QnnParams::unpack(x, n, d);
        sig.output = map;
        rep.final_loss = mse_loss(rep.params, data, cfg, sig);
    };

    switch (method) {
        case Method::A: {
            optim::LbfgsOptions o;
            o.max_iterations = budget.iterations;
            const auto r = optim::lbfgs_box(detail::masked_objective(data, cfg, map, x0, all, sig), x0, box, o);
            rep.loss_trace = r.trace;
            rep.iterations = r.iterations;
            rep.evaluations = r.evaluations;
            finish(r.x);
            break;
        }
        case Method::B: {
            const std::size_t nd = static_cast<std::size_t>(n) * d;
            std::vector<std::size_t> ab(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(nd + n));
            std::vector<std::size_t> gam(all.begin() + static_cast<std::ptrdiff_t>(nd + n), all.end());
            optim::LbfgsOptions o;
            o.max_iterations = budget.iterations;
            std::vector<double> z1(ab.size());
            for (std::size_t i = 0; i < ab.size(); ++i) z1[i] = x0[ab[i]];
            const auto r1 = optim::lbfgs_box(detail::masked_objective(data, cfg, map, x0, ab, sig), z1,
                                             detail::sub_box(box, ab), o);
            std::vector<double> x1 = x0;
            for (std::size_t i = 0; i < ab.size(); ++i) x1[ab[i]] = r1.x[i];
            rep.stage1_loss = r1.value;
            std::vector<double> z2(gam.size());
            for (std::size_t i = 0; i < gam.size(); ++i) z2[i] = x1[gam[i]];
            const auto r2 = optim::lbfgs_box(detail::masked_objective(data, cfg, map, x1, gam, sig), z2,
                                             detail::sub_box(box, gam), o);
            std::vector<double> x2 = x1;
            for (std::size_t i = 0; i < gam.size(); ++i) x2[gam[i]] = r2.x[i];
            rep.loss_trace = r1.trace;
            rep.loss_trace.insert(rep.loss_trace.end(), r2.trace.begin(), r2.trace.end());
            rep.iterations = r1.iterations + r2.iterations;
            rep.evaluations = r1.evaluations + r2.evaluations;
            finish(x2);
            break;
        }
        case Method::C: {
            optim::AdamOptions o;
            o.iterations = budget.iterations;
            o.learning_rate = budget.learning_rate;
            const auto r = optim::adam(detail::masked_objective(data, cfg, map, x0, all, sig), x0, box, o);
            rep.loss_trace = r.trace;
            rep.iterations = r.iterations;
            rep.evaluations = r.evaluations;
            finish(r.x);
            break;
        }
        case Method::DE: {
            optim::DeOptions o;
            o.generations = budget.generations;
            o.population_factor = budget.population_factor;
            o.mutation = budget.mutation;
            o.crossover = budget.crossover;
            o.polish = budget.polish;
            o.threads = budget.threads;
            const auto r = optim::differential_evolution(detail::masked_objective(data, cfg, map, x0, all, sig), box,
                                                         seed, o, x0);
            rep.loss_trace = r.trace;
            rep.iterations = r.iterations;
            rep.evaluations = r.evaluations;
            rep.init = "uniform population over the boxes, member 0 = " + rep.init;
            finish(r.x);
            break;
        }
    }
    return rep;
}

}  // namespace qnnlab::train
