#pragma once

// Box-constrained optimisers over flat parameter vectors, plus the
// low-discrepancy points and the deterministic parallel loop they use.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <deque>
#include <functional>
#include <limits>
#include <numeric>
#include <span>
#include <thread>
#include <vector>

#include "qnnlab/errors.hpp"
#include "qnnlab/rng.hpp"

namespace qnnlab::optim {

/// f(x) with the gradient written into `grad` when it is non-empty.
using Objective = std::function<double(std::span<const double> x, std::span<double> grad)>;

struct Box {
    std::vector<double> lo;
    std::vector<double> hi;

    std::size_t size() const { return lo.size(); }
    void validate(std::size_t n) const {
        if (lo.size() != n || hi.size() != n) throw usage_error("Box: bound vectors must match the parameter count");
        for (std::size_t i = 0; i < n; ++i)
            if (!(lo[i] <= hi[i])) throw usage_error("Box: lower bound above upper bound");
    }
    void project(std::span<double> x) const {
        for (std::size_t i = 0; i < x.size(); ++i) x[i] = std::clamp(x[i], lo[i], hi[i]);
    }
};

struct Result {
    std::vector<double> x;
    double value = std::numeric_limits<double>::infinity();
    std::vector<double> trace;  // objective after each iteration / generation
    std::size_t iterations = 0;
    std::size_t evaluations = 0;
    bool converged = false;
};

/// Runs body(i) for i in [0, n) on up to `threads` workers. Each index is
/// handled exactly once, so results written per index do not depend on scheduling.
template <class Body>
void parallel_for(std::size_t n, unsigned threads, Body&& body) {
    threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(n, 1))));
    if (threads == 1) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) {
        pool.emplace_back([&, t] {
            for (std::size_t i = t; i < n; i += threads) body(i);
        });
    }
    for (auto& th : pool) th.join();
}

/// Radical inverse of `index` in `base`.
inline double radical_inverse(std::uint64_t index, unsigned base) {
    double inv = 1.0 / base, f = inv, r = 0.0;
    while (index > 0) {
        r += f * static_cast<double>(index % base);
        index /= base;
        f *= inv;
    }
    return r;
}

/// Halton point `index` (index >= 1 skips the origin) in [0, 1)^dim.
inline std::vector<double> halton(std::uint64_t index, int dim) {
    static constexpr unsigned primes[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};
    if (dim < 1 || dim > 12) throw usage_error("halton: dimension must be in 1..12");
    std::vector<double> p(static_cast<std::size_t>(dim));
    for (int j = 0; j < dim; ++j) p[j] = radical_inverse(index, primes[j]);
    return p;
}

/// First `count` Halton points starting after `skip` points.
inline std::vector<std::vector<double>> halton_points(std::size_t count, int dim, std::uint64_t skip = 0) {
    std::vector<std::vector<double>> pts;
    pts.reserve(count);
    for (std::size_t i = 0; i < count; ++i) pts.push_back(halton(skip + i + 1, dim));
    return pts;
}

struct LbfgsOptions {
    std::size_t max_iterations = 500;
    std::size_t memory = 10;
    double gradient_tol = 1e-10;  // on the projected gradient, infinity norm
    double function_tol = 1e-15;  // relative decrease
};

namespace detail {

inline double dot(std::span<const double> a, std::span<const double> b) {
    return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

// x - P(x - g): zero exactly at box-KKT points.
inline double projected_gradient_norm(std::span<const double> x, std::span<const double> g, const Box& box) {
    double m = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double stepped = std::clamp(x[i] - g[i], box.lo[i], box.hi[i]);
        m = std::max(m, std::abs(x[i] - stepped));
    }
    return m;
}

}  // namespace detail

/// Projected limited-memory BFGS. The quasi-Newton direction is projected onto
/// the box and accepted by Armijo backtracking, so the objective never
/// increases between iterations.
inline Result lbfgs_box(const Objective& f, std::vector<double> x0, const Box& box, const LbfgsOptions& opt = {}) {
    const std::size_t n = x0.size();
    box.validate(n);
    box.project(x0);
    Result res;
    std::vector<double> x = std::move(x0), g(n), xn(n), gn(n), dir(n);
    double fx = f(x, g);
    ++res.evaluations;
    std::deque<std::vector<double>> S, Y;
    std::deque<double> rho;

    for (res.iterations = 0; res.iterations < opt.max_iterations; ++res.iterations) {
        if (detail::projected_gradient_norm(x, g, box) <= opt.gradient_tol) {
            res.converged = true;
            break;
        }
        // Two-loop recursion on the free variables (those not pinned against a bound).
        for (std::size_t i = 0; i < n; ++i) {
            const bool pinned = (x[i] <= box.lo[i] && g[i] > 0.0) || (x[i] >= box.hi[i] && g[i] < 0.0);
            dir[i] = pinned ? 0.0 : -g[i];
        }
        std::vector<double> alpha(S.size());
        for (std::size_t k = S.size(); k-- > 0;) {
            alpha[k] = rho[k] * detail::dot(S[k], dir);
            for (std::size_t i = 0; i < n; ++i) dir[i] -= alpha[k] * Y[k][i];
        }
        if (!S.empty()) {
            const double gamma = detail::dot(S.back(), Y.back()) / detail::dot(Y.back(), Y.back());
            for (auto& d : dir) d *= gamma;
        }
        for (std::size_t k = 0; k < S.size(); ++k) {
            const double beta = rho[k] * detail::dot(Y[k], dir);
            for (std::size_t i = 0; i < n; ++i) dir[i] += (alpha[k] - beta) * S[k][i];
        }
        for (std::size_t i = 0; i < n; ++i) {
            const bool pinned = (x[i] <= box.lo[i] && g[i] > 0.0) || (x[i] >= box.hi[i] && g[i] < 0.0);
            if (pinned) dir[i] = 0.0;
        }
        if (detail::dot(dir, g) >= 0.0) {
            // Not a descent direction after projection; restart from steepest descent.
            S.clear();
            Y.clear();
            rho.clear();
            for (std::size_t i = 0; i < n; ++i) dir[i] = -g[i];
        }

        double step = 1.0;
        if (S.empty()) {
            const double gmax = std::max(1e-300, std::sqrt(detail::dot(dir, dir)));
            step = std::min(1.0, 1.0 / gmax);
        }
        bool accepted = false;
        double fn = fx;
        for (int ls = 0; ls < 60; ++ls) {
            for (std::size_t i = 0; i < n; ++i) xn[i] = x[i] + step * dir[i];
            box.project(xn);
            double decrease = 0.0;
            for (std::size_t i = 0; i < n; ++i) decrease += g[i] * (xn[i] - x[i]);
            fn = f(xn, gn);
            ++res.evaluations;
            if (std::isfinite(fn) && fn <= fx + 1e-4 * decrease && decrease < 0.0) {
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if (!accepted) {
            if (!S.empty()) {
                S.clear();
                Y.clear();
                rho.clear();
                continue;
            }
            res.converged = true;  // no progress possible along the projected gradient
            break;
        }
        std::vector<double> s(n), y(n);
        for (std::size_t i = 0; i < n; ++i) {
            s[i] = xn[i] - x[i];
            y[i] = gn[i] - g[i];
        }
        const double sy = detail::dot(s, y);
        if (sy > 1e-12 * std::sqrt(detail::dot(s, s) * detail::dot(y, y))) {
            S.push_back(std::move(s));
            Y.push_back(std::move(y));
            rho.push_back(1.0 / sy);
            if (S.size() > opt.memory) {
                S.pop_front();
                Y.pop_front();
                rho.pop_front();
            }
        }
        const double prev = fx;
        x.swap(xn);
        g.swap(gn);
        fx = fn;
        res.trace.push_back(fx);
        if (prev - fx <= opt.function_tol * std::max({std::abs(prev), std::abs(fx), 1e-300})) {
            res.converged = true;
            ++res.iterations;
            break;
        }
    }
    res.x = std::move(x);
    res.value = fx;
    return res;
}

struct AdamOptions {
    std::size_t iterations = 2000;
    double learning_rate = 0.02;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
};

/// Adam with iterates projected onto the box. Returns the best iterate seen;
/// the trace records the objective at every iterate.
inline Result adam(const Objective& f, std::vector<double> x0, const Box& box, const AdamOptions& opt = {}) {
    const std::size_t n = x0.size();
    box.validate(n);
    box.project(x0);
    Result res;
    std::vector<double> x = x0, g(n), m(n, 0.0), v(n, 0.0);
    double fx = f(x, g);
    ++res.evaluations;
    res.x = x;
    res.value = fx;
    for (std::size_t t = 1; t <= opt.iterations; ++t) {
        const double c1 = 1.0 - std::pow(opt.beta1, static_cast<double>(t));
        const double c2 = 1.0 - std::pow(opt.beta2, static_cast<double>(t));
        for (std::size_t i = 0; i < n; ++i) {
            m[i] = opt.beta1 * m[i] + (1.0 - opt.beta1) * g[i];
            v[i] = opt.beta2 * v[i] + (1.0 - opt.beta2) * g[i] * g[i];
            x[i] -= opt.learning_rate * (m[i] / c1) / (std::sqrt(v[i] / c2) + opt.epsilon);
        }
        box.project(x);
        fx = f(x, g);
        ++res.evaluations;
        res.trace.push_back(fx);
        res.iterations = t;
        if (fx < res.value) {
            res.value = fx;
            res.x = x;
        }
    }
    return res;
}

struct DeOptions {
    std::size_t population_factor = 15;  // population = factor * dimension
    double mutation = 0.7;
    double crossover = 0.9;
    std::size_t generations = 300;
    double tol = 1e-12;  // stop when the population spread in f falls below tol
    bool polish = true;
    unsigned threads = 1;
};

/// rand/1/bin differential evolution with an optional final projected L-BFGS
/// polish of the best member. `x0`, when given, seeds population member 0.
inline Result differential_evolution(const Objective& f, const Box& box, std::uint64_t seed, const DeOptions& opt = {},
                                     std::span<const double> x0 = {}) {
    const std::size_t dim = box.size();
    box.validate(dim);
    if (dim == 0) throw usage_error("differential_evolution: empty parameter vector");
    const std::size_t pop = std::max<std::size_t>(5, opt.population_factor * dim);
    Rng rng(seed);
    std::vector<std::vector<double>> members(pop, std::vector<double>(dim));
    for (std::size_t p = 0; p < pop; ++p)
        for (std::size_t j = 0; j < dim; ++j) members[p][j] = rng.uniform(box.lo[j], box.hi[j]);
    if (!x0.empty()) {
        if (x0.size() != dim) throw usage_error("differential_evolution: x0 length");
        members[0].assign(x0.begin(), x0.end());
        box.project(members[0]);
    }
    std::vector<double> fit(pop);
    const std::span<double> no_grad;
    parallel_for(pop, opt.threads, [&](std::size_t p) { fit[p] = f(members[p], no_grad); });
    Result res;
    res.evaluations = pop;

    std::vector<std::vector<double>> trial(pop, std::vector<double>(dim));
    std::vector<double> trial_fit(pop);
    for (res.iterations = 0; res.iterations < opt.generations; ++res.iterations) {
        // Serial proposal stage keeps the random stream independent of threading.
        for (std::size_t p = 0; p < pop; ++p) {
            std::size_t r0, r1, r2;
            do r0 = rng.below(pop);
            while (r0 == p);
            do r1 = rng.below(pop);
            while (r1 == p || r1 == r0);
            do r2 = rng.below(pop);
            while (r2 == p || r2 == r0 || r2 == r1);
            const std::size_t forced = rng.below(dim);
            for (std::size_t j = 0; j < dim; ++j) {
                const bool cross = j == forced || rng.uniform() < opt.crossover;
                double v = cross ? members[r0][j] + opt.mutation * (members[r1][j] - members[r2][j]) : members[p][j];
                if (v < box.lo[j] || v > box.hi[j]) v = rng.uniform(box.lo[j], box.hi[j]);
                trial[p][j] = v;
            }
        }
        parallel_for(pop, opt.threads, [&](std::size_t p) { trial_fit[p] = f(trial[p], no_grad); });
        res.evaluations += pop;
        for (std::size_t p = 0; p < pop; ++p) {
            if (trial_fit[p] <= fit[p]) {
                members[p].swap(trial[p]);
                fit[p] = trial_fit[p];
            }
        }
        const auto [lo_it, hi_it] = std::minmax_element(fit.begin(), fit.end());
        res.trace.push_back(*lo_it);
        if (*hi_it - *lo_it <= opt.tol) {
            res.converged = true;
            ++res.iterations;
            break;
        }
    }
    const std::size_t best = static_cast<std::size_t>(std::min_element(fit.begin(), fit.end()) - fit.begin());
    res.x = members[best];
    res.value = fit[best];
    if (opt.polish) {
        Result pol = lbfgs_box(f, res.x, box);
        res.evaluations += pol.evaluations;
        if (pol.value <= res.value) {
            res.x = std::move(pol.x);
            res.value = pol.value;
            res.trace.push_back(res.value);
        }
    }
    return res;
}

}  // namespace qnnlab::optim
