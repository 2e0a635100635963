#pragma once

// Special functions and adaptive quadrature used by the Fourier bounds.

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <queue>
#include <vector>

#include "qnnlab/errors.hpp"

namespace qnnlab::numerics {

namespace detail {

// erf for |x| <= 3 from the everywhere-positive series
// erf(x) = 2/sqrt(pi) exp(-x^2) sum_n 2^n x^(2n+1) / (1*3*...*(2n+1)).
inline double erf_series(double x) {
    const double x2 = x * x;
    double term = x;
    double sum = x;
    for (int n = 1; n < 500; ++n) {
        term *= 2.0 * x2 / (2.0 * n + 1.0);
        sum += term;
        if (std::abs(term) <= 1e-17 * std::abs(sum)) break;
    }
    return 2.0 / std::sqrt(std::numbers::pi) * std::exp(-x2) * sum;
}

// erfc for x > 3 via the Laplace continued fraction, evaluated backwards.
inline double erfc_cf(double x) {
    double t = x;
    for (int k = 200; k >= 1; --k) t = x + 0.5 * k / t;
    return std::exp(-x * x) / (std::sqrt(std::numbers::pi) * t);
}

}  // namespace detail

/// Error function, absolute accuracy better than 1e-12 on the whole line.
inline double erf(double x) {
    if (std::isnan(x)) return x;
    if (x > 3.0) return 1.0 - detail::erfc_cf(x);
    if (x < -3.0) return detail::erfc_cf(-x) - 1.0;
    return detail::erf_series(x);
}

/// Complementary error function; keeps relative accuracy in the right tail.
inline double erfc(double x) {
    if (std::isnan(x)) return x;
    if (x > 3.0) return detail::erfc_cf(x);
    if (x < -3.0) return 2.0 - detail::erfc_cf(-x);
    return 1.0 - detail::erf_series(x);
}

/// Standard Gaussian CDF, (1 + erf(x/sqrt 2)) / 2.
inline double norm_cdf(double x) {
    const double y = x / std::numbers::sqrt2;
    return 0.5 * erfc(-y);
}

/// Exponential integral E1(z) = int_z^inf e^-t / t dt for z > 0.
///
/// Power series below z = 1, Lentz continued fraction above.
inline double exp_integral_e1(double z) {
    if (!(z > 0.0)) throw domain_error("exp_integral_e1: z must be > 0");
    if (std::isinf(z)) return 0.0;
    if (z <= 1.0) {
        double sum = 0.0;
        double power = 1.0;  // (-1)^(k+1) z^k / k!
        for (int k = 1; k < 200; ++k) {
            power *= (k == 1 ? z : -z / k);
            const double term = power / k;
            sum += term;
            if (std::abs(term) < 1e-18 * std::abs(sum)) break;
        }
        return -std::numbers::egamma - std::log(z) + sum;
    }
    constexpr double tiny = 1e-300;
    double b = z + 1.0;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < 10000; ++i) {
        const double an = -static_cast<double>(i) * i;
        b += 2.0;
        d = 1.0 / (an * d + b);
        c = b + an / c;
        const double del = c * d;
        h *= del;
        if (std::abs(del - 1.0) < 1e-16) break;
    }
    return h * std::exp(-z);
}

/// Closed or (semi-)infinite interval; infinities are allowed as endpoints.
struct Interval {
    double lo = 0.0;
    double hi = 1.0;
};

struct QuadratureSpec {
    double abs_tol = 1e-10;
    double rel_tol = 0.0;
    int max_subdivisions = 4000;
    Interval domain{};
};

namespace detail {

inline constexpr std::array<double, 8> gk_nodes{
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> gk_weights{
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> gauss_weights{
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
    double a, b, value, error;
    bool operator<(const Segment& o) const { return error < o.error; }
};

template <class F>
Segment gauss_kronrod_15(F& f, double a, double b) {
    const double centre = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    const double fc = f(centre);
    double kronrod = fc * gk_weights[7];
    double gauss = fc * gauss_weights[3];
    for (int j = 0; j < 7; ++j) {
        const double dx = half * gk_nodes[j];
        const double s = f(centre - dx) + f(centre + dx);
        kronrod += gk_weights[j] * s;
        if (j % 2 == 1) gauss += gauss_weights[j / 2] * s;
    }
    return {a, b, kronrod * half, std::abs((kronrod - gauss) * half)};
}

// Globally adaptive bisection on a finite interval.
template <class F>
double adaptive(F& f, double a, double b, double abs_tol, double rel_tol, int max_sub) {
    std::priority_queue<Segment> heap;
    Segment first = gauss_kronrod_15(f, a, b);
    double total = first.value;
    double error = first.error;
    heap.push(first);
    int subdivisions = 1;
    while (error > std::max(abs_tol, rel_tol * std::abs(total))) {
        if (subdivisions >= max_sub) {
            throw non_convergence("integrate: subdivision limit exceeded", total, error);
        }
        Segment worst = heap.top();
        heap.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        Segment left = gauss_kronrod_15(f, worst.a, mid);
        Segment right = gauss_kronrod_15(f, mid, worst.b);
        total += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
        ++subdivisions;
        // Re-sum occasionally so incremental round-off does not accumulate.
        if (subdivisions % 64 == 0) {
            auto copy = heap;
            total = 0.0;
            error = 0.0;
            while (!copy.empty()) {
                total += copy.top().value;
                error += copy.top().error;
                copy.pop();
            }
        }
    }
    return total;
}

}  // namespace detail

/// Adaptive Gauss-Kronrod (7/15) integration.
///
/// Semi-infinite ends are mapped onto [0, 1) by x = a + t / (1 - t); a doubly
/// infinite domain is split at the origin. Throws non_convergence carrying the
/// best estimate when the subdivision budget runs out.
template <class F>
double integrate(F&& f, const QuadratureSpec& spec) {
    if (!(spec.abs_tol > 0.0) && !(spec.rel_tol > 0.0)) {
        throw usage_error("integrate: tolerance must be positive");
    }
    if (spec.max_subdivisions < 1) throw usage_error("integrate: max_subdivisions must be >= 1");
    const double lo = spec.domain.lo;
    const double hi = spec.domain.hi;
    if (std::isnan(lo) || std::isnan(hi) || lo > hi) {
        throw usage_error("integrate: interval endpoints must be ordered");
    }
    if (lo == hi) return 0.0;

    const bool lo_inf = std::isinf(lo);
    const bool hi_inf = std::isinf(hi);
    if (!lo_inf && !hi_inf) {
        auto g = [&](double x) { return f(x); };
        return detail::adaptive(g, lo, hi, spec.abs_tol, spec.rel_tol, spec.max_subdivisions);
    }
    if (lo_inf && hi_inf) {
        QuadratureSpec half = spec;
        half.abs_tol = 0.5 * spec.abs_tol;
        half.domain = {-std::numeric_limits<double>::infinity(), 0.0};
        const double left = integrate(f, half);
        half.domain = {0.0, std::numeric_limits<double>::infinity()};
        return left + integrate(f, half);
    }
    if (hi_inf) {
        auto g = [&](double t) {
            const double s = 1.0 - t;
            return f(lo + t / s) / (s * s);
        };
        return detail::adaptive(g, 0.0, 1.0, spec.abs_tol, spec.rel_tol, spec.max_subdivisions);
    }
    auto g = [&](double t) {
        const double s = 1.0 - t;
        return f(hi - t / s) / (s * s);
    };
    return detail::adaptive(g, 0.0, 1.0, spec.abs_tol, spec.rel_tol, spec.max_subdivisions);
}

/// Ceiling that snaps values within a relative 1e-12 of an integer onto it,
/// so boundary cases such as ceil(1.1 * 10) come out as 11.
inline long long snapped_ceil(long double value) {
    const long double nearest = std::round(value);
    if (std::abs(value - nearest) <= 1e-12L * std::max<long double>(1.0L, std::abs(nearest))) {
        return static_cast<long long>(nearest);
    }
    return static_cast<long long>(std::ceil(value));
}

}  // namespace qnnlab::numerics
