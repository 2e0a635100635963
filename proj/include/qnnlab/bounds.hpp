#pragma once

// Fourier L1 bounds for expectation functions and the block/qubit budgets
// that follow from them.

#include <cmath>
#include <complex>
#include <numbers>
#include <optional>
#include <string>

#include "qnnlab/errors.hpp"
#include "qnnlab/numerics.hpp"

namespace qnnlab::bounds {

using complex = std::complex<double>;

/// A Fourier constant B, optionally obtained by splitting the frequency
/// integral at |xi| = 1/a into a low-frequency (erf) and a tail (E1) part.
struct FourierBound {
    double value = 0.0;
    double erf_term = 0.0;
    double e1_term = 0.0;
    std::optional<double> split;          // a at which the bound was evaluated
    std::optional<double> optimal_split;  // minimiser of B(a)
};

namespace detail {

inline void require_positive(double v, const char* what) {
    if (!(v > 0.0) || !std::isfinite(v)) {
        throw domain_error(std::string(what) + " must be finite and > 0");
    }
}

// (1 - i u - e^{-i u}) / u^2, with its Taylor series near u = 0.
inline complex second_order_remainder(double u) {
    const complex iu(0.0, u);
    if (std::abs(u) < 0.25) {
        // -sum_{k>=2} (-iu)^k / k! / u^2
        complex sum = 0.0;
        complex p(-1.0, 0.0);  // (-i)^k u^(k-2), starting at k = 2
        double fact = 2.0;
        for (int k = 2; k < 30; ++k) {
            sum -= p / fact;
            p *= complex(0.0, -u);
            fact *= (k + 1);
        }
        return sum;
    }
    return (1.0 - iu - std::exp(-iu)) / (u * u);
}

// (e^{z} - 1) / z for complex z, series near zero.
inline complex expm1_ratio(complex z) {
    if (std::abs(z) < 0.1) {
        complex sum = 1.0;
        complex term = 1.0;
        for (int k = 2; k < 25; ++k) {
            term *= z / static_cast<double>(k);
            sum += term;
        }
        return sum;
    }
    return (std::exp(z) - 1.0) / z;
}

}  // namespace detail

/// L1 norm of the Fourier transform of the N(0, sigma^2) density: 1/(sigma sqrt(2 pi)).
inline double gaussian_fourier_l1(double sigma) {
    detail::require_positive(sigma, "sigma");
    return 1.0 / (sigma * std::sqrt(2.0 * std::numbers::pi));
}

/// Fourier transform of the put payoff (K - x)^+ 1{x >= 0}:
/// K / (2 i pi xi) + (1 - e^{-2 i pi K xi}) / (2 pi xi)^2, equal to K^2/2 at 0.
inline complex bachelier_put_ft(double xi, double strike) {
    detail::require_positive(strike, "K");
    const double u = 2.0 * std::numbers::pi * strike * xi;
    return strike * strike * detail::second_order_remainder(u);
}

/// Minimiser of the Bachelier split bound, K pi / 2.
inline double bachelier_optimal_split(double strike) {
    detail::require_positive(strike, "K");
    return strike * std::numbers::pi / 2.0;
}

/// B(a) = K^2 sqrt(pi)/(sigma sqrt(2T)) erf(sigma sqrt(T)/(a sqrt 2)) + (K/pi) E1(sigma^2 T/(2a^2)).
inline FourierBound bachelier_put_bound(double strike, double sigma, double maturity, double split) {
    detail::require_positive(strike, "K");
    detail::require_positive(sigma, "sigma");
    detail::require_positive(maturity, "T");
    detail::require_positive(split, "a");
    const double sqrt_t = std::sqrt(maturity);
    FourierBound b;
    b.erf_term = strike * strike * std::sqrt(std::numbers::pi) / (sigma * std::sqrt(2.0 * maturity)) *
                 numerics::erf(sigma * sqrt_t / (split * std::numbers::sqrt2));
    b.e1_term = strike / std::numbers::pi *
                numerics::exp_integral_e1(sigma * sigma * maturity / (2.0 * split * split));
    b.value = b.erf_term + b.e1_term;
    b.split = split;
    b.optimal_split = bachelier_optimal_split(strike);
    return b;
}

/// ||Phi o exp||_L1 for the truncated put: K(log K - log K_low) - (K - K_low).
inline double truncated_put_l1(double strike, double strike_low) {
    detail::require_positive(strike, "K");
    detail::require_positive(strike_low, "K_low");
    if (!(strike_low < strike)) throw domain_error("K_low must be < K");
    return strike * (std::log(strike) - std::log(strike_low)) - (strike - strike_low);
}

/// Fourier transform of Phi1(x) = (K - e^x) 1{log K_low <= x <= log K}:
/// int_{k_low}^{k} (K - e^x) e^{-2 i pi x xi} dx.
inline complex bs_truncated_put_ft(double xi, double strike, double strike_low) {
    detail::require_positive(strike, "K");
    detail::require_positive(strike_low, "K_low");
    if (!(strike_low < strike)) throw domain_error("K_low must be < K");
    const double k = std::log(strike);
    const double k_low = std::log(strike_low);
    const double w = 2.0 * std::numbers::pi * xi;
    const complex a(0.0, -w);  // -2 i pi xi
    // int e^{a x} over [k_low, k] = e^{a k_low} (k - k_low) (e^{a (k - k_low)} - 1) / (a (k - k_low))
    const double width = k - k_low;
    const complex oscill = std::exp(a * k_low) * width * detail::expm1_ratio(a * width);
    const complex b = 1.0 + a;
    const complex growth = (std::exp(b * k) - std::exp(b * k_low)) / b;
    return strike * oscill - growth;
}

/// a* = 2 pi [K(log K - log K_low) - (K - K_low)] / (3K + K_low).
inline double bs_truncated_optimal_split(double strike, double strike_low) {
    return 2.0 * std::numbers::pi * truncated_put_l1(strike, strike_low) / (3.0 * strike + strike_low);
}

/// B(a) = 2 L sqrt(pi)/(sigma sqrt(2T)) erf(sigma sqrt(T)/(a sqrt 2))
///        + (3K + K_low)/(2 pi) E1(sigma^2 T/(2 a^2)),  L = truncated_put_l1.
inline FourierBound bs_truncated_put_bound(double strike, double strike_low, double sigma,
                                           double maturity, double split) {
    const double l1 = truncated_put_l1(strike, strike_low);
    detail::require_positive(sigma, "sigma");
    detail::require_positive(maturity, "T");
    detail::require_positive(split, "a");
    const double sqrt_t = std::sqrt(maturity);
    FourierBound b;
    b.erf_term = 2.0 * l1 * std::sqrt(std::numbers::pi) / (sigma * std::sqrt(2.0 * maturity)) *
                 numerics::erf(sigma * sqrt_t / (split * std::numbers::sqrt2));
    b.e1_term = (3.0 * strike + strike_low) / (2.0 * std::numbers::pi) *
                numerics::exp_integral_e1(sigma * sigma * maturity / (2.0 * split * split));
    b.value = b.erf_term + b.e1_term;
    b.split = split;
    b.optimal_split = bs_truncated_optimal_split(strike, strike_low);
    return b;
}

/// Pointwise cost of truncating the put below K_low: K Phi((log K_low - x + sigma^2 T/2)/(sigma sqrt T)).
inline double bs_truncation_error(double log_spot, double strike, double strike_low, double sigma,
                                  double maturity) {
    detail::require_positive(strike, "K");
    detail::require_positive(strike_low, "K_low");
    if (!(strike_low < strike)) throw domain_error("K_low must be < K");
    detail::require_positive(sigma, "sigma");
    detail::require_positive(maturity, "T");
    const double vol = sigma * std::sqrt(maturity);
    return strike * numerics::norm_cdf((std::log(strike_low) - log_spot + 0.5 * vol * vol) / vol);
}

/// Levy-model bound ||Phi o exp||_L1 (2 pi / (C T))^{d/2} under a non-degenerate diffusion.
inline double levy_generic_bound(double payoff_l1, double ellipticity, double maturity, int dim) {
    if (!(payoff_l1 >= 0.0)) throw domain_error("payoff L1 norm must be >= 0");
    detail::require_positive(ellipticity, "C");
    detail::require_positive(maturity, "T");
    if (dim < 1) throw domain_error("dimension must be >= 1");
    return payoff_l1 * std::pow(2.0 * std::numbers::pi / (ellipticity * maturity), 0.5 * dim);
}

/// int_R |Phi1_hat(xi)| exp(-sigma^2 T xi^2 / 2) dxi by quadrature; the
/// quantity every split bound B(a) dominates.
template <class Transform>
double damped_transform_l1(Transform&& transform, double sigma, double maturity,
                           double abs_tol = 1e-10) {
    detail::require_positive(sigma, "sigma");
    detail::require_positive(maturity, "T");
    const double c = 0.5 * sigma * sigma * maturity;
    numerics::QuadratureSpec spec;
    spec.abs_tol = abs_tol;
    spec.max_subdivisions = 20000;
    // Integrand is even in xi (real payoffs have Hermitian transforms).
    // Integrate on a finite range where the Gaussian damping has decayed.
    const double cutoff = std::sqrt(40.0 / c);
    spec.domain = {0.0, cutoff};
    return 2.0 * numerics::integrate(
                     [&](double xi) { return std::abs(transform(xi)) * std::exp(-c * xi * xi); }, spec);
}

/// Smallest n with n >= 1 / (2 pi sigma^2 eps^2).
inline long long min_blocks(double sigma, double eps) {
    detail::require_positive(sigma, "sigma");
    detail::require_positive(eps, "eps");
    const long double s = sigma;
    const long double e = eps;
    const long double target = 1.0L / (2.0L * std::numbers::pi_v<long double> * s * s * e * e);
    return std::max<long long>(1, numerics::snapped_ceil(target));
}

/// Smallest qubit count q >= 1 with q >= log2(2 / (pi sigma^2 eps^2)).
inline int min_qubits(double sigma, double eps) {
    detail::require_positive(sigma, "sigma");
    detail::require_positive(eps, "eps");
    const long double s = sigma;
    const long double e = eps;
    const long double arg = 2.0L / (std::numbers::pi_v<long double> * s * s * e * e);
    return static_cast<int>(std::max<long long>(1, numerics::snapped_ceil(std::log2(arg))));
}

}  // namespace qnnlab::bounds
