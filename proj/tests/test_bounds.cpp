#include <gtest/gtest.h>

#include <cmath>
#include <complex>
#include <numbers>

#include "qnnlab/bounds.hpp"
#include "qnnlab/rng.hpp"

using namespace qnnlab;
using namespace qnnlab::bounds;
using std::numbers::pi;

namespace {

// int_lo^hi w(x) e^{-2 i pi x xi} dx by quadrature of real and imaginary parts.
template <class W>
complex transform_by_quadrature(W w, double lo, double hi, double xi) {
    numerics::QuadratureSpec spec;
    spec.abs_tol = 1e-13;
    spec.domain = {lo, hi};
    const double re = numerics::integrate([&](double x) { return w(x) * std::cos(2 * pi * x * xi); }, spec);
    const double im = numerics::integrate([&](double x) { return -w(x) * std::sin(2 * pi * x * xi); }, spec);
    return {re, im};
}

}  // namespace

TEST(GaussianL1, ClosedFormAndQuadrature) {
    EXPECT_NEAR(gaussian_fourier_l1(1.0), 0.3989422804014327, 1e-15);
    EXPECT_NEAR(gaussian_fourier_l1(2.0), 0.5 * gaussian_fourier_l1(1.0), 1e-16);
    for (double s : {0.5, 1.0, 2.0}) EXPECT_NEAR(gaussian_fourier_l1(s) * s * std::sqrt(2 * pi), 1.0, 1e-15);
    numerics::QuadratureSpec spec;
    spec.domain = {-std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
    const double q = numerics::integrate([](double xi) { return std::exp(-2 * pi * pi * xi * xi); }, spec);
    EXPECT_NEAR(q, gaussian_fourier_l1(1.0), 1e-10);
    EXPECT_THROW(gaussian_fourier_l1(0.0), domain_error);
}

TEST(BachelierFt, LimitAtZero) {
    EXPECT_NEAR(std::abs(bachelier_put_ft(0.0, 1.0) - complex(0.5, 0.0)), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(bachelier_put_ft(0.0, 2.0) - complex(2.0, 0.0)), 0.0, 1e-15);
    // Continuity across the series/closed-form switch.
    const double u_switch = 0.25 / (2 * pi);
    EXPECT_NEAR(std::abs(bachelier_put_ft(u_switch * 0.9999, 1.0) - bachelier_put_ft(u_switch * 1.0001, 1.0)), 0.0,
                1e-5);
}

TEST(BachelierFt, DecayEnvelope) {
    for (double xi : {0.5, 1.0, 10.0}) EXPECT_LE(std::abs(bachelier_put_ft(xi, 1.0)), 1.0 / (pi * xi));
}

TEST(BachelierFt, MatchesQuadrature) {
    const auto q = transform_by_quadrature([](double x) { return 1.0 - x; }, 0.0, 1.0, 0.37);
    EXPECT_NEAR(std::abs(q - bachelier_put_ft(0.37, 1.0)), 0.0, 1e-8);
    Rng rng(3);
    for (int i = 0; i < 20; ++i) {
        const double xi = rng.uniform(-5.0, 5.0);
        const double k = rng.uniform(0.5, 2.0);
        const auto qi = transform_by_quadrature([k](double x) { return k - x; }, 0.0, k, xi);
        EXPECT_NEAR(std::abs(qi - bachelier_put_ft(xi, k)), 0.0, 1e-8) << xi;
    }
}

TEST(BachelierBound, FormulaValueAtOptimum) {
    // The formula evaluates to about 1.987 at a = pi/2.
    const auto b = bachelier_put_bound(1.0, 0.2, 1.0, pi / 2);
    EXPECT_NEAR(b.value, 1.987, 2e-3);
    EXPECT_NEAR(b.value, b.erf_term + b.e1_term, 1e-15);
    EXPECT_NEAR(*b.optimal_split, pi / 2, 1e-15);
}

TEST(BachelierBound, MinimumBracketed) {
    auto val = [](double a) { return bachelier_put_bound(1.0, 0.2, 1.0, a).value; };
    const double h = 1e-5;
    EXPECT_LT((val(pi / 4 + h) - val(pi / 4 - h)) / (2 * h), 0.0);
    EXPECT_GT((val(pi + h) - val(pi - h)) / (2 * h), 0.0);
}

TEST(BachelierBound, DominatesDampedTransformL1) {
    const double oracle =
        damped_transform_l1([](double xi) { return bachelier_put_ft(xi, 1.0); }, 0.2, 1.0);
    for (double a : {0.05, 0.3, pi / 2, 3.0, 20.0}) EXPECT_GE(bachelier_put_bound(1.0, 0.2, 1.0, a).value, oracle) << a;
}

TEST(BachelierBound, RejectsNonPositive) {
    EXPECT_THROW(bachelier_put_bound(0.0, 0.2, 1.0, 1.0), domain_error);
    EXPECT_THROW(bachelier_put_bound(1.0, -0.2, 1.0, 1.0), domain_error);
    EXPECT_THROW(bachelier_put_bound(1.0, 0.2, 0.0, 1.0), domain_error);
    EXPECT_THROW(bachelier_put_bound(1.0, 0.2, 1.0, 0.0), domain_error);
}

TEST(TruncatedPut, PublishedConstants) {
    const double a_star = bs_truncated_optimal_split(1.0, 0.4);
    EXPECT_NEAR(a_star, 0.584, 2e-3);
    const auto b = bs_truncated_put_bound(1.0, 0.4, 0.2, 1.0, a_star);
    EXPECT_NEAR(b.value, 2.316, 1e-2);
    EXPECT_NEAR(b.value, b.erf_term + b.e1_term, 1e-15);
    EXPECT_LE(b.value, bs_truncated_put_bound(1.0, 0.4, 0.2, 1.0, 0.9 * a_star).value);
    EXPECT_LE(b.value, bs_truncated_put_bound(1.0, 0.4, 0.2, 1.0, 1.1 * a_star).value);
}

TEST(TruncatedPut, FtAtZeroIsL1Norm) {
    const double l1 = truncated_put_l1(1.0, 0.4);
    EXPECT_NEAR(l1, std::log(2.5) - 0.6, 1e-15);
    EXPECT_NEAR(std::abs(bs_truncated_put_ft(0.0, 1.0, 0.4) - complex(l1, 0.0)), 0.0, 1e-14);
}

TEST(TruncatedPut, DecayEnvelope) {
    for (double xi : {0.5, 2.0, 10.0}) {
        EXPECT_LE(std::abs(bs_truncated_put_ft(xi, 1.0, 0.4)), (3.0 + 0.4) / (2 * pi * xi));
    }
}

TEST(TruncatedPut, FtMatchesQuadrature) {
    auto payoff = [](double k) { return [k](double x) { return k - std::exp(x); }; };
    const auto q = transform_by_quadrature(payoff(1.0), std::log(0.4), 0.0, 0.81);
    EXPECT_NEAR(std::abs(q - bs_truncated_put_ft(0.81, 1.0, 0.4)), 0.0, 1e-8);
    Rng rng(11);
    for (int i = 0; i < 20; ++i) {
        const double xi = rng.uniform(-6.0, 6.0);
        const double k = rng.uniform(0.6, 1.6);
        const double kl = k * rng.uniform(0.2, 0.8);
        const auto qi = transform_by_quadrature(payoff(k), std::log(kl), std::log(k), xi);
        EXPECT_NEAR(std::abs(qi - bs_truncated_put_ft(xi, k, kl)), 0.0, 1e-8) << xi;
    }
}

TEST(TruncatedPut, OrderingError) {
    EXPECT_THROW(bs_truncated_put_bound(1.0, 1.0, 0.2, 1.0, 0.5), domain_error);
    EXPECT_THROW(bs_truncated_put_ft(0.3, 1.0, 1.5), domain_error);
}

TEST(OracleDominance, RandomDraws) {
    Rng rng(2024);
    for (int i = 0; i < 50; ++i) {
        const double k = rng.uniform(0.5, 2.0);
        const double sigma = rng.uniform(0.1, 0.5);
        const double t = rng.uniform(0.25, 2.0);
        const double a = std::exp(rng.uniform(std::log(0.05), std::log(5.0)));
        if (i % 2 == 0) {
            const double oracle = damped_transform_l1([k](double xi) { return bachelier_put_ft(xi, k); }, sigma, t);
            EXPECT_GE(bachelier_put_bound(k, sigma, t, a).value, oracle - 1e-6);
        } else {
            const double kl = k * rng.uniform(0.2, 0.8);
            const double oracle =
                damped_transform_l1([k, kl](double xi) { return bs_truncated_put_ft(xi, k, kl); }, sigma, t);
            EXPECT_GE(bs_truncated_put_bound(k, kl, sigma, t, a).value, oracle - 1e-6);
        }
    }
}

TEST(OracleDominance, OptimalSplitIsLocalMinimum) {
    auto val = [](double a) { return bs_truncated_put_bound(1.0, 0.4, 0.2, 1.0, a).value; };
    const double a = bs_truncated_optimal_split(1.0, 0.4);
    const double h = 1e-4;
    EXPECT_LT(val(a - h) - val(a - 2 * h), 0.0);
    EXPECT_GT(val(a + 2 * h) - val(a + h), 0.0);
    EXPECT_GT(val(a + h) - 2 * val(a) + val(a - h), 0.0);
}

TEST(TruncationError, Values) {
    const double e = bs_truncation_error(0.0, 1.0, 0.4, 0.2, 1.0);
    EXPECT_GE(e, 2e-6);
    EXPECT_LE(e, 6e-6);
    EXPECT_NEAR(e, numerics::norm_cdf(-4.4815), 1e-8);
    EXPECT_LT(bs_truncation_error(0.0, 1.0, 1e-12, 0.2, 1.0), 1e-300 + 1e-200);
    const double x = std::log(0.4) + 0.02;
    EXPECT_NEAR(bs_truncation_error(x, 1.0, 0.4, 0.2, 1.0), 0.5, 1e-15);
    EXPECT_LT(bs_truncation_error(0.0, 1.0, 0.3, 0.2, 1.0), e);
    EXPECT_GT(bs_truncation_error(-0.1, 1.0, 0.4, 0.2, 1.0), e);
}

TEST(LevyBound, Values) {
    const double sigma = 0.2;
    EXPECT_NEAR(levy_generic_bound(0.5, sigma * sigma / 2, 1.0, 1), std::sqrt(pi) / sigma, 1e-12);
    EXPECT_NEAR(levy_generic_bound(0.5, sigma * sigma / 2, 1.0, 1), 8.8623, 1e-4);
    EXPECT_NEAR(levy_generic_bound(1.0, 1.0, 2 * pi, 1), 1.0, 1e-15);
    for (int d : {1, 2, 3}) {
        EXPECT_NEAR(levy_generic_bound(1.0, 0.3, 2.0, d) / levy_generic_bound(1.0, 0.3, 1.0, d), std::pow(2.0, -0.5 * d),
                    1e-14);
    }
    EXPECT_THROW(levy_generic_bound(1.0, 0.0, 1.0, 1), domain_error);
    EXPECT_THROW(levy_generic_bound(1.0, 1.0, -1.0, 1), domain_error);
}

TEST(Budgets, MinBlocks) {
    EXPECT_EQ(min_blocks(1.0, 0.1), 16);
    EXPECT_EQ(min_blocks(1.0, 1.0 / std::sqrt(2 * pi)), 1);
    const auto n1 = min_blocks(0.7, 0.05);
    const auto n2 = min_blocks(0.7, 0.025);
    EXPECT_LE(std::abs(n2 - 4 * n1), 4);
}

TEST(Budgets, MinQubits) {
    EXPECT_EQ(min_qubits(1.0, 0.1), 6);
    EXPECT_EQ(min_qubits(1.0, std::sqrt(2.0) / std::sqrt(pi)), 1);
    for (double eps : {0.3, 0.1, 0.05, 0.01}) {
        const auto n = min_blocks(1.0, eps);
        const int q = min_qubits(1.0, eps);
        EXPECT_LE(4 * n, 2LL << q) << eps;  // within one ceiling step of 2^q
    }
}
