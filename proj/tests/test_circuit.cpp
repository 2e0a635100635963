#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "qnnlab/circuit.hpp"
#include "qnnlab/rng.hpp"

using namespace qnnlab;
using namespace qnnlab::circuit;
using std::numbers::pi;

namespace {

QnnParams random_params(Rng& rng, int n, int d, double scale = 1.0) {
    std::vector<double> a(static_cast<std::size_t>(n) * d), b(n), g(n);
    for (auto& v : a) v = scale * rng.uniform(-pi, pi);
    for (auto& v : b) v = scale * rng.uniform(-pi, pi);
    for (auto& v : g) v = scale * rng.uniform(-pi, pi);
    return QnnParams(d, a, b, g);
}

std::vector<double> random_x(Rng& rng, int d) {
    std::vector<double> x(d);
    for (auto& v : x) v = rng.uniform(0.0, 1.0);
    return x;
}

}  // namespace

TEST(Config, QubitCount) {
    EXPECT_EQ((CircuitConfig{1, 0, 1.0}).qubits(), 2);
    EXPECT_EQ((CircuitConfig{8, 0, 1.0}).qubits(), 5);
    EXPECT_EQ((CircuitConfig{3, 0, 1.0}).qubits(), 4);
    EXPECT_EQ((CircuitConfig{8, 1, 1.0}).qubits(), 6);
    EXPECT_THROW((CircuitConfig{0, 0, 1.0}).validate(), usage_error);
    EXPECT_THROW((CircuitConfig{1, 0, 0.0}).validate(), usage_error);
}

TEST(Params, ValidationAndPacking) {
    EXPECT_THROW(QnnParams(1, {1.0}, {1.0, 2.0}, {0.0, 0.0}), usage_error);
    EXPECT_THROW(QnnParams(1, {NAN}, {1.0}, {0.0}), usage_error);
    Rng rng(1);
    const auto p = random_params(rng, 3, 2);
    const auto q = QnnParams::unpack(p.pack(), 3, 2);
    EXPECT_EQ(p.frequencies(), q.frequencies());
    EXPECT_EQ(p.phases(), q.phases());
    EXPECT_EQ(p.angles(), q.angles());
}

TEST(InitialState, Amplitudes) {
    const auto s1 = initial_state({1, 0, 1.0});
    ASSERT_EQ(s1.size(), 4u);
    EXPECT_EQ(s1.amplitudes[0], complex(1.0, 0.0));
    const auto s8 = initial_state({8, 0, 1.0});
    ASSERT_EQ(s8.size(), 32u);
    for (std::size_t i = 0; i < 32; ++i) {
        EXPECT_NEAR(std::abs(s8.amplitudes[i]), i % 4 == 0 ? 1.0 / std::sqrt(8.0) : 0.0, 1e-15);
    }
}

TEST(InitialState, EqualsHadamardProduct) {
    for (int n : {1, 2, 4, 8}) {
        const CircuitConfig cfg{n, 0, 1.0};
        const Matrix v = hadamard_preparation_matrix(cfg);
        const Eigen::VectorXcd col = v.col(0);
        const auto s = initial_state(cfg).to_eigen();
        EXPECT_NEAR((col - s).norm(), 0.0, 1e-14) << n;
    }
}

TEST(BlockUnitary, Conventions) {
    EXPECT_NEAR((Matrix(block_unitary(0.0, 0.0)) - Matrix::Identity(4, 4)).norm(), 0.0, 1e-15);
    const Matrix u = block_unitary(pi, 0.0);
    // RY(pi) on bit 1: |00> -> |10>, i.e. index 0 -> index 2.
    EXPECT_NEAR(std::abs(u(2, 0)), 1.0, 1e-15);
    Rng rng(2);
    for (int i = 0; i < 10; ++i) {
        const Matrix w = block_unitary(rng.uniform(-5, 5), rng.uniform(-5, 5));
        EXPECT_NEAR((w.adjoint() * w - Matrix::Identity(4, 4)).norm(), 0.0, 1e-12);
    }
}

TEST(ParameterisedUnitary, IdentityAndSingleBlock) {
    const CircuitConfig cfg{3, 0, 1.0};
    const auto zero = QnnParams::zeros(3, 2);
    const std::vector<double> x{0.3, 0.7};
    const auto s = initial_state(cfg);
    const auto t = apply_parameterised_unitary(zero, x, s, cfg);
    for (std::size_t i = 0; i < s.size(); ++i) EXPECT_NEAR(std::abs(s.amplitudes[i] - t.amplitudes[i]), 0.0, 1e-15);

    Rng rng(3);
    const CircuitConfig one{1, 0, 1.0};
    const auto p = random_params(rng, 1, 2);
    const auto out = final_state(p, x, one);
    const Matrix4 u = block_unitary(p, 0, x);
    for (int i = 0; i < 4; ++i) EXPECT_NEAR(std::abs(out.amplitudes[i] - u(i, 0)), 0.0, 1e-15);
    EXPECT_THROW(apply_parameterised_unitary(p, x, initial_state(cfg), one), usage_error);
}

TEST(ParameterisedUnitary, GroupedIsBlockAverage) {
    Rng rng(4);
    const CircuitConfig cfg{5, 0, 1.0};
    const auto p = random_params(rng, 5, 1);
    const std::vector<double> x{0.4};
    const auto g = grouped_probabilities(final_state(p, x, cfg), cfg);
    std::array<double, 4> avg{};
    for (int k = 0; k < 5; ++k) {
        const Matrix4 u = block_unitary(p, k, x);
        for (int m = 0; m < 4; ++m) avg[m] += std::norm(u(m, 0)) / 5.0;
    }
    for (int m = 0; m < 4; ++m) EXPECT_NEAR(g.p[m], avg[m], 1e-14);
    // Padding (3 unused control values) carries no mass.
    EXPECT_NEAR(g.discarded, 0.0, 1e-15);
}

TEST(ParameterisedUnitary, UnitaryMatrixUpToSixQubits) {
    Rng rng(5);
    for (int n : {1, 3, 8, 16}) {
        const CircuitConfig cfg{n, 0, 1.0};
        const auto p = random_params(rng, n, 2);
        const Matrix u = parameterised_unitary_matrix(p, random_x(rng, 2), cfg);
        EXPECT_NEAR((u.adjoint() * u - Matrix::Identity(u.rows(), u.cols())).cwiseAbs().maxCoeff(), 0.0, 1e-10);
    }
}

TEST(ParameterisedUnitary, NormAndPaddingInertness) {
    Rng rng(6);
    const CircuitConfig cfg{5, 3, 1.0};
    const auto p = random_params(rng, 5, 3);
    const auto s = final_state(p, random_x(rng, 3), cfg);
    EXPECT_NEAR(s.norm_squared(), 1.0, 1e-12);
    for (std::size_t i = 20; i < s.size(); ++i) EXPECT_EQ(s.amplitudes[i], complex(0.0, 0.0));
}

TEST(Grouping, BasicCases) {
    const CircuitConfig cfg{8, 0, 1.0};
    const auto g0 = grouped_probabilities(initial_state(cfg), cfg);
    EXPECT_NEAR(g0.p[0], 1.0, 1e-15);
    std::vector<double> uniform(32, 1.0 / 32);
    const auto gu = grouped_probabilities(std::span<const double>(uniform), cfg);
    for (int m = 0; m < 4; ++m) EXPECT_NEAR(gu.p[m], 0.25, 1e-15);
    EXPECT_EQ(gu.discarded, 0.0);
    for (int m = 0; m < 4; ++m) EXPECT_NEAR(outcome_projector(m, cfg).trace().real(), 8.0, 0.0);
    const CircuitConfig padded{5, 0, 1.0};
    for (int m = 0; m < 4; ++m) EXPECT_NEAR(outcome_projector(m, padded).trace().real(), 5.0, 0.0);
}

TEST(Output, CircuitOutputCases) {
    GroupedProbs p;
    p.p = {1.0, 0.0, 0.0, 0.0};
    EXPECT_EQ(circuit_output(p, 2.0), 2.0);
    p.p = {0.25, 0.25, 0.25, 0.25};
    EXPECT_EQ(circuit_output(p, 2.0), 0.0);
    p.p = {0.0, 0.5, 0.5, 0.0};
    EXPECT_EQ(circuit_output(p, 2.0), -2.0);
}

TEST(Output, AnalyticCases) {
    EXPECT_EQ(analytic_output(QnnParams::zeros(4, 2), std::vector<double>{0.1, 0.2}, 3.0), 3.0);
    const QnnParams q(1, {1.0}, {pi / 2 - 0.5}, {0.0});
    EXPECT_NEAR(analytic_output(q, std::vector<double>{0.5}, 1.0), 0.0, 1e-15);
    const QnnParams two(1, {0.0, 0.0}, {0.0, pi}, {0.0, 0.0});
    EXPECT_NEAR(evaluate(two, std::vector<double>{0.3}, {2, 0, 1.0}, EvalMode::exact), 0.0, 1e-15);
}

TEST(Output, ExactMatchesAnalytic) {
    Rng rng(8);
    for (int n : {1, 2, 3, 8}) {
        for (int d : {1, 5}) {
            const CircuitConfig cfg{n, 0, 1.7};
            for (int t = 0; t < 25; ++t) {
                const auto p = random_params(rng, n, d);
                const auto x = random_x(rng, d);
                const double ex = evaluate(p, x, cfg, EvalMode::exact);
                const double an = evaluate(p, x, cfg, EvalMode::analytic);
                EXPECT_NEAR(ex, an, 1e-10);
                EXPECT_LE(std::abs(ex), cfg.scale + 1e-12);
            }
        }
    }
}
