#pragma once

// Statevector simulation of the block-diagonal QNN.
//
// Basis index o = 4k + m: the two least significant bits hold the target
// qubits (m), the remaining high bits the control register (k). Inside a
// block, bit 1 carries the input rotation RY(b + a.x) and bit 0 carries the
// amplitude rotation RY(gamma).

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qnnlab/errors.hpp"

namespace qnnlab::circuit {

using complex = std::complex<double>;
using Matrix4 = Eigen::Matrix4cd;
using Matrix = Eigen::MatrixXcd;

/// Trainable parameters: frequencies a_k in R^d, phases b_k, amplitude angles gamma_k.
class QnnParams {
public:
    QnnParams() = default;

    QnnParams(int dim, std::vector<double> frequencies, std::vector<double> phases,
              std::vector<double> angles)
        : dim_(dim), freq_(std::move(frequencies)), phase_(std::move(phases)), angle_(std::move(angles)) {
        validate();
    }

    /// All-zero parameters for n blocks of input dimension d.
    static QnnParams zeros(int blocks, int dim) {
        if (blocks < 1 || dim < 1) throw usage_error("QnnParams: blocks and dim must be >= 1");
        return QnnParams(dim, std::vector<double>(static_cast<std::size_t>(blocks * dim), 0.0),
                         std::vector<double>(blocks, 0.0), std::vector<double>(blocks, 0.0));
    }

    int blocks() const { return static_cast<int>(phase_.size()); }
    int dim() const { return dim_; }

    std::span<const double> frequency(int k) const {
        return {freq_.data() + static_cast<std::size_t>(k) * dim_, static_cast<std::size_t>(dim_)};
    }
    std::span<double> frequency(int k) {
        return {freq_.data() + static_cast<std::size_t>(k) * dim_, static_cast<std::size_t>(dim_)};
    }
    double phase(int k) const { return phase_[k]; }
    double& phase(int k) { return phase_[k]; }
    double angle(int k) const { return angle_[k]; }
    double& angle(int k) { return angle_[k]; }

    const std::vector<double>& frequencies() const { return freq_; }
    const std::vector<double>& phases() const { return phase_; }
    const std::vector<double>& angles() const { return angle_; }

    /// b_k + a_k . x
    double input_angle(int k, std::span<const double> x) const {
        if (static_cast<int>(x.size()) != dim_) throw usage_error("QnnParams: input dimension mismatch");
        double s = phase_[k];
        const auto a = frequency(k);
        for (int j = 0; j < dim_; ++j) s += a[j] * x[j];
        return s;
    }

    /// Flat layout [a (n*d) | b (n) | gamma (n)] used by the optimisers.
    std::vector<double> pack() const {
        std::vector<double> v;
        v.reserve(size());
        v.insert(v.end(), freq_.begin(), freq_.end());
        v.insert(v.end(), phase_.begin(), phase_.end());
        v.insert(v.end(), angle_.begin(), angle_.end());
        return v;
    }

    static QnnParams unpack(std::span<const double> v, int blocks, int dim) {
        const std::size_t nd = static_cast<std::size_t>(blocks) * dim;
        if (v.size() != nd + 2 * static_cast<std::size_t>(blocks)) {
            throw usage_error("QnnParams::unpack: wrong vector length");
        }
        return QnnParams(dim, std::vector<double>(v.begin(), v.begin() + nd),
                         std::vector<double>(v.begin() + nd, v.begin() + nd + blocks),
                         std::vector<double>(v.begin() + nd + blocks, v.end()));
    }

    std::size_t size() const { return freq_.size() + phase_.size() + angle_.size(); }

private:
    void validate() const {
        if (dim_ < 1) throw usage_error("QnnParams: dim must be >= 1");
        if (phase_.empty()) throw usage_error("QnnParams: need at least one block");
        if (angle_.size() != phase_.size() ||
            freq_.size() != phase_.size() * static_cast<std::size_t>(dim_)) {
            throw usage_error("QnnParams: parameter sequences must share the block count");
        }
        auto finite = [](const std::vector<double>& v) {
            for (double x : v)
                if (!std::isfinite(x)) return false;
            return true;
        };
        if (!finite(freq_) || !finite(phase_) || !finite(angle_)) {
            throw usage_error("QnnParams: entries must be finite");
        }
    }

    int dim_ = 1;
    std::vector<double> freq_;
    std::vector<double> phase_;
    std::vector<double> angle_;
};

/// n accuracy blocks on ceil(log2(4n + n0)) qubits with output scale R.
struct CircuitConfig {
    int blocks = 1;
    int padding = 0;
    double scale = 1.0;

    int qubits() const {
        const long long need = 4LL * blocks + padding;
        int q = 0;
        while ((1LL << q) < need) ++q;
        return q;
    }
    std::size_t dimension() const { return std::size_t{1} << qubits(); }

    void validate() const {
        if (blocks < 1) throw usage_error("CircuitConfig: blocks must be >= 1");
        if (padding < 0) throw usage_error("CircuitConfig: padding must be >= 0");
        if (!(scale > 0.0) || !std::isfinite(scale)) throw usage_error("CircuitConfig: scale must be > 0");
        if (qubits() > 30) throw usage_error("CircuitConfig: register too large");
    }
};

struct StateVector {
    std::vector<complex> amplitudes;

    std::size_t size() const { return amplitudes.size(); }
    double norm_squared() const {
        double s = 0.0;
        for (const auto& a : amplitudes) s += std::norm(a);
        return s;
    }
    Eigen::VectorXcd to_eigen() const {
        return Eigen::Map<const Eigen::VectorXcd>(amplitudes.data(), static_cast<Eigen::Index>(size()));
    }
};

inline complex inner_product(const StateVector& lhs, const StateVector& rhs) {
    if (lhs.size() != rhs.size()) throw usage_error("inner_product: dimension mismatch");
    complex s = 0.0;
    for (std::size_t i = 0; i < lhs.size(); ++i) s += std::conj(lhs.amplitudes[i]) * rhs.amplitudes[i];
    return s;
}

/// P_m for the four target outcomes plus the mass on padding indices >= 4n.
struct GroupedProbs {
    std::array<double, 4> p{};
    double discarded = 0.0;

    double sum() const { return p[0] + p[1] + p[2] + p[3] + discarded; }
};

/// |psi_1> = n^{-1/2} sum_{i<n} |4i>.
inline StateVector initial_state(const CircuitConfig& cfg) {
    cfg.validate();
    StateVector s{std::vector<complex>(cfg.dimension(), 0.0)};
    const double amp = 1.0 / std::sqrt(static_cast<double>(cfg.blocks));
    for (int i = 0; i < cfg.blocks; ++i) s.amplitudes[4 * static_cast<std::size_t>(i)] = amp;
    return s;
}

inline Eigen::Matrix2cd ry(double phi) {
    const double c = std::cos(0.5 * phi);
    const double s = std::sin(0.5 * phi);
    Eigen::Matrix2cd m;
    m << c, -s, s, c;
    return m;
}

inline Eigen::Matrix2cd rz(double phi) {
    Eigen::Matrix2cd m = Eigen::Matrix2cd::Zero();
    m(0, 0) = std::polar(1.0, -0.5 * phi);
    m(1, 1) = std::polar(1.0, 0.5 * phi);
    return m;
}

inline Eigen::Matrix2cd hadamard() {
    Eigen::Matrix2cd m;
    const double r = 1.0 / std::numbers::sqrt2;
    m << r, r, r, -r;
    return m;
}

inline Matrix kron(const Matrix& a, const Matrix& b) {
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

/// RY(input angle) (x) RY(gamma), first factor on target bit 1.
inline Matrix4 block_unitary(double input_angle, double gamma) {
    return kron(ry(input_angle), ry(gamma));
}

inline Matrix4 block_unitary(const QnnParams& params, int k, std::span<const double> x) {
    return block_unitary(params.input_angle(k, x), params.angle(k));
}

namespace detail {
inline void check_shapes(const QnnParams& params, const CircuitConfig& cfg) {
    cfg.validate();
    if (params.blocks() != cfg.blocks) throw usage_error("block count of params and config differ");
}
}  // namespace detail

/// Applies U(theta, x) = sum_k |k><k| (x) Ubar_k in place; control values k >= n act as identity.
inline void apply_parameterised_unitary_inplace(const QnnParams& params, std::span<const double> x,
                                                StateVector& state, const CircuitConfig& cfg) {
    detail::check_shapes(params, cfg);
    if (state.size() != cfg.dimension()) throw usage_error("state dimension does not match 2^qubits");
    for (int k = 0; k < cfg.blocks; ++k) {
        const Matrix4 u = block_unitary(params, k, x);
        Eigen::Map<Eigen::Vector4cd> quad(state.amplitudes.data() + 4 * static_cast<std::size_t>(k));
        const Eigen::Vector4cd in = quad;
        quad = u * in;
    }
}

inline StateVector apply_parameterised_unitary(const QnnParams& params, std::span<const double> x,
                                               StateVector state, const CircuitConfig& cfg) {
    apply_parameterised_unitary_inplace(params, x, state, cfg);
    return state;
}

/// |psi_2> = U(theta, x) |psi_1>.
inline StateVector final_state(const QnnParams& params, std::span<const double> x, const CircuitConfig& cfg) {
    StateVector s = initial_state(cfg);
    apply_parameterised_unitary_inplace(params, x, s, cfg);
    return s;
}

/// Groups |amplitude(o)|^2 by m = o mod 4 over o < 4n.
inline GroupedProbs grouped_probabilities(std::span<const double> outcome_probs, const CircuitConfig& cfg) {
    cfg.validate();
    if (outcome_probs.size() != cfg.dimension()) throw usage_error("distribution size must be 2^qubits");
    GroupedProbs g;
    const std::size_t valid = 4 * static_cast<std::size_t>(cfg.blocks);
    for (std::size_t o = 0; o < outcome_probs.size(); ++o) {
        if (o < valid)
            g.p[o % 4] += outcome_probs[o];
        else
            g.discarded += outcome_probs[o];
    }
    return g;
}

inline std::vector<double> outcome_distribution(const StateVector& state) {
    std::vector<double> p(state.size());
    for (std::size_t i = 0; i < state.size(); ++i) p[i] = std::norm(state.amplitudes[i]);
    return p;
}

inline GroupedProbs grouped_probabilities(const StateVector& state, const CircuitConfig& cfg) {
    const auto p = outcome_distribution(state);
    return grouped_probabilities(std::span<const double>(p), cfg);
}

/// R (1 - 2 (P_1 + P_2)).
inline double circuit_output(const GroupedProbs& probs, double scale) {
    return scale * (1.0 - 2.0 * (probs.p[1] + probs.p[2]));
}

/// (R/n) sum_k cos(gamma_k) cos(b_k + a_k . x).
inline double analytic_output(const QnnParams& params, std::span<const double> x, double scale) {
    double s = 0.0;
    for (int k = 0; k < params.blocks(); ++k) s += std::cos(params.angle(k)) * std::cos(params.input_angle(k, x));
    return scale * s / params.blocks();
}

enum class EvalMode { exact, analytic };

inline double evaluate(const QnnParams& params, std::span<const double> x, const CircuitConfig& cfg,
                       EvalMode mode = EvalMode::analytic) {
    detail::check_shapes(params, cfg);
    if (mode == EvalMode::analytic) return analytic_output(params, x, cfg.scale);
    return circuit_output(grouped_probabilities(final_state(params, x, cfg), cfg), cfg.scale);
}

// Dense operators. Used by the density-matrix oracles and tests at small
// register sizes only.

/// Full 2^q x 2^q block-diagonal U(theta, x).
inline Matrix parameterised_unitary_matrix(const QnnParams& params, std::span<const double> x,
                                           const CircuitConfig& cfg) {
    detail::check_shapes(params, cfg);
    const auto dim = static_cast<Eigen::Index>(cfg.dimension());
    Matrix u = Matrix::Identity(dim, dim);
    for (int k = 0; k < cfg.blocks; ++k) u.block<4, 4>(4 * k, 4 * k) = block_unitary(params, k, x);
    return u;
}

/// H on every control qubit, identity on the two targets.
inline Matrix hadamard_preparation_matrix(const CircuitConfig& cfg) {
    cfg.validate();
    Matrix v = Matrix::Identity(4, 4);
    const Matrix h = hadamard();
    for (int q = 2; q < cfg.qubits(); ++q) v = kron(h, v);
    return v;
}

/// Pi_m = sum_{i<n} |4i+m><4i+m|.
inline Matrix outcome_projector(int m, const CircuitConfig& cfg) {
    cfg.validate();
    if (m < 0 || m > 3) throw usage_error("outcome_projector: m must be in 0..3");
    const auto dim = static_cast<Eigen::Index>(cfg.dimension());
    Matrix p = Matrix::Zero(dim, dim);
    for (int i = 0; i < cfg.blocks; ++i) p(4 * i + m, 4 * i + m) = 1.0;
    return p;
}

}  // namespace qnnlab::circuit
