#pragma once

// Noise channels acting on the QNN register, closed-form depolarising
// results, readout confusion and the noisy approximation bounds.

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <complex>
#include <limits>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "qnnlab/circuit.hpp"
#include "qnnlab/errors.hpp"

namespace qnnlab::noise {

using circuit::CircuitConfig;
using circuit::complex;
using circuit::GroupedProbs;
using circuit::Matrix;
using circuit::QnnParams;
using circuit::StateVector;

/// Kraus machinery materialises 4^q operators of size 2^q; keep it small.
inline constexpr int max_oracle_qubits = 3;

class DensityMatrix {
public:
    DensityMatrix() = default;
    explicit DensityMatrix(Matrix m) : m_(std::move(m)) {
        if (m_.rows() != m_.cols()) throw usage_error("DensityMatrix: matrix must be square");
    }

    static DensityMatrix pure(const StateVector& psi) {
        const Eigen::VectorXcd v = psi.to_eigen();
        return DensityMatrix(v * v.adjoint());
    }
    static DensityMatrix maximally_mixed(Eigen::Index dim) {
        return DensityMatrix(Matrix::Identity(dim, dim) / static_cast<double>(dim));
    }

    const Matrix& matrix() const { return m_; }
    Eigen::Index dim() const { return m_.rows(); }
    complex operator()(Eigen::Index i, Eigen::Index j) const { return m_(i, j); }

    /// Hermitian and unit trace to `tol`, eigenvalues >= -psd_tol.
    bool is_valid(double tol = 1e-10, double psd_tol = 1e-9) const {
        if ((m_ - m_.adjoint()).cwiseAbs().maxCoeff() > tol) return false;
        if (std::abs(m_.trace() - 1.0) > tol) return false;
        Eigen::SelfAdjointEigenSolver<Matrix> eig(0.5 * (m_ + m_.adjoint()), Eigen::EigenvaluesOnly);
        return eig.eigenvalues().minCoeff() >= -psd_tol;
    }

private:
    Matrix m_;
};

inline double max_abs_diff(const DensityMatrix& a, const DensityMatrix& b) {
    return (a.matrix() - b.matrix()).cwiseAbs().maxCoeff();
}

struct KrausChannel {
    std::vector<Matrix> operators;

    Eigen::Index dim() const { return operators.empty() ? 0 : operators.front().rows(); }

    /// max |sum K^dagger K - I|.
    double completeness_error() const {
        if (operators.empty()) return std::numeric_limits<double>::infinity();
        Matrix s = Matrix::Zero(dim(), dim());
        for (const auto& k : operators) s += k.adjoint() * k;
        return (s - Matrix::Identity(dim(), dim())).cwiseAbs().maxCoeff();
    }

    static KrausChannel identity(Eigen::Index dim) { return {{Matrix::Identity(dim, dim)}}; }
};

/// Effective depolarising strengths after V and after U.
struct DepolarisingSpec {
    double lambda_v = 0.0;
    double lambda_u = 0.0;

    double alpha() const { return (1.0 - lambda_v) * (1.0 - lambda_u); }
    /// Weight of I/2^q in the noisy state, (1 - lambda_U) lambda_V + lambda_U.
    double mixed_weight() const { return (1.0 - lambda_u) * lambda_v + lambda_u; }
};

/// Upper end of the complete-positivity range, 1 + 1/(d^2 - 1).
inline double max_lambda(Eigen::Index dim) {
    const double d2 = static_cast<double>(dim) * static_cast<double>(dim);
    return 1.0 + 1.0 / (d2 - 1.0);
}

inline void check_lambda(double lambda, Eigen::Index dim) {
    if (!(lambda >= 0.0) || lambda > max_lambda(dim) + 1e-15) {
        throw domain_error("depolarising lambda outside the complete-positivity range");
    }
}

/// Parameters in (1, 1 + 1/(d^2-1)] are CP but outside the physical sweep range [0, 1].
inline bool in_cp_tail(const DepolarisingSpec& spec) { return spec.lambda_v > 1.0 || spec.lambda_u > 1.0; }

/// (1 - lambda) rho + lambda I / d.
inline DensityMatrix depolarise(const DensityMatrix& rho, double lambda) {
    check_lambda(lambda, rho.dim());
    const auto d = rho.dim();
    return DensityMatrix((1.0 - lambda) * rho.matrix() + lambda / static_cast<double>(d) * Matrix::Identity(d, d));
}

inline std::array<Eigen::Matrix2cd, 4> paulis() {
    Eigen::Matrix2cd i, x, y, z;
    i << 1, 0, 0, 1;
    x << 0, 1, 1, 0;
    y << 0, complex(0, -1), complex(0, 1), 0;
    z << 1, 0, 0, -1;
    return {i, x, y, z};
}

/// K_0 = sqrt(1 - lambda (d^2-1)/d^2) I, K_i = sqrt(lambda/d^2) P_i over the
/// q-fold Pauli products P_i (P_0 = I).
inline KrausChannel depolarising_kraus(double lambda, int qubits) {
    if (qubits < 1 || qubits > max_oracle_qubits) throw usage_error("depolarising_kraus: qubits must be in 1..3");
    const Eigen::Index dim = Eigen::Index{1} << qubits;
    check_lambda(lambda, dim);
    const double d2 = static_cast<double>(dim * dim);
    const auto p = paulis();
    KrausChannel ch;
    const std::size_t count = std::size_t{1} << (2 * qubits);
    for (std::size_t idx = 0; idx < count; ++idx) {
        Matrix op = Matrix::Identity(1, 1);
        for (int q = qubits - 1; q >= 0; --q) op = circuit::kron(op, p[(idx >> (2 * q)) & 3]);
        const double w = idx == 0 ? std::sqrt(std::max(0.0, 1.0 - lambda * (d2 - 1.0) / d2)) : std::sqrt(lambda / d2);
        ch.operators.push_back(w * op);
    }
    return ch;
}

/// sum_k K_k rho K_k^dagger.
inline DensityMatrix apply_channel(const DensityMatrix& rho, const KrausChannel& ch) {
    if (ch.dim() != rho.dim()) throw usage_error("apply_channel: dimension mismatch");
    if (ch.completeness_error() > 1e-8) throw invalid_channel("apply_channel: Kraus operators are not complete");
    Matrix out = Matrix::Zero(rho.dim(), rho.dim());
    for (const auto& k : ch.operators) out += k * rho.matrix() * k.adjoint();
    return DensityMatrix(std::move(out));
}

inline DensityMatrix conjugate(const DensityMatrix& rho, const Matrix& u) {
    return DensityMatrix(u * rho.matrix() * u.adjoint());
}

/// Closed form (1-lV)(1-lU) rho_2 + [(1-lU) lV + lU] I / 2^q.
inline DensityMatrix noisy_state(const QnnParams& params, std::span<const double> x, const CircuitConfig& cfg,
                                 const DepolarisingSpec& spec) {
    const auto dim = static_cast<Eigen::Index>(cfg.dimension());
    check_lambda(spec.lambda_v, dim);
    check_lambda(spec.lambda_u, dim);
    const DensityMatrix rho2 = DensityMatrix::pure(circuit::final_state(params, x, cfg));
    return DensityMatrix(spec.alpha() * rho2.matrix() +
                         spec.mixed_weight() / static_cast<double>(dim) * Matrix::Identity(dim, dim));
}

/// Psi_U(U Psi_V(rho_1) U^dagger) with rho_1 = |psi_1><psi_1|.
inline DensityMatrix noisy_state_pipeline(const QnnParams& params, std::span<const double> x, const CircuitConfig& cfg,
                                          const KrausChannel& channel_v, const KrausChannel& channel_u) {
    const DensityMatrix rho1 = DensityMatrix::pure(circuit::initial_state(cfg));
    const Matrix u = circuit::parameterised_unitary_matrix(params, x, cfg);
    return apply_channel(conjugate(apply_channel(rho1, channel_v), u), channel_u);
}

/// Same pipeline with the closed-form depolarising map in place of Kraus sums;
/// usable at any register size.
inline DensityMatrix depolarised_pipeline(const QnnParams& params, std::span<const double> x, const CircuitConfig& cfg,
                                          const DepolarisingSpec& spec) {
    const DensityMatrix rho1 = DensityMatrix::pure(circuit::initial_state(cfg));
    const Matrix u = circuit::parameterised_unitary_matrix(params, x, cfg);
    return depolarise(conjugate(depolarise(rho1, spec.lambda_v), u), spec.lambda_u);
}

struct Trajectory {
    double weight = 0.0;  // p_{k,l}
    StateVector state;    // normalised |phi_{k,l}>
    std::size_t kraus_u = 0;
    std::size_t kraus_v = 0;
};

/// rho_2~ = sum p_{k,l} |phi_{k,l}><phi_{k,l}| with |phi~_{k,l}> = K^U_k U K^V_l |psi_1>.
inline std::vector<Trajectory> trajectory_decomposition(const KrausChannel& channel_v, const KrausChannel& channel_u,
                                                        const QnnParams& params, std::span<const double> x,
                                                        const CircuitConfig& cfg, double min_weight = 1e-14) {
    if (cfg.qubits() > max_oracle_qubits) throw usage_error("trajectory_decomposition: at most 3 qubits");
    const auto dim = static_cast<Eigen::Index>(cfg.dimension());
    if (channel_v.dim() != dim || channel_u.dim() != dim) throw usage_error("trajectory_decomposition: channel dimension");
    const Eigen::VectorXcd psi1 = circuit::initial_state(cfg).to_eigen();
    const Matrix u = circuit::parameterised_unitary_matrix(params, x, cfg);
    std::vector<Trajectory> out;
    for (std::size_t l = 0; l < channel_v.operators.size(); ++l) {
        const Eigen::VectorXcd after_v = u * (channel_v.operators[l] * psi1);
        for (std::size_t k = 0; k < channel_u.operators.size(); ++k) {
            const Eigen::VectorXcd phi = channel_u.operators[k] * after_v;
            const double w = phi.squaredNorm();
            if (w <= min_weight) continue;
            Trajectory t;
            t.weight = w;
            t.kraus_u = k;
            t.kraus_v = l;
            const Eigen::VectorXcd normed = phi / std::sqrt(w);
            t.state.amplitudes.assign(normed.data(), normed.data() + normed.size());
            out.push_back(std::move(t));
        }
    }
    return out;
}

inline DensityMatrix mixture(std::span<const Trajectory> trajectories) {
    if (trajectories.empty()) throw usage_error("mixture: no trajectories");
    const auto dim = static_cast<Eigen::Index>(trajectories.front().state.size());
    Matrix m = Matrix::Zero(dim, dim);
    for (const auto& t : trajectories) {
        const Eigen::VectorXcd v = t.state.to_eigen();
        m += t.weight * (v * v.adjoint());
    }
    return DensityMatrix(std::move(m));
}

/// Tr[Pi_m rho] from the diagonal, with the mass on padding indices.
inline GroupedProbs grouped_probabilities(const DensityMatrix& rho, const CircuitConfig& cfg) {
    if (rho.dim() != static_cast<Eigen::Index>(cfg.dimension())) throw usage_error("grouped_probabilities: dimension");
    std::vector<double> diag(static_cast<std::size_t>(rho.dim()));
    for (Eigen::Index i = 0; i < rho.dim(); ++i) diag[static_cast<std::size_t>(i)] = rho(i, i).real();
    return circuit::grouped_probabilities(std::span<const double>(diag), cfg);
}

/// P~_m = alpha P_m + (1 - alpha) n / 2^q.
inline GroupedProbs noisy_probs(const GroupedProbs& ideal, double alpha, const CircuitConfig& cfg) {
    cfg.validate();
    const double d = static_cast<double>(cfg.dimension());
    const double n = cfg.blocks;
    GroupedProbs out;
    for (int m = 0; m < 4; ++m) out.p[m] = alpha * ideal.p[m] + (1.0 - alpha) * n / d;
    out.discarded = alpha * ideal.discarded + (1.0 - alpha) * (d - 4.0 * n) / d;
    return out;
}

inline GroupedProbs noisy_probs(const GroupedProbs& ideal, const DepolarisingSpec& spec, const CircuitConfig& cfg) {
    return noisy_probs(ideal, spec.alpha(), cfg);
}

/// R (1 - alpha) (1 - 4n / 2^q): the constant the noisy output contracts towards.
inline double bias_constant(double alpha, const CircuitConfig& cfg) {
    cfg.validate();
    return cfg.scale * (1.0 - alpha) * (1.0 - 4.0 * cfg.blocks / static_cast<double>(cfg.dimension()));
}

/// f~ = alpha f + R (1 - alpha)(1 - 4n / 2^q).
inline double noisy_output(double ideal_output, double alpha, const CircuitConfig& cfg) {
    return alpha * ideal_output + bias_constant(alpha, cfg);
}

inline double noisy_output(double ideal_output, const DepolarisingSpec& spec, const CircuitConfig& cfg) {
    return noisy_output(ideal_output, spec.alpha(), cfg);
}

/// sqrt(<psi|rho|psi>).
inline double fidelity(const StateVector& psi, const DensityMatrix& rho) {
    const Eigen::VectorXcd v = psi.to_eigen();
    const double value = (v.adjoint() * rho.matrix() * v)(0, 0).real();
    return std::sqrt(std::max(0.0, value));
}

/// Fidelity of the depolarised state with rho_2, independent of (theta, x).
inline double depolar_fidelity(const DepolarisingSpec& spec, int qubits) {
    if (qubits < 1) throw usage_error("depolar_fidelity: qubits must be >= 1");
    return std::sqrt(spec.alpha() + spec.mixed_weight() / std::ldexp(1.0, qubits));
}

inline double depolar_fidelity(const DepolarisingSpec& spec, const CircuitConfig& cfg) {
    cfg.validate();
    return depolar_fidelity(spec, cfg.qubits());
}

/// Smallest trajectory fidelity |<psi_2|phi_{k,l}>| over the sampled (theta, x)
/// pairs. Sampling can only overestimate the infimum.
inline double estimate_worst_fidelity(const KrausChannel& channel_v, const KrausChannel& channel_u,
                                      std::span<const QnnParams> theta_samples,
                                      std::span<const std::vector<double>> x_samples, const CircuitConfig& cfg) {
    if (theta_samples.empty() || x_samples.empty()) throw usage_error("estimate_worst_fidelity: empty sample set");
    double worst = 1.0;
    for (const auto& theta : theta_samples) {
        for (const auto& x : x_samples) {
            const StateVector psi2 = circuit::final_state(theta, x, cfg);
            for (const auto& t : trajectory_decomposition(channel_v, channel_u, theta, x, cfg)) {
                worst = std::min(worst, std::abs(circuit::inner_product(psi2, t.state)));
            }
        }
    }
    return std::min(worst, 1.0);
}

/// L1[f^] / sqrt(n) + 4 R sqrt(1 - F_min^2).
inline double general_bound(double l1_fhat, int blocks, double scale, double f_min) {
    if (!(f_min >= 0.0 && f_min <= 1.0)) throw domain_error("general_bound: F_min must be in [0, 1]");
    if (blocks < 1) throw usage_error("general_bound: blocks must be >= 1");
    return l1_fhat / std::sqrt(static_cast<double>(blocks)) + 4.0 * scale * std::sqrt(1.0 - f_min * f_min);
}

struct BoundReport {
    double statistical = 0.0;
    double systematic = 0.0;
    double offset = 0.0;
    double readout = 0.0;
    double total = 0.0;
    double alpha = 1.0;
    int blocks = 1;
    int qubits = 2;
    double scale = 1.0;
    double readout_p = 0.0;

    /// Flat (name, value) record in a fixed column order.
    std::vector<std::pair<std::string, double>> fields() const {
        return {{"statistical", statistical}, {"systematic", systematic}, {"offset", offset},
                {"readout", readout},         {"total", total},           {"alpha", alpha},
                {"n", static_cast<double>(blocks)}, {"qubits", static_cast<double>(qubits)},
                {"R", scale},                 {"p", readout_p}};
    }
};

/// alpha L1[f^]/sqrt(n) + (1-alpha) ||f|| + R (1-alpha)(1 - 4n/2^q); R is cfg.scale.
inline BoundReport depolar_bound(double alpha, double l1_fhat, double f_l2_norm, const CircuitConfig& cfg) {
    cfg.validate();
    if (!(alpha >= 0.0 && alpha <= 1.0)) throw domain_error("depolar_bound: alpha must be in [0, 1]");
    BoundReport r;
    r.alpha = alpha;
    r.blocks = cfg.blocks;
    r.qubits = cfg.qubits();
    r.scale = cfg.scale;
    r.statistical = alpha * l1_fhat / std::sqrt(static_cast<double>(cfg.blocks));
    r.systematic = (1.0 - alpha) * f_l2_norm;
    r.offset = bias_constant(alpha, cfg);
    r.total = r.statistical + r.systematic + r.offset;
    return r;
}

/// depolar_bound plus the readout term 4 R p.
inline BoundReport full_bound(double alpha, double l1_fhat, double f_l2_norm, const CircuitConfig& cfg,
                              double readout_p) {
    if (!(readout_p >= 0.0 && readout_p <= 1.0)) throw domain_error("full_bound: p must be in [0, 1]");
    BoundReport r = depolar_bound(alpha, l1_fhat, f_l2_norm, cfg);
    r.readout_p = readout_p;
    r.readout = 4.0 * cfg.scale * readout_p;
    r.total += r.readout;
    return r;
}

/// Confusion matrix q_{m,m'} = p^H (1-p)^(2-H), H the Hamming distance of the 2-bit labels.
struct ReadoutModel {
    double flip_p = 0.0;
    Eigen::Matrix4d confusion = Eigen::Matrix4d::Identity();
};

inline ReadoutModel readout_confusion(double p) {
    if (!(p >= 0.0 && p <= 1.0)) throw domain_error("readout_confusion: p must be in [0, 1]");
    ReadoutModel model{p, Eigen::Matrix4d::Zero()};
    for (int m = 0; m < 4; ++m) {
        for (int mp = 0; mp < 4; ++mp) {
            const int h = std::popcount(static_cast<unsigned>(m ^ mp));
            model.confusion(m, mp) = std::pow(p, h) * std::pow(1.0 - p, 2 - h);
        }
    }
    return model;
}

/// P-bar_m = sum_{m'} q_{m,m'} P~_{m'}; padding mass is untouched.
inline GroupedProbs apply_readout(const GroupedProbs& probs, const ReadoutModel& model) {
    GroupedProbs out;
    out.discarded = probs.discarded;
    for (int m = 0; m < 4; ++m) {
        for (int mp = 0; mp < 4; ++mp) out.p[m] += model.confusion(m, mp) * probs.p[mp];
    }
    return out;
}

struct OffsetCorrection {
    double beta1 = 1.0;
    double beta2 = 0.0;
};

/// beta1 = 1/alpha, beta2 = -beta1 R (1-alpha)(1 - 4n/2^q).
inline OffsetCorrection offset_correction(double alpha, const CircuitConfig& cfg) {
    if (!(alpha > 0.0)) throw non_invertible("offset_correction: alpha must be > 0");
    const double beta1 = 1.0 / alpha;
    return {beta1, -beta1 * bias_constant(alpha, cfg)};
}

inline double corrected_output(double noisy, const OffsetCorrection& c) { return c.beta1 * noisy + c.beta2; }

/// Least-squares affine map ideal ~ beta1 * noisy + beta2 over (noisy, ideal) pairs.
inline OffsetCorrection fit_offset(std::span<const std::pair<double, double>> pairs) {
    if (pairs.size() < 2) throw rank_error("fit_offset: need at least two pairs");
    double mean_x = 0.0, mean_y = 0.0;
    for (const auto& [x, y] : pairs) {
        mean_x += x;
        mean_y += y;
    }
    const double m = static_cast<double>(pairs.size());
    mean_x /= m;
    mean_y /= m;
    double sxx = 0.0, sxy = 0.0, scale = 0.0;
    for (const auto& [x, y] : pairs) {
        sxx += (x - mean_x) * (x - mean_x);
        sxy += (x - mean_x) * (y - mean_y);
        scale = std::max(scale, std::abs(x));
    }
    if (sxx <= 1e-24 * std::max(1.0, scale * scale) * m) throw rank_error("fit_offset: noisy outputs are constant");
    const double beta1 = sxy / sxx;
    return {beta1, mean_y - beta1 * mean_x};
}

}  // namespace qnnlab::noise
