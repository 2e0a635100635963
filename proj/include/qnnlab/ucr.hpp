#pragma once

// Uniformly controlled rotations: the block-diagonal unitary compiled into
// single-qubit rotations and CNOTs.
//
// A rotation multiplexed over c control qubits with angles theta_j (j the
// control value) becomes 2^c rotations interleaved with 2^c CNOTs. The CNOT
// after rotation i is controlled by the bit in which the Gray codes g_i and
// g_{i+1 mod 2^c} differ, and the rotation angles solve
//   theta_j = sum_i (-1)^{popcount(j & g_i)} theta'_i.

#include <bit>
#include <complex>
#include <cstdint>
#include <istream>
#include <ostream>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "qnnlab/circuit.hpp"
#include "qnnlab/errors.hpp"

namespace qnnlab::ucr {

using circuit::complex;
using circuit::StateVector;

enum class GateKind { h, ry, rz, cnot };

struct Gate {
    GateKind kind = GateKind::h;
    int target = 0;
    int control = -1;  // cnot only
    double angle = 0.0;  // rotations only

    bool operator==(const Gate&) const = default;
};

inline const char* gate_name(GateKind k) {
    switch (k) {
        case GateKind::h: return "h";
        case GateKind::ry: return "ry";
        case GateKind::rz: return "rz";
        case GateKind::cnot: return "cx";
    }
    return "?";
}

struct GateSequence {
    int qubits = 0;
    std::vector<Gate> gates;

    std::size_t one_qubit_count() const {
        std::size_t c = 0;
        for (const auto& g : gates) c += g.kind != GateKind::cnot;
        return c;
    }
    std::size_t two_qubit_count() const { return gates.size() - one_qubit_count(); }

    void append(const GateSequence& other) { gates.insert(gates.end(), other.gates.begin(), other.gates.end()); }
};

/// One gate per line: `name qubits... [angle]`, e.g. `ry 1 0.25`, `cx 2 0`
/// (control first). A leading `qubits N` line records the register width.
inline void write_text(std::ostream& os, const GateSequence& seq) {
    os << "qubits " << seq.qubits << '\n';
    os.precision(17);
    for (const auto& g : seq.gates) {
        os << gate_name(g.kind);
        if (g.kind == GateKind::cnot) {
            os << ' ' << g.control << ' ' << g.target;
        } else {
            os << ' ' << g.target;
            if (g.kind != GateKind::h) os << ' ' << g.angle;
        }
        os << '\n';
    }
}

inline std::string to_text(const GateSequence& seq) {
    std::ostringstream os;
    write_text(os, seq);
    return os.str();
}

inline GateSequence parse_text(std::istream& is) {
    GateSequence seq;
    std::string line;
    bool have_header = false;
    while (std::getline(is, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ls(line);
        std::string name;
        ls >> name;
        Gate g;
        if (name == "qubits") {
            ls >> seq.qubits;
            have_header = true;
            continue;
        } else if (name == "h") {
            g.kind = GateKind::h;
            ls >> g.target;
        } else if (name == "ry" || name == "rz") {
            g.kind = name == "ry" ? GateKind::ry : GateKind::rz;
            ls >> g.target >> g.angle;
        } else if (name == "cx") {
            g.kind = GateKind::cnot;
            ls >> g.control >> g.target;
        } else {
            throw usage_error("parse_text: unknown gate '" + name + "'");
        }
        if (ls.fail()) throw usage_error("parse_text: malformed line '" + line + "'");
        seq.gates.push_back(g);
    }
    if (!have_header) throw usage_error("parse_text: missing 'qubits' header");
    return seq;
}

inline GateSequence from_text(const std::string& text) {
    std::istringstream is(text);
    return parse_text(is);
}

/// Appends a rotation about `axis` on `target`, multiplexed over `controls`
/// (bit j of the control value lives on qubit controls[j]). `angles` has
/// 2^controls.size() entries.
inline void append_multiplexed_rotation(GateSequence& seq, GateKind axis, int target,
                                        std::span<const int> controls, std::span<const double> angles) {
    if (axis != GateKind::ry && axis != GateKind::rz) throw usage_error("multiplexed rotation axis must be ry or rz");
    const std::size_t c = controls.size();
    const std::size_t count = std::size_t{1} << c;
    if (angles.size() != count) throw usage_error("multiplexed rotation: need 2^controls angles");
    if (c == 0) {
        seq.gates.push_back({axis, target, -1, angles[0]});
        return;
    }
    auto gray = [](std::size_t i) { return i ^ (i >> 1); };
    for (std::size_t i = 0; i < count; ++i) {
        const std::size_t g = gray(i);
        double theta = 0.0;
        for (std::size_t j = 0; j < count; ++j) {
            theta += (std::popcount(j & g) % 2 == 0 ? 1.0 : -1.0) * angles[j];
        }
        seq.gates.push_back({axis, target, -1, theta / static_cast<double>(count)});
        const std::size_t flip = gray(i) ^ gray((i + 1) % count);
        const int bit = std::countr_zero(flip);
        seq.gates.push_back({GateKind::cnot, target, controls[static_cast<std::size_t>(bit)], 0.0});
    }
}

/// Compiles U(theta, x): one multiplexed RY on target bit 1 (input angles) and
/// one on target bit 0 (gamma), padded with zero angles for k >= n.
inline GateSequence ucr_compile(const circuit::QnnParams& params, std::span<const double> x,
                                const circuit::CircuitConfig& cfg) {
    circuit::detail::check_shapes(params, cfg);
    const int q = cfg.qubits();
    std::vector<int> controls;
    for (int b = 2; b < q; ++b) controls.push_back(b);
    const std::size_t slots = std::size_t{1} << controls.size();
    std::vector<double> input(slots, 0.0);
    std::vector<double> gamma(slots, 0.0);
    for (int k = 0; k < cfg.blocks; ++k) {
        input[k] = params.input_angle(k, x);
        gamma[k] = params.angle(k);
    }
    GateSequence seq{q, {}};
    append_multiplexed_rotation(seq, GateKind::ry, 1, controls, input);
    append_multiplexed_rotation(seq, GateKind::ry, 0, controls, gamma);
    return seq;
}

/// V as Hadamards on the control register. Only reproduces |psi_1> when n = 2^(q-2).
inline GateSequence hadamard_preparation(const circuit::CircuitConfig& cfg) {
    cfg.validate();
    const int q = cfg.qubits();
    if ((std::size_t{1} << (q - 2)) != static_cast<std::size_t>(cfg.blocks)) {
        throw usage_error("hadamard_preparation: block count must be a power of two with no padding");
    }
    GateSequence seq{q, {}};
    for (int b = 2; b < q; ++b) seq.gates.push_back({GateKind::h, b, -1, 0.0});
    return seq;
}

/// Two-qubit count of the multi-controlled construction, n * qubits.
inline std::size_t naive_two_qubit_count(const circuit::CircuitConfig& cfg) {
    return static_cast<std::size_t>(cfg.blocks) * static_cast<std::size_t>(cfg.qubits());
}

inline void apply_gate(const Gate& g, StateVector& state) {
    const std::size_t dim = state.size();
    auto& a = state.amplitudes;
    if (g.target < 0 || (std::size_t{1} << g.target) >= dim) throw usage_error("apply_gate: target out of range");
    const std::size_t tmask = std::size_t{1} << g.target;
    if (g.kind == GateKind::cnot) {
        if (g.control < 0 || g.control == g.target || (std::size_t{1} << g.control) >= dim) {
            throw usage_error("apply_gate: bad control qubit");
        }
        const std::size_t cmask = std::size_t{1} << g.control;
        for (std::size_t i = 0; i < dim; ++i) {
            if ((i & cmask) && !(i & tmask)) std::swap(a[i], a[i | tmask]);
        }
        return;
    }
    Eigen::Matrix2cd m;
    switch (g.kind) {
        case GateKind::h: m = circuit::hadamard(); break;
        case GateKind::ry: m = circuit::ry(g.angle); break;
        default: m = circuit::rz(g.angle); break;
    }
    for (std::size_t i = 0; i < dim; ++i) {
        if (i & tmask) continue;
        const complex lo = a[i];
        const complex hi = a[i | tmask];
        a[i] = m(0, 0) * lo + m(0, 1) * hi;
        a[i | tmask] = m(1, 0) * lo + m(1, 1) * hi;
    }
}

inline StateVector ucr_apply(const GateSequence& seq, StateVector state) {
    if ((std::size_t{1} << seq.qubits) != state.size()) throw usage_error("ucr_apply: register size mismatch");
    for (const auto& g : seq.gates) apply_gate(g, state);
    return state;
}

}  // namespace qnnlab::ucr
