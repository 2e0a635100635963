#pragma once

// Calibration data -> effective depolarising parameters and error budgets.

#include <algorithm>
#include <cctype>
#include <cmath>
#include <istream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "qnnlab/circuit.hpp"
#include "qnnlab/errors.hpp"
#include "qnnlab/noise.hpp"

namespace qnnlab::hardware {

/// A calibration entry that may be quoted as a range. Scalars have lo == hi.
struct Range {
    double lo = 0.0;
    double hi = 0.0;

    static Range exact(double v) { return {v, v}; }
    bool is_point() const { return lo == hi; }
};

/// Which end of each range to evaluate. Pessimistic takes the larger error
/// rates and durations and the shorter coherence times.
enum class Corner { pessimistic, optimistic };

struct HardwareProfile {
    std::string name;
    Range eps_1q;
    Range eps_2q;
    std::optional<Range> t1;    // seconds; absent = no decoherence contribution
    std::optional<Range> t2;
    std::optional<Range> t_1q;  // absent = two-qubit branch of the circuit time only
    std::optional<Range> t_2q;
    Range readout_p;
    double memory_error = 0.0;  // recorded, not used by the budget
    std::vector<std::string> notes;

    double eps_1q_at(Corner c) const { return c == Corner::pessimistic ? eps_1q.hi : eps_1q.lo; }
    double eps_2q_at(Corner c) const { return c == Corner::pessimistic ? eps_2q.hi : eps_2q.lo; }
    double readout_at(Corner c) const { return c == Corner::pessimistic ? readout_p.hi : readout_p.lo; }
    static std::optional<double> duration_at(const std::optional<Range>& r, Corner c) {
        if (!r) return std::nullopt;
        return c == Corner::pessimistic ? r->hi : r->lo;
    }
    static std::optional<double> coherence_at(const std::optional<Range>& r, Corner c) {
        if (!r) return std::nullopt;
        return c == Corner::pessimistic ? r->lo : r->hi;
    }
};

inline void validate(const HardwareProfile& p) {
    auto rate = [&](const Range& r, const char* what) {
        if (!(r.lo >= 0.0 && r.hi <= 1.0 && r.lo <= r.hi)) {
            throw domain_error(p.name + ": " + what + " must be an ordered range inside [0, 1]");
        }
    };
    auto time = [&](const std::optional<Range>& r, const char* what) {
        if (r && !(r->lo > 0.0 && r->lo <= r->hi && std::isfinite(r->hi))) {
            throw domain_error(p.name + ": " + what + " must be an ordered positive range");
        }
    };
    rate(p.eps_1q, "eps-1q");
    rate(p.eps_2q, "eps-2q");
    rate(p.readout_p, "readout-p");
    time(p.t1, "t1");
    time(p.t2, "t2");
    time(p.t_1q, "t-1q");
    time(p.t_2q, "t-2q");
}

inline HardwareProfile ibm_fez() {
    HardwareProfile p;
    p.name = "ibm-fez";
    p.eps_1q = Range::exact(2.761e-4);
    p.eps_2q = Range::exact(2.548e-3);
    p.t1 = Range::exact(144.97e-6);
    p.t2 = Range::exact(99.9e-6);
    p.t_2q = Range::exact(68e-9);
    p.readout_p = Range::exact(0.0);
    p.notes = {"t-1q not calibrated: circuit time uses the two-qubit branch only",
               "readout-p not calibrated: default 0 excludes the readout term"};
    return p;
}

inline HardwareProfile quantinuum_h2() {
    HardwareProfile p;
    p.name = "quantinuum-h2";
    p.eps_1q = Range::exact(3e-5);
    p.eps_2q = Range::exact(1e-3);
    p.t_1q = Range::exact(5e-6);
    p.t_2q = Range::exact(100e-6);
    p.readout_p = Range::exact(1e-3);
    p.memory_error = 2e-4;
    p.notes = {"T1/T2 not listed: no decoherence contribution",
               "readout-p taken from the state-preparation/measurement error",
               "memory error per qubit recorded but not part of the depolarising model"};
    return p;
}

inline HardwareProfile rigetti_cepheus() {
    HardwareProfile p;
    p.name = "rigetti-cepheus";
    p.eps_1q = Range::exact(0.0);
    p.eps_2q = Range::exact(5e-3);
    p.t1 = Range{50e-6, 100e-6};
    p.t2 = Range{20e-6, 50e-6};
    p.t_2q = Range{60e-9, 80e-9};
    p.readout_p = Range::exact(0.0);
    p.notes = {"eps-1q not listed: treated as 0", "readout-p not listed: treated as 0"};
    return p;
}

/// Every error source switched off; the budget reduces to the approximation term.
inline HardwareProfile noiseless() {
    HardwareProfile p;
    p.name = "noiseless";
    return p;
}

inline std::vector<std::string> preset_names() { return {"ibm-fez", "quantinuum-h2", "rigetti-cepheus", "noiseless"}; }

inline HardwareProfile preset(const std::string& name) {
    if (name == "ibm-fez") return ibm_fez();
    if (name == "quantinuum-h2") return quantinuum_h2();
    if (name == "rigetti-cepheus") return rigetti_cepheus();
    if (name == "noiseless") return noiseless();
    std::string all;
    for (const auto& n : preset_names()) all += (all.empty() ? "" : ", ") + n;
    throw usage_error("unknown hardware preset '" + name + "' (available: " + all + ")");
}

/// 1 - (1 - eps_1Q)^(q - 2): the Hadamards of the preparation stage.
inline double lambda_v(const HardwareProfile& p, int qubits, Corner c = Corner::pessimistic) {
    if (qubits < 2) throw domain_error("lambda_v: qubit count must be >= 2");
    return -std::expm1(static_cast<double>(qubits - 2) * std::log1p(-p.eps_1q_at(c)));
}

/// ceil(n q / 15).
inline long long n_two_qubit(int blocks, int qubits) {
    if (blocks < 1 || qubits < 1) throw usage_error("n_two_qubit: counts must be >= 1");
    const long long prod = static_cast<long long>(blocks) * qubits;
    return (prod + 14) / 15;
}

inline double lambda_u_gates(const HardwareProfile& p, long long n2q, Corner c = Corner::pessimistic) {
    if (n2q < 0) throw usage_error("lambda_u_gates: negative gate count");
    return -std::expm1(static_cast<double>(n2q) * std::log1p(-p.eps_2q_at(c)));
}

/// max(N_2Q t_2Q, N_1Q t_1Q); a missing duration drops its branch.
inline double circuit_time(const HardwareProfile& p, long long n1q, long long n2q, Corner c = Corner::pessimistic) {
    if (n1q < 0 || n2q < 0) throw usage_error("circuit_time: negative gate count");
    const auto t2q = HardwareProfile::duration_at(p.t_2q, c);
    const auto t1q = HardwareProfile::duration_at(p.t_1q, c);
    const double two = t2q ? static_cast<double>(n2q) * *t2q : 0.0;
    const double one = t1q ? static_cast<double>(n1q) * *t1q : 0.0;
    return std::max(two, one);
}

struct DecoherenceProbs {
    double p_t1 = 0.0;
    double p_t2 = 0.0;
};

/// p = 1 - exp(-t_circ / T) for T1 and T2; a missing T contributes 0.
inline DecoherenceProbs decoherence_probs(const HardwareProfile& p, double t_circ, Corner c = Corner::pessimistic) {
    if (!(t_circ >= 0.0)) throw domain_error("decoherence_probs: t_circ must be >= 0");
    const auto t1 = HardwareProfile::coherence_at(p.t1, c);
    const auto t2 = HardwareProfile::coherence_at(p.t2, c);
    return {t1 ? -std::expm1(-t_circ / *t1) : 0.0, t2 ? -std::expm1(-t_circ / *t2) : 0.0};
}

/// 1 - (1 - lambda_gates)(1 - p_T1/2)(1 - p_T2/2).
inline double lambda_u_combined(double lambda_gates, double p_t1, double p_t2) {
    for (double v : {lambda_gates, p_t1, p_t2}) {
        if (!(v >= 0.0 && v <= 1.0)) throw domain_error("lambda_u_combined: inputs must be in [0, 1]");
    }
    return 1.0 - (1.0 - lambda_gates) * (1.0 - 0.5 * p_t1) * (1.0 - 0.5 * p_t2);
}

/// The full pipeline with its intermediates.
struct BackendBudget {
    std::string profile;
    Corner corner = Corner::pessimistic;
    double lambda_v = 0.0;
    long long n1q = 0;
    long long n2q = 0;
    double lambda_u_gates = 0.0;
    double t_circ = 0.0;
    DecoherenceProbs decoherence;
    double lambda_u = 0.0;
    double alpha = 1.0;
    noise::BoundReport report;
    std::vector<std::string> notes;

    noise::DepolarisingSpec depolarising() const { return {lambda_v, lambda_u}; }
};

/// One-qubit gate count of the preparation stage: q - 2 Hadamards.
inline long long n_one_qubit(int qubits) { return std::max(0, qubits - 2); }

inline BackendBudget backend_budget(const HardwareProfile& p, const circuit::CircuitConfig& cfg, double l1_fhat,
                                    double f_l2_norm, Corner c = Corner::pessimistic) {
    validate(p);
    cfg.validate();
    BackendBudget b;
    b.profile = p.name;
    b.corner = c;
    const int q = cfg.qubits();
    b.lambda_v = lambda_v(p, q, c);
    b.n1q = n_one_qubit(q);
    b.n2q = n_two_qubit(cfg.blocks, q);
    b.lambda_u_gates = lambda_u_gates(p, b.n2q, c);
    b.t_circ = circuit_time(p, b.n1q, b.n2q, c);
    b.decoherence = decoherence_probs(p, b.t_circ, c);
    b.lambda_u = lambda_u_combined(b.lambda_u_gates, b.decoherence.p_t1, b.decoherence.p_t2);
    b.alpha = (1.0 - b.lambda_v) * (1.0 - b.lambda_u);
    b.report = noise::full_bound(b.alpha, l1_fhat, f_l2_norm, cfg, p.readout_at(c));
    b.notes = p.notes;
    return b;
}

namespace detail {

inline std::string trim(std::string s) {
    auto issp = [](unsigned char ch) { return std::isspace(ch) != 0; };
    s.erase(s.begin(), std::find_if_not(s.begin(), s.end(), issp));
    s.erase(std::find_if_not(s.rbegin(), s.rend(), issp).base(), s.end());
    return s;
}

inline double parse_number(const std::string& s, const std::string& key) {
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &used);
    } catch (const std::exception&) {
        throw usage_error("hardware profile: bad number for '" + key + "': " + s);
    }
    if (used != s.size()) throw usage_error("hardware profile: bad number for '" + key + "': " + s);
    return v;
}

/// "v" or "lo..hi".
inline Range parse_range(const std::string& s, const std::string& key) {
    const auto dots = s.find("..");
    if (dots == std::string::npos) return Range::exact(parse_number(trim(s), key));
    return {parse_number(trim(s.substr(0, dots)), key), parse_number(trim(s.substr(dots + 2)), key)};
}

}  // namespace detail

/// Applies one `key = value` setting. Values are numbers or `lo..hi` ranges.
inline void set_field(HardwareProfile& p, const std::string& key, const std::string& value) {
    if (key == "name") {
        p.name = value;
    } else if (key == "eps-1q") {
        p.eps_1q = detail::parse_range(value, key);
    } else if (key == "eps-2q") {
        p.eps_2q = detail::parse_range(value, key);
    } else if (key == "t1") {
        p.t1 = detail::parse_range(value, key);
    } else if (key == "t2") {
        p.t2 = detail::parse_range(value, key);
    } else if (key == "t-1q") {
        p.t_1q = detail::parse_range(value, key);
    } else if (key == "t-2q") {
        p.t_2q = detail::parse_range(value, key);
    } else if (key == "readout-p") {
        p.readout_p = detail::parse_range(value, key);
    } else if (key == "memory-error") {
        p.memory_error = detail::parse_number(value, key);
    } else {
        throw usage_error("hardware profile: unknown key '" + key + "'");
    }
}

/// Line-oriented profile: `key = value`, `#` comments. A `preset = NAME` line
/// (first) starts from that preset; all other keys override it.
inline HardwareProfile parse_profile(std::istream& is) {
    HardwareProfile p = noiseless();
    p.name = "custom";
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = detail::trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw usage_error("hardware profile line " + std::to_string(lineno) + ": expected key = value");
        }
        const std::string key = detail::trim(line.substr(0, eq));
        const std::string value = detail::trim(line.substr(eq + 1));
        if (key == "preset") {
            p = preset(value);
        } else {
            set_field(p, key, value);
        }
    }
    validate(p);
    return p;
}

inline HardwareProfile parse_profile(const std::string& text) {
    std::istringstream is(text);
    return parse_profile(is);
}

}  // namespace qnnlab::hardware
