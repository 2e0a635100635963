#pragma once

// Finite-shot measurement and the statistical error of the output estimate.

#include <cmath>
#include <cstdint>
#include <istream>
#include <ostream>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "qnnlab/circuit.hpp"
#include "qnnlab/errors.hpp"
#include "qnnlab/rng.hpp"

namespace qnnlab::sampler {

struct ShotResult {
    std::vector<std::uint64_t> counts;
    std::uint64_t shots = 0;
    std::uint64_t seed = 0;
};

/// Multinomial draw by sequential binomial conditioning:
/// c_i ~ Binomial(remaining shots, p_i / remaining mass).
inline ShotResult sample(std::span<const double> dist, std::uint64_t shots, std::uint64_t seed) {
    if (dist.empty()) throw domain_error("sample: empty distribution");
    if (shots == 0) throw usage_error("sample: shots must be positive");
    double total = 0.0;
    for (double p : dist) {
        if (!(p >= 0.0) || !std::isfinite(p)) throw domain_error("sample: probabilities must be >= 0");
        total += p;
    }
    if (std::abs(total - 1.0) > 1e-9) throw domain_error("sample: probabilities must sum to 1");
    Rng rng(seed);
    ShotResult r{std::vector<std::uint64_t>(dist.size(), 0), shots, seed};
    std::uint64_t left = shots;
    double mass = total;
    for (std::size_t i = 0; i + 1 < dist.size() && left > 0; ++i) {
        if (dist[i] > 0.0) {
            const double cond = mass > 0.0 ? std::min(1.0, dist[i] / mass) : 1.0;
            r.counts[i] = rng.binomial(left, cond);
            left -= r.counts[i];
        }
        mass -= dist[i];
    }
    if (left > 0) {
        // The tail owns the remainder; fall back to the last outcome with mass.
        std::size_t last = dist.size() - 1;
        while (last > 0 && dist[last] <= 0.0) --last;
        r.counts[last] += left;
    }
    return r;
}

inline circuit::GroupedProbs grouped_counts(const ShotResult& res, const circuit::CircuitConfig& cfg) {
    if (res.shots == 0) throw usage_error("grouped_counts: empty result");
    std::vector<double> freq(res.counts.size());
    for (std::size_t i = 0; i < freq.size(); ++i) {
        freq[i] = static_cast<double>(res.counts[i]) / static_cast<double>(res.shots);
    }
    return circuit::grouped_probabilities(std::span<const double>(freq), cfg);
}

/// 2 R sqrt(p (1 - p) / N) with p = P_1 + P_2.
inline double stat_error(double scale, double p_sum, std::uint64_t shots) {
    if (!(p_sum >= 0.0 && p_sum <= 1.0)) throw domain_error("stat_error: p must be in [0, 1]");
    if (shots == 0) throw usage_error("stat_error: shots must be positive");
    return 2.0 * scale * std::sqrt(p_sum * (1.0 - p_sum) / static_cast<double>(shots));
}

/// Finite-shot estimate of the QNN output for a given outcome distribution.
inline double sampled_output(std::span<const double> dist, const circuit::CircuitConfig& cfg, std::uint64_t shots,
                             std::uint64_t seed) {
    return circuit::circuit_output(grouped_counts(sample(dist, shots, seed), cfg), cfg.scale);
}

/// `outcome,count` rows after a header line.
inline void write_counts_csv(std::ostream& os, const ShotResult& res) {
    os << "outcome,count\n";
    for (std::size_t i = 0; i < res.counts.size(); ++i) os << i << ',' << res.counts[i] << '\n';
}

inline ShotResult read_counts_csv(std::istream& is, std::uint64_t seed = 0) {
    std::string line;
    if (!std::getline(is, line) || line.rfind("outcome", 0) != 0) throw usage_error("counts CSV: missing header");
    ShotResult r;
    r.seed = seed;
    while (std::getline(is, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ls(line);
        std::size_t idx = 0;
        char comma = 0;
        std::uint64_t c = 0;
        if (!(ls >> idx >> comma >> c) || comma != ',') throw usage_error("counts CSV: malformed row '" + line + "'");
        if (idx != r.counts.size()) throw usage_error("counts CSV: outcomes must be consecutive from 0");
        r.counts.push_back(c);
        r.shots += c;
    }
    return r;
}

}  // namespace qnnlab::sampler
