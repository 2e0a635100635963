#pragma once

// xoshiro256** with splitmix64 seeding. The standard-library distributions are
// implementation-defined, so uniforms and integer variates are derived here to
// keep runs identical across platforms.
//
// Stream splitting: stream(k) of a seed s is seeded from splitmix64 applied to
// s ^ (k * 0x9e3779b97f4a7c15 + 1). Parallel workers take distinct k.

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>

namespace qnnlab {

inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

class Rng {
public:
    using result_type = std::uint64_t;

    explicit Rng(std::uint64_t seed = 0) { reseed(seed); }

    static Rng stream(std::uint64_t seed, std::uint64_t index) {
        return Rng(seed ^ (index * 0x9e3779b97f4a7c15ULL + 1));
    }

    void reseed(std::uint64_t seed) {
        std::uint64_t sm = seed;
        for (auto& w : s_) w = splitmix64(sm);
    }

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

    result_type operator()() {
        const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    /// Uniform on [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

    /// Uniform on (0, 1].
    double uniform_pos() { return 1.0 - uniform(); }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Uniform integer in [0, n) by rejection.
    std::uint64_t below(std::uint64_t n) {
        if (n == 0) return 0;
        const std::uint64_t limit = max() - max() % n;
        std::uint64_t r;
        do r = (*this)();
        while (r >= limit);
        return r % n;
    }

    /// Standard normal by Box-Muller (one of the pair is discarded).
    double normal() {
        const double u = uniform_pos();
        const double v = uniform();
        return std::sqrt(-2.0 * std::log(u)) * std::cos(2.0 * std::numbers::pi * v);
    }

    /// Binomial(n, p) by counting geometric waiting times between successes.
    /// Cost is O(n min(p, 1-p)).
    std::uint64_t binomial(std::uint64_t n, double p) {
        if (n == 0 || p <= 0.0) return 0;
        if (p >= 1.0) return n;
        if (p > 0.5) return n - binomial(n, 1.0 - p);
        const double log_q = std::log1p(-p);
        std::uint64_t successes = 0;
        std::uint64_t position = 0;
        while (true) {
            // trials up to and including the next success
            const double gap = std::floor(std::log(uniform_pos()) / log_q) + 1.0;
            if (gap > static_cast<double>(n - position)) break;
            position += static_cast<std::uint64_t>(gap);
            ++successes;
            if (position >= n) break;
        }
        return successes;
    }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
    std::array<std::uint64_t, 4> s_{};
};

}  // namespace qnnlab
