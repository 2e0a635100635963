#pragma once

// Target functions: Black-Scholes put prices, Gaussian densities, payoffs,
// and the input normalisation / output scaling used for training.

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <span>

#include "qnnlab/errors.hpp"
#include "qnnlab/numerics.hpp"

namespace qnnlab::finance {

struct MarketScenario {
    double spot = 1.0;
    double strike = 1.0;
    double maturity = 1.0;
    double rate = 0.0;
    double vol = 0.2;

    std::array<double, 5> as_array() const { return {spot, strike, maturity, rate, vol}; }
    static MarketScenario from_array(const std::array<double, 5>& v) {
        return {v[0], v[1], v[2], v[3], v[4]};
    }
};

inline void validate(const MarketScenario& s) {
    auto positive = [](double v) { return v > 0.0 && std::isfinite(v); };
    if (!positive(s.spot) || !positive(s.strike) || !positive(s.maturity) || !positive(s.vol) ||
        !std::isfinite(s.rate)) {
        throw domain_error("market scenario: spot, strike, maturity and vol must be > 0");
    }
}

/// zero_rate evaluates K N(-d-) - S N(-d+) with r ignored; discounted is the
/// textbook r-discounted put.
enum class Discounting { zero_rate, discounted };

inline double bs_put_price(const MarketScenario& s, Discounting mode = Discounting::zero_rate) {
    validate(s);
    const double vol = s.vol * std::sqrt(s.maturity);
    const double r = mode == Discounting::discounted ? s.rate : 0.0;
    const double d_plus = (std::log(s.spot / s.strike) + r * s.maturity) / vol + 0.5 * vol;
    const double d_minus = d_plus - vol;
    const double df = std::exp(-r * s.maturity);
    const double price = s.strike * df * numerics::norm_cdf(-d_minus) - s.spot * numerics::norm_cdf(-d_plus);
    return std::clamp(price, 0.0, s.strike * df);
}

inline double gaussian_density(double x, double sigma) {
    if (!(sigma > 0.0)) throw domain_error("gaussian_density: sigma must be > 0");
    return std::exp(-0.5 * x * x / (sigma * sigma)) / (sigma * std::sqrt(2.0 * std::numbers::pi));
}

inline double put_payoff(double x, double strike) { return std::max(strike - x, 0.0); }

/// (K - x)^+ 1{x >= K_low}.
inline double truncated_put_payoff(double x, double strike, double strike_low) {
    if (!(strike_low < strike)) throw domain_error("truncated_put: K_low must be < K");
    return x >= strike_low ? put_payoff(x, strike) : 0.0;
}

/// Per-coordinate [min, max] box over (S, K, T, r, sigma).
struct NormalisationBox {
    std::array<double, 5> lo{};
    std::array<double, 5> hi{};

    void validate() const {
        for (std::size_t i = 0; i < 5; ++i) {
            if (!(hi[i] > lo[i])) throw domain_error("normalisation box: max must exceed min");
        }
    }
};

/// Training box of the Black-Scholes experiments (spot-normalised units).
inline NormalisationBox default_bs_box() {
    return {{0.8, 0.9, 0.5, 0.02, 0.1}, {1.2, 1.1, 1.0, 0.05, 0.3}};
}

inline std::array<double, 5> normalise(const MarketScenario& s, const NormalisationBox& box) {
    box.validate();
    std::array<double, 5> out{};
    const auto v = s.as_array();
    for (std::size_t i = 0; i < 5; ++i) {
        out[i] = std::clamp((v[i] - box.lo[i]) / (box.hi[i] - box.lo[i]), 0.0, 1.0);
    }
    return out;
}

inline MarketScenario denormalise(const std::array<double, 5>& point, const NormalisationBox& box) {
    box.validate();
    std::array<double, 5> v{};
    for (std::size_t i = 0; i < 5; ++i) v[i] = box.lo[i] + point[i] * (box.hi[i] - box.lo[i]);
    return MarketScenario::from_array(v);
}

/// R = ceil(1.1 max_i P_i).
inline double scale_R(std::span<const double> prices) {
    if (prices.empty()) throw usage_error("scale_R: empty price sequence");
    const double top = *std::max_element(prices.begin(), prices.end());
    const auto r = numerics::snapped_ceil(1.1L * static_cast<long double>(top));
    return static_cast<double>(std::max<long long>(r, 1));
}

}  // namespace qnnlab::finance
