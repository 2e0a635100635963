#pragma once

#include <stdexcept>
#include <string>

namespace qnnlab {

/// Argument outside the mathematical domain of an operation.
class domain_error : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Caller misuse: mismatched sizes, empty inputs, scale guards.
class usage_error : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Iterative or adaptive routine gave up; carries its best estimate.
class non_convergence : public std::runtime_error {
public:
    non_convergence(const std::string& what, double estimate, double error_estimate)
        : std::runtime_error(what), estimate_(estimate), error_estimate_(error_estimate) {}

    double estimate() const noexcept { return estimate_; }
    double error_estimate() const noexcept { return error_estimate_; }

private:
    double estimate_;
    double error_estimate_;
};

/// Kraus operators failing the completeness relation.
class invalid_channel : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Least-squares design without full column rank.
class rank_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An operation that cannot be inverted (e.g. zero fidelity factor).
class non_invertible : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace qnnlab
