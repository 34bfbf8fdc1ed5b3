#pragma once

#include <stdexcept>
#include <string>

namespace critsob {

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// The requested integral is infinite (detected analytically or by refinement).
class DivergenceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Adaptive quadrature hit its subdivision cap before meeting the tolerance.
class ToleranceNotMet : public std::runtime_error {
public:
    ToleranceNotMet(const std::string& what, double estimate, double error)
        : std::runtime_error(what), estimate_(estimate), error_(error) {}

    double estimate() const noexcept { return estimate_; }
    double error() const noexcept { return error_; }

private:
    double estimate_;
    double error_;
};

/// Two closed forms that must agree do not (signals a special-function bug).
class ConsistencyError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// Input outside what an operation supports (e.g. overlapping supports).
class UnsupportedInput : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A computed value cannot be trusted (methods disagree, or divergence).
class UnreliableValue : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace critsob
