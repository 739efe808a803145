#pragma once

#include <stdexcept>
#include <string>

namespace kgs {

/// Raised when a caller breaks an operation's precondition (wrong
/// representation, mismatched grids, non-dyadic labels, ...).
class ContractViolation : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

class UnsupportedDimension : public ContractViolation {
public:
    using ContractViolation::ContractViolation;
};

/// Zero denominators, zero inputs to slope fits and similar.
class DegenerateInput : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// The first-order state does not come from a real wave field.
class ConsistencyError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class IntegrationFailure : public std::runtime_error {
public:
    IntegrationFailure(const std::string& what, long step, double time)
        : std::runtime_error(what + " (step " + std::to_string(step) + ", t = " +
                             std::to_string(time) + ")"),
          step_(step),
          time_(time) {}

    long step() const noexcept { return step_; }
    double time() const noexcept { return time_; }

private:
    long step_;
    double time_;
};

}  // namespace kgs
