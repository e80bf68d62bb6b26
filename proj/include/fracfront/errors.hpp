#pragma once

#include <stdexcept>
#include <string>

namespace fracfront {

// Bad argument to an operation (outside its stated domain).
struct DomainError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// A declared invariant of a type or operation does not hold.
struct InvariantError : std::logic_error {
    using std::logic_error::logic_error;
};

// Configuration / input-file problem. `field` carries the offending path
// (e.g. "kernel.s") so CLI diagnostics can name it.
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& field_path, const std::string& what_msg)
        : std::runtime_error(field_path + ": " + what_msg), field(field_path) {}
    std::string field;
};

// A quadrature failed to reach the requested tolerance within its budget.
// Carries the best estimate and the achieved error bound.
struct ToleranceError : std::runtime_error {
    ToleranceError(const std::string& what_msg, double estimate_, double error_bound_)
        : std::runtime_error(what_msg), estimate(estimate_), error_bound(error_bound_) {}
    double estimate;
    double error_bound;
};

// Explicit time stepping detected an overshoot beyond round-off.
struct StabilityError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A search (e.g. for a certificate onset time) exhausted its range.
struct NotFoundError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Sub-solution / simulation alignment failed (no admissible shift).
struct AlignmentError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A run outgrew its memory / node budget.
struct ResourceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace fracfront
