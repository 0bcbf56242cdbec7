#pragma once

#include <stdexcept>
#include <string>

namespace trudlab {

/// Argument outside the domain of a formula (r < 0, t <= 0, r > R, ...).
struct DomainError : std::domain_error {
    using std::domain_error::domain_error;
};

/// Operation not defined for the requested exponent.
struct Unsupported : std::logic_error {
    using std::logic_error::logic_error;
};

/// A construction constraint failed. `bound` is the admissible limit when one exists.
struct ConstraintViolation : std::invalid_argument {
    ConstraintViolation(const std::string& what, double bound_value)
        : std::invalid_argument(what), bound(bound_value) {}
    double bound;
};

/// Numerical failure inside a solver (divergence, bracket not found, underflow).
struct SolverError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Grid too small or two grids that should match do not.
struct GridError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

}  // namespace trudlab
