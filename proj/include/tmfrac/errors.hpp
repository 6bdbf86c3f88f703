#pragma once

#include <stdexcept>
#include <string>

namespace tmfrac {

// Parameter outside the mathematical domain of an operation.
struct DomainError : std::domain_error {
    using std::domain_error::domain_error;
};

// Non-finite integrand value met during quadrature; message carries the radius.
struct EvaluationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Grid cannot resolve a requested feature; message names what is needed.
struct ResolutionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Profile violates an active norm constraint beyond tolerance.
struct ConstraintError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Parameters outside the regime an operation is stated for.
struct RegimeError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace tmfrac
