#ifndef PACEFORGE_ERRORS_HPP
#define PACEFORGE_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace paceforge {

struct DimensionError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct DomainError : std::domain_error {
  using std::domain_error::domain_error;
};

struct NumericError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct InvalidParamsError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Filter with lambda_0 = 0; the Toeplitz weight matrix is singular.
struct SingularFilterError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// The characteristic quadratic has complex roots; closed-form inverse
// sequences do not apply and the caller should fall back to toeplitz_inverse.
struct RealRootsViolatedError : std::domain_error {
  using std::domain_error::domain_error;
};

// a_t >= 0 hypothesis of the regret bound fails.
struct HypothesisViolatedError : std::domain_error {
  using std::domain_error::domain_error;
};

// Fixed-point equation for the dual-variable ceiling has no positive
// solution; the step-size must be reduced.
struct StepSizeTooLargeError : std::domain_error {
  using std::domain_error::domain_error;
};

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace paceforge

#endif
