#pragma once

#include <stdexcept>
#include <string>

namespace weylscope {

// Error categories. The CLI maps them onto exit codes.
struct DimensionError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct DomainError : std::domain_error {
  using std::domain_error::domain_error;
};

// A closed form was asked for outside the regimes it covers.
struct UnresolvedRegime : DomainError {
  using DomainError::DomainError;
};

struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Input is well formed but fails a mathematical precondition (e.g. not hyperbolic).
struct RefusedError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace weylscope
