#pragma once

#include <stdexcept>
#include <string>

namespace swaplab {

/// Experiment or object configuration is invalid (bad parameters, violated hypotheses).
struct ConfigError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// An argument lies outside the domain of an operation.
struct DomainError : std::domain_error {
  using std::domain_error::domain_error;
};

/// A structural invariant of an input or of internal state is broken.
struct InvariantError : std::logic_error {
  using std::logic_error::logic_error;
};

/// Request exceeds the desk-scale resource bounds.
struct ResourceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Two candidates compared exactly equal where almost-sure uniqueness was assumed.
struct TieError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A construction needed data beyond the grid it was given.
struct TruncationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Exact evaluation hit a zero denominator.
struct EvaluationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace swaplab
