#pragma once

#include <stdexcept>
#include <string>

namespace bicons {

/// Malformed input: bad grid bounds, schema violations, unknown builtins.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A computation could not proceed: degenerate metric, non-convergence,
/// exhausted jet order, singular linear systems.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Two routes to the same quantity disagree beyond their truncation budget.
class ConsistencyError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

}  // namespace bicons
