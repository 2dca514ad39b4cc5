#pragma once

#include <stdexcept>
#include <string>

namespace gqarch {

// Invalid argument or parameter value (bad domain, infeasible box, bad mode).
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Bad command line or configuration: unknown or missing keys, unparsable values.
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Parameter vector violates the L2 stationarity condition.
class InfeasibleError : public DomainError {
 public:
  using DomainError::DomainError;
};

// Malformed or missing input data (series files, config files).
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Numerical breakdown: nonpositive variance, singular information matrix.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace gqarch
