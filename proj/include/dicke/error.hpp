#pragma once

#include <stdexcept>
#include <string>

namespace dicke {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid user input: bad parameter values, unknown configuration keys.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// A phase-space point outside the Bloch disk, or too close to its rim.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Numerical failure: integration blow-up, solver breakdown, non-convergence.
class NumericalError : public Error {
 public:
  using Error::Error;
};

}  // namespace dicke
