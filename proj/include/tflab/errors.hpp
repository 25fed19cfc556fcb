#pragma once

#include <stdexcept>
#include <string>

namespace tflab {

/// Base class for all library errors. The CLI maps subclasses to exit codes.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Invalid argument outside a function's stated domain.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Quadrature budget exceeded, eigensolver failure, divergent integral, ...
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// A theorem hypothesis does not hold for the requested inputs
/// (beta < 1/2, s < 1, eta > 1 where required, h < 1, empty regime window).
class HypothesisError : public Error {
 public:
  using Error::Error;
};

/// Sampled-data problems: grid mismatch, Nyquist violation, missing coverage.
class GridError : public Error {
 public:
  using Error::Error;
};

/// Malformed experiment configuration or input file.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace tflab
