#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace longnet {

/// Base for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad user input: malformed files, unknown statistic kinds, missing covariates.
/// The CLI maps this family to exit code 2.
class ConfigError : public Error {
 public:
  using Error::Error;
};

class InvalidNetwork : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

class InvalidDyad : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

/// Numerical failure in estimation or evaluation. The CLI maps this family to exit code 3.
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// A design column perfectly predicts the MPLE response.
class SeparationError : public NumericalError {
 public:
  SeparationError(std::string statistic, const std::string& what)
      : NumericalError(what), statistic_(std::move(statistic)) {}
  const std::string& statistic() const noexcept { return statistic_; }

 private:
  std::string statistic_;
};

/// An iterative solver ran out of iterations. Carries the last iterate.
class ConvergenceError : public NumericalError {
 public:
  ConvergenceError(const std::string& what, std::vector<double> last_iterate)
      : NumericalError(what), last_iterate_(std::move(last_iterate)) {}
  const std::vector<double>& last_iterate() const noexcept { return last_iterate_; }

 private:
  std::vector<double> last_iterate_;
};

class DerivativeSingularError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// ROC/PR requested on a target without both classes.
class UndefinedCurveError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class UndefinedTestError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// Parameter sampling could not find a non-degenerate draw.
class ScreeningExhaustedError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

}  // namespace longnet
