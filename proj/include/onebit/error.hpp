#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace onebit {

enum class ErrorKind {
  Domain,
  Validation,
  Numeric,
  Saturation,
  Divergence,
  BoundedGrowth,
  Fit,
  Solver,
  Infeasible,
  Io,
  Config,
};

std::string_view to_string(ErrorKind kind) noexcept;

/// Base of every error raised by the library. `kind()` is stable and is what
/// the CLI reports in its machine-readable error record.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

class DomainError : public Error {
 public:
  explicit DomainError(const std::string& m) : Error(ErrorKind::Domain, m) {}
};

class ValidationError : public Error {
 public:
  explicit ValidationError(const std::string& m) : Error(ErrorKind::Validation, m) {}
};

class NumericError : public Error {
 public:
  explicit NumericError(const std::string& m) : Error(ErrorKind::Numeric, m) {}
};

/// A sign mean reached +-1, so Q^-1 of the mean-sign inversion is unbounded.
class SaturationError : public Error {
 public:
  SaturationError(const std::string& m, std::size_t index)
      : Error(ErrorKind::Saturation, m), index_(index) {}
  std::size_t index() const noexcept { return index_; }

 private:
  std::size_t index_;
};

/// A sign mean of exactly zero with d != 0: the implied power is infinite.
class DivergenceError : public Error {
 public:
  DivergenceError(const std::string& m, std::size_t index)
      : Error(ErrorKind::Divergence, m), index_(index) {}
  std::size_t index() const noexcept { return index_; }

 private:
  std::size_t index_;
};

/// exp(alpha^2 / 4 beta) exceeded the growth ceiling at `theta()`.
class BoundedGrowthError : public Error {
 public:
  BoundedGrowthError(const std::string& m, double theta, double exponent)
      : Error(ErrorKind::BoundedGrowth, m), theta_(theta), exponent_(exponent) {}
  double theta() const noexcept { return theta_; }
  double exponent() const noexcept { return exponent_; }

 private:
  double theta_;
  double exponent_;
};

class FitError : public Error {
 public:
  FitError(const std::string& m, std::size_t piece)
      : Error(ErrorKind::Fit, m), piece_(piece) {}
  std::size_t piece() const noexcept { return piece_; }

 private:
  std::size_t piece_;
};

class SolverError : public Error {
 public:
  explicit SolverError(const std::string& m) : Error(ErrorKind::Solver, m) {}
};

class InfeasibleError : public Error {
 public:
  explicit InfeasibleError(const std::string& m) : Error(ErrorKind::Infeasible, m) {}
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& m) : Error(ErrorKind::Io, m) {}
};

class ConfigError : public Error {
 public:
  ConfigError(const std::string& path, const std::string& m)
      : Error(ErrorKind::Config, path + ": " + m), path_(path) {}
  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

}  // namespace onebit
