#pragma once

#include <stdexcept>
#include <string>

namespace harmwave {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A requested size does not fit the index type.
class CapacityError : public Error {
 public:
  using Error::Error;
};

/// Invalid user-supplied parameter or configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Geometric input that cannot be integrated (zero-area triangle, bad index).
class GeometryError : public Error {
 public:
  using Error::Error;
};

/// A linear solve failed. Carries the last relative residual and the number of
/// iterations spent (zero for direct factorizations).
class SolverError : public Error {
 public:
  SolverError(const std::string& what, double residual = 0.0, int iterations = 0)
      : Error(what), residual_(residual), iterations_(iterations) {}

  double residual() const noexcept { return residual_; }
  int iterations() const noexcept { return iterations_; }

 private:
  double residual_;
  int iterations_;
};

/// A relative error was requested against a reference of zero norm.
class UndefinedErrorMetric : public Error {
 public:
  using Error::Error;
};

}  // namespace harmwave
