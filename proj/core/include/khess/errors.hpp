#pragma once

#include <stdexcept>
#include <string>

namespace khess {

/// Base class for every error raised by the library. `category()` is a stable
/// machine-readable tag used by the CLI to pick exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  virtual const char* category() const noexcept = 0;
};

/// Invalid problem parameters (n, k, q) outside the admissible set.
class ParameterDomainError : public Error {
 public:
  using Error::Error;
  const char* category() const noexcept override { return "parameter_domain"; }
};

/// A function argument outside its domain (negative radius, s <= 0, ...).
class DomainError : public Error {
 public:
  using Error::Error;
  const char* category() const noexcept override { return "domain"; }
};

/// Parameters are valid but the requested operation needs a regime
/// hypothesis (kappa < n, q < q*, ...) that does not hold.
class RegimeError : public Error {
 public:
  using Error::Error;
  const char* category() const noexcept override { return "regime"; }
};

/// Integration failure, inconclusive tail, bisection non-convergence.
class NumericalError : public Error {
 public:
  using Error::Error;
  const char* category() const noexcept override { return "numerical"; }
};

/// A requested integral does not converge (e.g. L^p norm of a slow profile
/// with p * kappa0 <= n).
class DivergenceError : public Error {
 public:
  using Error::Error;
  const char* category() const noexcept override { return "divergence"; }
};

}  // namespace khess
