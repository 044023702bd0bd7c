#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace decaylab {

// Base of every failure raised by the library. The CLI maps subclasses onto
// exit codes, so keep the hierarchy shallow.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Invalid argument or precondition violation (e.g. observation point behind
// the source, empty table, unsupported derivative order).
class DomainError : public Error {
public:
  using Error::Error;
};

// A numerical procedure ran out of budget. Carries the best estimate so far.
class ConvergenceError : public Error {
public:
  ConvergenceError(const std::string& what, std::complex<double> best_estimate,
                   double error_estimate)
      : Error(what), best_(best_estimate), error_(error_estimate) {}

  std::complex<double> best_estimate() const noexcept { return best_; }
  double error_estimate() const noexcept { return error_; }

private:
  std::complex<double> best_;
  double error_;
};

// Integrand produced NaN/Inf.
class IntegrandError : public Error {
public:
  IntegrandError(const std::string& what, double abscissa)
      : Error(what), abscissa_(abscissa) {}
  double abscissa() const noexcept { return abscissa_; }

private:
  double abscissa_;
};

// Truncated tail of a semi-infinite integral is not provably below tolerance.
class TailBoundError : public ConvergenceError {
public:
  using ConvergenceError::ConvergenceError;
};

// Quantity undefined at a zero of the Jost function (zero-energy resonance).
class NodeError : public DomainError {
public:
  using DomainError::DomainError;
};

// Configuration / scenario rejected before any computation.
class ConfigError : public Error {
public:
  ConfigError(const std::string& what, int line = 0, std::string field = {})
      : Error(what), line_(line), field_(std::move(field)) {}
  int line() const noexcept { return line_; }
  const std::string& field() const noexcept { return field_; }

private:
  int line_;
  std::string field_;
};

class IoError : public Error {
public:
  using Error::Error;
};

}  // namespace decaylab
