#pragma once

#include <stdexcept>
#include <string>

namespace shellflow {

class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Invalid scenario, profile or run configuration.
class ConfigError : public Error {
public:
  using Error::Error;
};

/// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
public:
  using Error::Error;
};

/// Evaluation exactly at a singular point (e.g. d/dx of a map at x = 1).
class SingularityError : public DomainError {
public:
  using DomainError::DomainError;
};

/// Gravitational layer asked for a state beyond its arrival at the center.
class PastCollapseError : public DomainError {
public:
  PastCollapseError(const std::string& what, double endpoint)
      : DomainError(what), endpoint_(endpoint) {}
  /// Map value F(0,y) or, when thrown from time-domain calls, the arrival time.
  double endpoint() const noexcept { return endpoint_; }

private:
  double endpoint_;
};

/// Lagrangian Jacobian is nonpositive: characteristics have crossed.
class PastShockError : public DomainError {
public:
  PastShockError(const std::string& what, double r0, double jac)
      : DomainError(what), r0_(r0), jac_(jac) {}
  double r0() const noexcept { return r0_; }
  double jac() const noexcept { return jac_; }

private:
  double r0_;
  double jac_;
};

/// Relativistic gravitational sphere with eta^2 >= 1.
class QuasiRelativismError : public DomainError {
public:
  QuasiRelativismError(const std::string& what, double r, double eta_sq)
      : DomainError(what), r_(r), eta_sq_(eta_sq) {}
  double r() const noexcept { return r_; }
  double eta_sq() const noexcept { return eta_sq_; }

private:
  double r_;
  double eta_sq_;
};

class ToleranceError : public Error {
public:
  ToleranceError(const std::string& what, double best_estimate, double error_estimate)
      : Error(what), best_(best_estimate), err_(error_estimate) {}
  double best_estimate() const noexcept { return best_; }
  double error_estimate() const noexcept { return err_; }

private:
  double best_;
  double err_;
};

class NotApplicableError : public Error {
public:
  using Error::Error;
};

}  // namespace shellflow
