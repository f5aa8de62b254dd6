#pragma once

#include <stdexcept>
#include <string>

namespace gyroball {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Invalid parameters or configuration (CLI exit code 2).
class ConfigError : public Error {
public:
  using Error::Error;
};

/// An input lies outside the domain of an operation (coordinate poles, k = 0, ...).
class DomainError : public Error {
public:
  using Error::Error;
};

/// Argument too close to a lattice point of a Weierstrass function.
class PoleError : public DomainError {
public:
  using DomainError::DomainError;
};

/// The quartic admits no real motion from the requested starting point.
class NoRealMotion : public DomainError {
public:
  using DomainError::DomainError;
};

/// Integrator or root finder could not make progress (CLI exit code 4).
class NumericalFailure : public Error {
public:
  using Error::Error;
};

} // namespace gyroball
