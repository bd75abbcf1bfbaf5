#pragma once

#include <stdexcept>
#include <string>

namespace lomd {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Point outside the closed domain of a geometry or problem.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Point on a boundary where the regularizer has no subgradient.
class ProxDomainError : public DomainError {
 public:
  using DomainError::DomainError;
};

class NumericalError : public Error {
 public:
  using Error::Error;
};

/// D(x*, X_t) crossed the blow-up guard.
class DivergenceError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class PreconditionError : public Error {
 public:
  using Error::Error;
};

class InsufficientData : public Error {
 public:
  using Error::Error;
};

class NonPositiveValues : public Error {
 public:
  using Error::Error;
};

/// Malformed key, unknown option, or invalid configuration value.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace lomd
