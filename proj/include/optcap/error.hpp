#pragma once

#include <stdexcept>
#include <string>

namespace optcap {

// Base class for every failure raised by the library. The CLI maps the
// concrete subclasses onto process exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Argument outside the mathematical domain of a function.
class DomainError : public Error {
 public:
  using Error::Error;
};

// Inconsistent or malformed configuration (geometry, grids, thresholds).
class ConfigError : public Error {
 public:
  using Error::Error;
};

// SVD or root-finding failure.
class NumericalError : public Error {
 public:
  using Error::Error;
};

// A closed-form gain was requested outside the Fresnel regime it holds in.
class RegimeError : public Error {
 public:
  using Error::Error;
};

// Transmissivity above one beyond roundoff; the discretization is inconsistent.
class PhysicalityError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

}  // namespace optcap
