#pragma once

#include <stdexcept>
#include <string>

namespace riesz {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A KernelSpec, measure or region violates its construction invariants.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Potential evaluated at a point charged by both signs (+inf - inf).
class IndeterminateValue : public Error {
 public:
  using Error::Error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

/// Two nodes closer than the distinct-support tolerance.
class DegenerateNodes : public Error {
 public:
  using Error::Error;
};

/// Inversion of the inversion center itself.
class CenterInversion : public Error {
 public:
  using Error::Error;
};

/// Kelvin transform of a measure that charges the inversion center.
class CenterCharged : public Error {
 public:
  using Error::Error;
};

class IllConditioned : public Error {
 public:
  using Error::Error;
};

/// A cone-constrained solve did not meet its KKT tolerance.
class SolverFailure : public Error {
 public:
  using Error::Error;
};

class PointOutsideDomain : public Error {
 public:
  using Error::Error;
};

class NodesOutsideDomain : public Error {
 public:
  using Error::Error;
};

/// Scenario file does not match the schema; the message names the key.
class SchemaError : public Error {
 public:
  using Error::Error;
};

}  // namespace riesz
