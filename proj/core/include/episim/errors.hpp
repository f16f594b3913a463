#pragma once

#include <stdexcept>
#include <string>

namespace episim {

/// Base class for all errors raised by this library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or out-of-contract input (bad file, negative weight,
/// length mismatch, state far outside [0,1]^n).
class InvalidInput : public Error {
 public:
  using Error::Error;
};

/// A request that is well-formed but cannot be satisfied: infeasible
/// control gains, invalid bisection bracket, uncontrollable scenario.
class InfeasibleRequest : public Error {
 public:
  using Error::Error;
};

/// Numerical machinery failed to meet its own tolerance: non-convergent
/// power iteration, monodromy spectrum spread, certificate verification.
class NumericalBreakdown : public Error {
 public:
  using Error::Error;
};

}  // namespace episim
