#pragma once

#include <stdexcept>
#include <string>

namespace chemauto {

// Root of the library's exception hierarchy.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad caller-supplied data: words outside the alphabet, negative
// concentrations, missing recipe entries, and the like.
class InputError : public Error {
 public:
  using Error::Error;
};

// Broken or incomplete configuration: missing thermodynamic constants,
// malformed recipe files, verdicts requested without calibration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Numerical machinery failed to meet its contract (root bracketing lost,
// integrator step-size underflow, quadrature on an empty window).
class NumericsError : public Error {
 public:
  using Error::Error;
};

// Two redundant readouts that must agree by construction disagreed; this
// always indicates an internal bug or a hand-edited state, never bad input.
class ConsistencyError : public Error {
 public:
  using Error::Error;
};

// Recipe tuning could not produce a usable operating point.
class TuningError : public Error {
 public:
  using Error::Error;
};

}  // namespace chemauto
