#pragma once

#include <stdexcept>
#include <string>

namespace pdeiss {

/// Base class for all toolkit errors.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Malformed scenario files, bad expressions, out-of-range parameters.
struct ConfigError : Error {
  using Error::Error;
};

/// A structural hypothesis fails: sign conditions on the boundary
/// constants, a nonpositive first eigenvalue, or no admissible positive
/// weight function exists at the requested decay rate.
struct HypothesisError : Error {
  using Error::Error;
};

/// Divergence, singular linear systems, eigensolver breakdown.
struct NumericalError : Error {
  using Error::Error;
};

}  // namespace pdeiss
