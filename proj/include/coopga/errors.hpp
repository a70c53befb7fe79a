// Exception types shared across the library.

#pragma once

#include <stdexcept>
#include <string>

namespace coopga {

// Base class for all library errors.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Logarithm requested at (or within tolerance of) the pi-rotation branch cut.
struct BranchError : Error {
  using Error::Error;
};

// A transform argument failed its unit-norm contract.
struct NonUnitMotorError : Error {
  using Error::Error;
};

// Mismatched joint-vector or matrix dimensions.
struct DimensionError : Error {
  using Error::Error;
};

// Malformed robot description or scenario configuration.
struct ConfigError : Error {
  using Error::Error;
};

// Cooperative pointpair degenerated below the separation threshold.
struct SingularityError : Error {
  using Error::Error;
};

// Filesystem failure (missing input, unwritable output).
struct IoError : Error {
  using Error::Error;
};

}  // namespace coopga
