#pragma once

#include <stdexcept>
#include <string>

namespace drcr {

// Base class for all errors raised by this library.
struct Error : std::runtime_error {
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Prediction intervals are not nested or accuracies are not monotone.
struct HierarchyViolation : Error {
  using Error::Error;
};

// A numeric argument is outside its admissible range.
struct RangeError : Error {
  using Error::Error;
};

// An interval with an infinite upper endpoint was requested.
struct UnboundedInterval : Error {
  using Error::Error;
};

// A shell that must carry positive probability mass contains no day.
struct EmptyShellMass : Error {
  using Error::Error;
};

// Input data violates the constraints it was declared to satisfy.
struct InfeasibleInput : Error {
  using Error::Error;
};

namespace lp {

// The solver lost feasibility or could not certify its result.
struct NumericalFailure : Error {
  using Error::Error;
};

}  // namespace lp

}  // namespace drcr
