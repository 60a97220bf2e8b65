#pragma once

#include <stdexcept>
#include <string>

namespace pham {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct InvalidArgument : Error {
  using Error::Error;
};

// Raised when an exactness assertion fails; always an implementation bug.
struct InternalError : Error {
  using Error::Error;
};

struct NonConvergence : Error {
  NonConvergence(const std::string& what, double residual_)
      : Error(what), residual(residual_) {}
  double residual;
};

struct PathCollision : Error {
  using Error::Error;
};

struct NewtonDivergence : Error {
  using Error::Error;
};

// The separable start points are too close for the requested tail at this epsilon.
struct ClusterOverlap : Error {
  using Error::Error;
};

struct UnclassifiedFactor : Error {
  UnclassifiedFactor(const std::string& what, double slope_)
      : Error(what), slope(slope_) {}
  double slope;
};

}  // namespace pham
