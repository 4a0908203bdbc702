#pragma once

#include <stdexcept>
#include <string>

namespace riemcorr {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Logarithm map requested at or beyond the cut locus of the base point.
struct CutLocusError : Error {
  using Error::Error;
};

// Tangent vector used at a point other than its base.
struct BaseMismatchError : Error {
  using Error::Error;
};

// A sample point lies outside the geodesic ball where the tangent-space
// estimators are defined.
struct ComparisonDomainError : Error {
  explicit ComparisonDomainError(const std::string& msg, long index = -1)
      : Error(msg), offending_index(index) {}
  long offending_index;
};

// Fréchet solver failed to reach the gradient tolerance.
struct ConvergenceError : Error {
  using Error::Error;
};

// Input data admit no unique Fréchet mean (e.g. an antipodal point pair).
struct NonUniqueMeanError : Error {
  using Error::Error;
};

// Zero marginal variance: correlation undefined.
struct DegenerateVarianceError : Error {
  using Error::Error;
};

}  // namespace riemcorr
