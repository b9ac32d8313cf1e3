#pragma once

#include <cmath>

namespace gridlodf {

// Relative factor behind every "numerically zero" decision. Defaults to 1e-9;
// the GRIDLODF_ZERO_TOL environment variable overrides it (read once).
double zero_tolerance_factor();

// |x| <= factor * (1 + scale), where scale is usually a matrix infinity norm.
inline bool is_numerical_zero(double x, double scale) {
  return std::abs(x) <= zero_tolerance_factor() * (1.0 + scale);
}

inline double zero_threshold(double scale) { return zero_tolerance_factor() * (1.0 + scale); }

}  // namespace gridlodf
