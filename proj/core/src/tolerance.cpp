#include "gridlodf/tolerance.hpp"

#include <cstdlib>
#include <string>

namespace gridlodf {

double zero_tolerance_factor() {
  static const double factor = [] {
    if (const char* env = std::getenv("GRIDLODF_ZERO_TOL"); env != nullptr && *env != '\0') {
      try {
        double value = std::stod(env);
        if (value > 0.0) return value;
      } catch (const std::exception&) {
      }
    }
    return 1e-9;
  }();
  return factor;
}

}  // namespace gridlodf
