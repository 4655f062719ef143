#include "msl/tolerances.hpp"

#include <cstdlib>
#include <string>

namespace msl {

static Tolerances make_initial() {
  Tolerances t;
  if (const char* env = std::getenv("MSL_TOL")) {
    try {
      double v = std::stod(env);
      if (v > 0) {
        t.metric = v;
        t.algebraic = v * 1e-2;
      }
    } catch (...) {
      // ignore malformed overrides, keep defaults
    }
  }
  return t;
}

Tolerances& tolerances() {
  static Tolerances t = make_initial();
  return t;
}

}  // namespace msl
