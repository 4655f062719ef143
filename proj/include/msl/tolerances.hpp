#pragma once

namespace msl {

/// Single knob set for every floating-point comparison in the library.
/// `metric` guards |.|_2 statements, `algebraic` guards structural
/// identities (unitarity, projections, homomorphism residuals).
struct Tolerances {
  double metric = 1e-8;
  double algebraic = 1e-10;
};

/// Process-wide tolerance record. Initialized once from the MSL_TOL
/// environment variable when set (value becomes `metric`, and `algebraic`
/// is scaled down by 100). Mutate only before launching concurrent work.
Tolerances& tolerances();

}  // namespace msl
