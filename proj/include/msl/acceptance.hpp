#pragma once

#include "msl/rng.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace msl::acceptance {

struct CriterionResult {
  int index = 0;
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
};

struct SuiteOptions {
  std::uint64_t seed = kDefaultSeed;
  /// Scales every floating-point tolerance in the battery; values below 1
  /// tighten the checks.
  double tolerance_scale = 1.0;
};

/// Runs the full battery of closed-form, constructive and Monte Carlo
/// checks. Deterministic for a fixed seed.
std::vector<CriterionResult> run_all(const SuiteOptions& options = {});

bool all_passed(const std::vector<CriterionResult>& results);

/// One line per criterion: "PASS  3 capacity-monotonicity  (0.12s)  detail".
std::string format_line(const CriterionResult& r);

}  // namespace msl::acceptance
