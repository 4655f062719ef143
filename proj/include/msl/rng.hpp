#pragma once

#include <complex>
#include <cstdint>
#include <random>
#include <string>

namespace msl {

inline constexpr std::uint64_t kDefaultSeed = 0x6d736c2d6c616221ULL;

/// Reproducibility handle: identical (seed, label, stream index) always
/// yields identical draws, so per-trial streams can be derived up front and
/// consumed in any order.
struct RNGSeed {
  std::uint64_t seed = kDefaultSeed;
  std::string label;
};

/// Deterministic generator. Gaussian variates use Box-Muller on top of the
/// raw engine stream so results do not depend on the standard library's
/// distribution internals.
class Rng {
 public:
  explicit Rng(std::uint64_t state) : eng_(state) {}

  std::uint64_t next_u64() { return eng_(); }

  /// Uniform on [0, 1) with 53-bit resolution.
  double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double a, double b) { return a + (b - a) * uniform01(); }

  /// Standard normal.
  double gaussian();

  /// Complex normal with E|z|^2 = 1.
  std::complex<double> complex_gaussian() {
    return {gaussian() * 0.7071067811865476, gaussian() * 0.7071067811865476};
  }

 private:
  std::mt19937_64 eng_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

/// Mixes (seed, label, index) into an engine state.
std::uint64_t derive_stream(const RNGSeed& seed, std::uint64_t index);

inline Rng derive_rng(const RNGSeed& seed, std::uint64_t index) {
  return Rng(derive_stream(seed, index));
}

}  // namespace msl
