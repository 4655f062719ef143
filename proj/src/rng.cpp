#include "msl/rng.hpp"

#include <cmath>

namespace msl {

double Rng::gaussian() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u1 = uniform01();
  if (u1 <= 0.0) u1 = 0x1.0p-53;
  double u2 = uniform01();
  double radius = std::sqrt(-2.0 * std::log(u1));
  double angle = 6.283185307179586476925286766559 * u2;
  spare_ = radius * std::sin(angle);
  has_spare_ = true;
  return radius * std::cos(angle);
}

static std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t derive_stream(const RNGSeed& seed, std::uint64_t index) {
  std::uint64_t label_hash = 1469598103934665603ULL;  // FNV-1a
  for (unsigned char c : seed.label) {
    label_hash ^= c;
    label_hash *= 1099511628211ULL;
  }
  std::uint64_t v = mix64(seed.seed ^ label_hash);
  v = mix64(v + index);
  return mix64(v);
}

}  // namespace msl
