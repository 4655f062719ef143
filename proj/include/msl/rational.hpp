#pragma once

#include <gmpxx.h>

#include <string>

namespace msl {

/// Exact rational scalar. Trace weights and the closed-form dimension
/// invariants are computed in this type end to end; doubles only enter
/// through matrix entries.
using Rational = mpq_class;

/// num/den in canonical form. The two-argument mpq_class constructor does
/// not reduce, so always build fractions through this.
inline Rational make_rational(long num, long den) {
  Rational r(num, den);
  r.canonicalize();
  return r;
}

/// Parses "p/q" or "p" (optionally signed). Throws std::invalid_argument on
/// malformed input or zero denominator.
Rational rational_from_string(const std::string& text);

/// Canonical "p/q" form ("p" when q == 1).
std::string to_fraction_string(const Rational& r);

/// Decimal rendering with 15 significant digits.
std::string to_decimal_string(const Rational& r);

inline double to_double(const Rational& r) { return r.get_d(); }

}  // namespace msl
