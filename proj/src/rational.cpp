#include "msl/rational.hpp"

#include <cstdio>
#include <stdexcept>

namespace msl {

Rational rational_from_string(const std::string& text) {
  mpq_class q;
  if (q.set_str(text, 10) != 0) {
    throw std::invalid_argument("not a rational: '" + text + "'");
  }
  if (q.get_den() == 0) {
    throw std::invalid_argument("zero denominator: '" + text + "'");
  }
  q.canonicalize();
  return q;
}

std::string to_fraction_string(const Rational& r) { return r.get_str(); }

std::string to_decimal_string(const Rational& r) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.15g", r.get_d());
  return buf;
}

}  // namespace msl
