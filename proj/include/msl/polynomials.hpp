#pragma once

#include <complex>
#include <stdexcept>
#include <vector>

namespace msl {

/// Polynomial in noncommuting variables: a sum of coefficient-weighted words
/// over generator indices. The empty word is the constant term.
struct NCPolynomial {
  struct Term {
    std::complex<double> coeff;
    std::vector<int> word;
  };

  int arity = 0;
  std::vector<Term> terms;

  NCPolynomial() = default;
  NCPolynomial(int arity_, std::vector<Term> terms_) : arity(arity_), terms(std::move(terms_)) {
    for (const auto& t : terms) {
      for (int g : t.word) {
        if (g < 0 || g >= arity) throw std::invalid_argument("word index out of arity");
      }
    }
  }

  static NCPolynomial variable(int index, int arity) {
    return NCPolynomial(arity, {{1.0, {index}}});
  }

  static NCPolynomial constant(std::complex<double> c, int arity) {
    return NCPolynomial(arity, {{c, {}}});
  }
};

/// Dense single-variable polynomial in the monomial basis, ascending degree.
struct Polynomial {
  std::vector<double> coeffs;

  int degree() const { return static_cast<int>(coeffs.size()) - 1; }

  double operator()(double t) const {
    double acc = 0.0;
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * t + *it;
    return acc;
  }
};

/// Chebyshev-basis polynomial on [lo, hi]; evaluation by Clenshaw recurrence.
/// coeffs[0] multiplies T_0 directly (no halving convention).
struct ChebyshevPolynomial {
  double lo = -1.0;
  double hi = 1.0;
  std::vector<double> coeffs;

  int degree() const { return static_cast<int>(coeffs.size()) - 1; }

  double operator()(double t) const {
    if (coeffs.empty()) return 0.0;
    double s = (2.0 * t - (lo + hi)) / (hi - lo);
    double b1 = 0.0, b2 = 0.0;
    for (std::size_t j = coeffs.size() - 1; j >= 1; --j) {
      double b0 = coeffs[j] + 2.0 * s * b1 - b2;
      b2 = b1;
      b1 = b0;
    }
    return coeffs[0] + s * b1 - b2;
  }
};

}  // namespace msl
