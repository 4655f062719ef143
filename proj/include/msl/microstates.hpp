#pragma once

#include "msl/algebra.hpp"
#include "msl/block_matrix.hpp"
#include "msl/embed.hpp"
#include "msl/rational.hpp"
#include "msl/rng.hpp"

#include <memory>
#include <vector>

namespace msl::microstates {

/// Microstate membership parameters: word-length cap m, moment tolerance
/// gamma, operator-norm cutoff R.
struct MicrostateSpec {
  int m = 1;
  double gamma = 1e-2;
  double radius = 1.0;

  MicrostateSpec(int m_, double gamma_, double radius_);
};

/// Target mixed moments phi(a_{j_1} ... a_{j_p}). Implementations are tracial
/// and *-compatible on their domain.
class MomentOracle {
 public:
  virtual ~MomentOracle() = default;
  virtual int arity() const = 0;
  virtual Complex moment(const std::vector<int>& word) const = 0;
};

/// Exact weighted-trace moments of concrete elements of a finite dimensional
/// algebra.
class AlgebraMomentOracle : public MomentOracle {
 public:
  AlgebraMomentOracle(algebra::FiniteDimAlgebra algebra, std::vector<BlockMatrix> elements);
  int arity() const override { return static_cast<int>(elements_.size()); }
  Complex moment(const std::vector<int>& word) const override;

 private:
  algebra::FiniteDimAlgebra algebra_;
  std::vector<BlockMatrix> elements_;
};

/// Moments of a single self-adjoint element with the given distribution.
class SpectralMeasureOracle : public MomentOracle {
 public:
  explicit SpectralMeasureOracle(algebra::SpectralMeasure mu) : mu_(std::move(mu)) {}
  int arity() const override { return 1; }
  Complex moment(const std::vector<int>& word) const override {
    return mu_.moment(static_cast<long>(word.size()));
  }

 private:
  algebra::SpectralMeasure mu_;
};

/// Mixed moments of freely independent standard semicircular elements:
/// non-crossing pair counts with weight 1/4 per pair.
class SemicircularOracle : public MomentOracle {
 public:
  explicit SemicircularOracle(int arity) : arity_(arity) {}
  int arity() const override { return arity_; }
  Complex moment(const std::vector<int>& word) const override;

 private:
  int arity_;
};

/// d-th moment of the standard semicircular distribution on [-1, 1]:
/// Catalan(d/2) / 4^{d/2} for even d, 0 for odd d.
Rational semicircular_moment(long d);

struct MembershipResult {
  bool member = false;
  std::vector<int> worst_word;
  double worst_deviation = 0.0;
};

/// Microstate membership: every operator norm <= R and every word moment of
/// length <= m within gamma of the oracle. Word enumeration is deduplicated
/// by cyclic equivalence; the total word count is guarded at 10^7.
MembershipResult check_gamma_membership(const std::vector<Matrix>& tuple,
                                        const MomentOracle& oracle, const MicrostateSpec& spec);

/// Witnessed membership in the approximate-representation set: checks
/// |witness(b_i) - x_i|_2 <= eps for the canonical generator pair and
/// ||tr o witness - phi|| < eps^2.
bool check_T_membership(const std::vector<Matrix>& tuple, const embed::Homomorphism& witness,
                        const algebra::FiniteDimAlgebra& n, double epsilon);

/// Canonical diagonal microstate: entries are the left quantiles at
/// (j - 1/2)/k, ascending.
Matrix diagonal_microstate(const algebra::SpectralMeasure& mu, int k);

/// Surrogate freeness defect: max |tr_k| over alternating products of
/// centered monomials (degree >= 1 per factor, total degree <= m) drawn
/// alternately from the two families. Vanishes on freely independent
/// families; symmetric; invariant under simultaneous unitary conjugation.
double freeness_defect(const std::vector<Matrix>& xs, const std::vector<Matrix>& ys, int m);

/// Fraction of Haar conjugations u for which (xs, u ys u*) has freeness
/// defect below gamma. Per-trial streams derive from (seed, trial).
double asymptotic_freeness_experiment(const std::vector<Matrix>& xs,
                                      const std::vector<Matrix>& ys, int trials, int m,
                                      double gamma, const RNGSeed& seed,
                                      std::vector<double>* defects_out = nullptr);

}  // namespace msl::microstates
