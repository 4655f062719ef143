#pragma once

#include "msl/block_matrix.hpp"
#include "msl/polynomials.hpp"
#include "msl/rational.hpp"

#include <stdexcept>
#include <utility>
#include <vector>

namespace msl::algebra {

/// Finite dimensional tracial algebra: a direct sum of matrix blocks
/// M_{n_1} + ... + M_{n_p} with a non-negative trace weight per block.
struct FiniteDimAlgebra {
  std::vector<int> block_dims;
  std::vector<Rational> block_weights;

  FiniteDimAlgebra(std::vector<int> dims, std::vector<Rational> weights);

  int num_blocks() const { return static_cast<int>(block_dims.size()); }

  /// True iff the weights sum to 1 exactly.
  bool is_state() const;

  /// Sum of block dimensions n_j.
  long total_matrix_dim() const;

  /// Complex dimension of the algebra, sum of n_j^2.
  long complex_dimension() const;
};

/// Center decomposition of a hyperfinite algebra: diffuse summand weight,
/// finitely many matrix blocks (k_i, alpha_i) with alpha_i > 0, and an
/// optional infinite summand that carries trace weight 0.
struct HyperfiniteSpec {
  struct Block {
    int dim;
    Rational weight;
  };

  Rational diffuse_weight;
  std::vector<Block> blocks;
  bool has_infinite_part = false;

  HyperfiniteSpec(Rational diffuse, std::vector<Block> blocks_, bool infinite_part = false);
};

/// Integer matrix recording how minimal projections of the subalgebra blocks
/// decompose inside the ambient blocks.
struct InclusionMatrix {
  std::vector<std::vector<long>> entries;  // indexed [a_block][b_block]
  std::vector<int> a_dims;
  std::vector<int> b_dims;

  InclusionMatrix(std::vector<std::vector<long>> entries_, std::vector<int> a_dims_,
                  std::vector<int> b_dims_);

  /// Unital iff sum_i entries[i][j] * a_dims[i] == b_dims[j] for every j.
  bool is_unital() const;
};

/// Distribution of a single self-adjoint element: finitely many atoms plus a
/// continuous component. The continuous mass is carried by a uniform density
/// on [continuous_lo, continuous_hi]; only its total mass enters the
/// dimension formulas.
struct SpectralMeasure {
  struct Atom {
    double location;
    Rational mass;
  };

  std::vector<Atom> atoms;  // strictly increasing locations, masses > 0
  Rational continuous_mass;
  double continuous_lo = 0.0;
  double continuous_hi = 1.0;

  SpectralMeasure(std::vector<Atom> atoms_, Rational continuous_mass_ = Rational(0),
                  double lo = 0.0, double hi = 1.0);

  /// Left quantile inf{t : F(t) >= u} for u in (0, 1). Atom hits are decided
  /// in exact arithmetic.
  double quantile(const Rational& u) const;

  /// p-th moment of the measure.
  double moment(long p) const;
};

struct NonUnitalInclusionError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Free entropy dimension of a hyperfinite algebra: 1 - sum alpha_i^2/k_i^2.
/// Diffuse and infinite summands contribute nothing to the sum.
Rational delta0_hyperfinite(const HyperfiniteSpec& spec);

/// Dykema's free dimension:
/// alpha_0^2 + sum alpha_i^2 (1 - k_i^{-2}) + 2 alpha_0 (1 - alpha_0)
///   + sum_{i != j} alpha_i alpha_j.
/// Agrees with delta0_hyperfinite on every valid spec.
Rational fdim(const HyperfiniteSpec& spec);

/// Capacity invariant 1 - sum weight_j^2 / dim_j^2 for any positive trace.
Rational delta_capacity(const FiniteDimAlgebra& algebra);

/// Pulls a positive trace on B back along a unital inclusion A < B. The
/// induced weight on A-block i is p_i * sum_j entries[i][j] r_j / q_j.
/// Non-unital inclusions are rejected with NonUnitalInclusionError.
FiniteDimAlgebra restrict_trace(const InclusionMatrix& inclusion,
                                const std::vector<Rational>& b_weights);

/// Free entropy dimension of one self-adjoint element: 1 - sum of squared
/// atom masses.
Rational delta0_selfadjoint(const SpectralMeasure& mu);

/// Single generator of the algebra: in block j, a diagonal with globally
/// distinct integer entries plus the superdiagonal shift. Generation is
/// certified by verify_generation, not assumed.
BlockMatrix single_generator(const FiniteDimAlgebra& algebra);

/// Self-adjoint generator pair (x + x*)/2, (x - x*)/(2i) for the single
/// generator x.
std::pair<BlockMatrix, BlockMatrix> selfadjoint_generator_pair(const FiniteDimAlgebra& algebra);

/// True iff the complex span of all words in elems, their adjoints and the
/// identity stabilizes at the full algebra dimension sum n_j^2. Iteration
/// stops one round after the span rank is stationary; if the word-length cap
/// 2 (sum n_j)^2 is hit first, a std::runtime_error is thrown instead of
/// answering.
bool verify_generation(const std::vector<BlockMatrix>& elems, const FiniteDimAlgebra& algebra);

/// Weighted trace of the word product: sum_j w_j tr_{n_j}(prod of blocks).
/// The empty word gives the trace of the identity.
Complex exact_moment(const std::vector<BlockMatrix>& elems, const FiniteDimAlgebra& algebra,
                     const std::vector<int>& word);

/// Monic polynomial (t - s_1)...(t - s_d) vanishing exactly on the given
/// spectrum. Duplicate points are rejected.
Polynomial annihilator_polynomial(const std::vector<double>& spectrum);

}  // namespace msl::algebra
