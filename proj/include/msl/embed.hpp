#pragma once

#include "msl/algebra.hpp"
#include "msl/block_matrix.hpp"
#include "msl/geometry.hpp"
#include "msl/rational.hpp"

#include <stdexcept>
#include <utility>
#include <vector>

namespace msl::embed {

/// *-homomorphism N -> M_k encoded by one multiplicity per block plus a null
/// summand. Block j acts by stretching each entry of x_j into a
/// multiplicities[j]-sized scalar block; the commutant unitaries then form a
/// tractable subgroup in repetition layout.
struct Representation {
  algebra::FiniteDimAlgebra source;
  std::vector<long> multiplicities;
  long null_dim = 0;

  Representation(algebra::FiniteDimAlgebra source_, std::vector<long> multiplicities_,
                 long null_dim_);

  long k() const;

  /// Synthesizes the image of an algebra element in M_k.
  Matrix apply(const BlockMatrix& x) const;

  /// Images of the minimal central projections (one per block).
  std::vector<Matrix> central_projection_images() const;

  /// Unitary group of the commutant: factor (n_j, l_j) per represented
  /// block, plus a full factor on the null summand.
  geometry::TractableSubgroup commutant_unitaries() const;
};

/// Total-variation norm of tr_k(rep(.)) - phi on the source algebra, where
/// phi has the given block weights: sum_j | l_j n_j / k - w_j |.
Rational trace_functional_distance(const Representation& rep,
                                   const std::vector<Rational>& weights);

/// Total-variation norm of tr_k(rep1(.)) - tr_k(rep2(.)) on the common
/// source: sum_j (n_j / k) | l1_j - l2_j |.
Rational trace_functional_distance(const Representation& rep1, const Representation& rep2);

struct EmbeddingReport {
  Representation representation;
  double trace_error = 0.0;
  geometry::TractableSubgroup subgroup;
  long quotient_dim = 0;
  double lower_bound = 0.0;  // k^2 (capacity - r)
  double upper_bound = 0.0;  // k^2 (capacity + r)
  long k0 = 0;
  bool below_threshold = false;
};

/// Near-trace-preserving embedding of a state algebra into M_k. The block
/// multiplicities follow the divisibility recipe: with n the largest integer
/// with n prod(n_j) <= k, the weights are apportioned as integers m_j with
/// sum m_j = n (largest remainder), giving l_j = m_j prod(n_i)/n_j. For
/// k > k0 the report certifies trace_error < r^2 and
/// k^2 (capacity - r) < quotient_dim < k^2 (capacity + r); below k0 the same
/// construction is returned flagged.
EmbeddingReport build_embedding(const algebra::FiniteDimAlgebra& n, long k, double r);

struct InconsistentRepresentationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Recovers the multiplicity fingerprint from images of the minimal central
/// projections: l_j = round(k tr_k(images[j]) / n_j). The result is
/// re-synthesized and its block ranks compared against the inputs; any
/// mismatch raises InconsistentRepresentationError.
Representation representation_multiplicities(const std::vector<Matrix>& images,
                                             const algebra::FiniteDimAlgebra& n);

struct ConjugacyCertificate {
  double trace_distance = 0.0;  // ||tr o rep1 - tr o rep2||, plays the role of eps^2
  double epsilon = 0.0;         // sqrt(trace_distance)
  double max_relative_distance = 0.0;  // max_b |u rep1(b) u* - rep2(b)|_2 / ||b||
  bool bound_satisfied = false;        // max_relative_distance <= 2 eps
};

/// Aligns two representations of one algebra in M_k by an explicit
/// permutation: the min(l1_j, l2_j) shared copies of every block are matched
/// slot by slot and the leftovers are packed into the remaining indices. The
/// certificate reports the achieved generator distances against the 2||b||eps
/// bound; equal multiplicity vectors align exactly.
std::pair<Matrix, ConjugacyCertificate> conjugate_representations(const Representation& rep1,
                                                                  const Representation& rep2);

/// General *-homomorphism N -> M_k: a canonical representation composed with
/// a unitary change of frame. The default frame is the identity.
struct Homomorphism {
  Representation rep;
  Matrix frame;  // empty means identity

  Homomorphism(Representation rep_) : rep(std::move(rep_)) {}  // NOLINT(google-explicit-*)
  Homomorphism(Representation rep_, Matrix frame_);

  long k() const { return rep.k(); }
  Matrix apply(const BlockMatrix& x) const;
};

struct AlignmentResult {
  Matrix unitary;
  double max_distance = 0.0;
  double radius = 0.0;  // 2 eps (1 + sqrt(2) R)
  bool within_radius = false;
};

/// Given microstate tuples with witness homomorphisms sigma, pi (images
/// eps-close to the tuples, traces eps^2-close to the state), conjugates xs
/// toward ys with the unitary from conjugate_representations transported
/// through the witness frames, and certifies
/// max_i |u xs_i u* - ys_i|_2 <= 2 eps (1 + sqrt(2) R), R the largest
/// generator norm. Witness precondition failures throw.
AlignmentResult align_microstates(const geometry::Tuple& xs, const geometry::Tuple& ys,
                                  const algebra::FiniteDimAlgebra& n, double epsilon,
                                  const Homomorphism& sigma, const Homomorphism& pi);

}  // namespace msl::embed
