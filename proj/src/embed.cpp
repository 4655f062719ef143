#include "msl/embed.hpp"

#include "msl/linalg.hpp"
#include "msl/tolerances.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <numeric>

namespace msl::embed {

Representation::Representation(algebra::FiniteDimAlgebra source_,
                               std::vector<long> multiplicities_, long null_dim_)
    : source(std::move(source_)), multiplicities(std::move(multiplicities_)),
      null_dim(null_dim_) {
  if (multiplicities.size() != static_cast<std::size_t>(source.num_blocks())) {
    throw std::invalid_argument("one multiplicity per block required");
  }
  for (long l : multiplicities) {
    if (l < 0) throw std::invalid_argument("multiplicities must be >= 0");
  }
  if (null_dim < 0) throw std::invalid_argument("null dimension must be >= 0");
  if (k() < 1) throw std::invalid_argument("representation space must be nonzero");
}

long Representation::k() const {
  long total = null_dim;
  for (int j = 0; j < source.num_blocks(); ++j) {
    total += multiplicities[j] * source.block_dims[j];
  }
  return total;
}

Matrix Representation::apply(const BlockMatrix& x) const {
  if (x.shape() != source.block_dims) throw std::invalid_argument("element shape mismatch");
  const long dim = k();
  Matrix out = Matrix::Zero(dim, dim);
  long off = 0;
  for (int j = 0; j < source.num_blocks(); ++j) {
    const long n = source.block_dims[j];
    const long l = multiplicities[j];
    if (l == 0) continue;
    const Matrix& b = x.blocks[j];
    for (long s = 0; s < n; ++s) {
      for (long t = 0; t < n; ++t) {
        if (b(s, t) == Complex(0.0, 0.0)) continue;
        for (long c = 0; c < l; ++c) out(off + s * l + c, off + t * l + c) = b(s, t);
      }
    }
    off += n * l;
  }
  return out;
}

std::vector<Matrix> Representation::central_projection_images() const {
  std::vector<Matrix> images;
  images.reserve(source.num_blocks());
  for (int j = 0; j < source.num_blocks(); ++j) {
    BlockMatrix z = BlockMatrix::zero(source.block_dims);
    z.blocks[j] = Matrix::Identity(source.block_dims[j], source.block_dims[j]);
    images.push_back(apply(z));
  }
  return images;
}

geometry::TractableSubgroup Representation::commutant_unitaries() const {
  std::vector<geometry::TractableSubgroup::Factor> factors;
  for (int j = 0; j < source.num_blocks(); ++j) {
    if (multiplicities[j] > 0) {
      factors.push_back({source.block_dims[j], multiplicities[j]});
    }
  }
  if (null_dim > 0) factors.push_back({1, null_dim});
  return geometry::TractableSubgroup(k(), std::move(factors));
}

Rational trace_functional_distance(const Representation& rep,
                                   const std::vector<Rational>& weights) {
  if (weights.size() != static_cast<std::size_t>(rep.source.num_blocks())) {
    throw std::invalid_argument("weight count mismatch");
  }
  Rational k(rep.k());
  Rational acc(0);
  for (int j = 0; j < rep.source.num_blocks(); ++j) {
    Rational image_weight = Rational(rep.multiplicities[j] * rep.source.block_dims[j]) / k;
    acc += abs(image_weight - weights[j]);
  }
  return acc;
}

Rational trace_functional_distance(const Representation& rep1, const Representation& rep2) {
  if (rep1.source.block_dims != rep2.source.block_dims) {
    throw std::invalid_argument("representations of different algebras");
  }
  if (rep1.k() != rep2.k()) throw std::invalid_argument("ambient dimension mismatch");
  Rational k(rep1.k());
  Rational acc(0);
  for (int j = 0; j < rep1.source.num_blocks(); ++j) {
    acc += Rational(rep1.source.block_dims[j]) *
           abs(Rational(rep1.multiplicities[j]) - Rational(rep2.multiplicities[j])) / k;
  }
  return acc;
}

EmbeddingReport build_embedding(const algebra::FiniteDimAlgebra& n, long k, double r) {
  if (!n.is_state()) throw std::invalid_argument("build_embedding requires a state algebra");
  if (!(r > 0.0 && r < 1.0)) throw std::invalid_argument("need 0 < r < 1");
  if (k < 1) throw std::invalid_argument("need k >= 1");

  const int p = n.num_blocks();
  long dim_product = 1;
  for (int d : n.block_dims) dim_product *= d;

  const double epsilon = r * r / (4.0 * p);
  const long n0 = static_cast<long>(std::floor((p + 1) / epsilon)) + 1;
  const long k0 = (n0 + 1) * dim_product;

  const long copies = k / dim_product;  // n in the recipe
  std::vector<long> multiplicities(p, 0);
  long null_dim = k;
  if (copies >= 1) {
    // Largest-remainder apportionment of `copies` across the blocks.
    std::vector<long> m(p, 0);
    std::vector<std::pair<Rational, int>> remainders;
    long assigned = 0;
    for (int j = 0; j < p; ++j) {
      Rational target = Rational(copies) * n.block_weights[j];
      mpz_class whole = target.get_num() / target.get_den();
      m[j] = whole.get_si();
      assigned += m[j];
      remainders.push_back({target - Rational(whole), j});
    }
    std::sort(remainders.begin(), remainders.end(), [](const auto& a, const auto& b) {
      if (a.first != b.first) return a.first > b.first;
      return a.second < b.second;
    });
    for (long i = 0; i < copies - assigned; ++i) ++m[remainders[i % p].second];

    for (int j = 0; j < p; ++j) multiplicities[j] = m[j] * (dim_product / n.block_dims[j]);
    null_dim = k - copies * dim_product;
  }

  Representation rep(n, std::move(multiplicities), null_dim);
  EmbeddingReport report{rep,
                         to_double(trace_functional_distance(rep, n.block_weights)),
                         rep.commutant_unitaries(),
                         0,
                         0.0,
                         0.0,
                         k0,
                         k <= k0};
  report.quotient_dim = geometry::quotient_dim(report.subgroup);
  const double capacity = to_double(algebra::delta_capacity(n));
  const double kk = static_cast<double>(k) * static_cast<double>(k);
  report.lower_bound = kk * (capacity - r);
  report.upper_bound = kk * (capacity + r);
  return report;
}

Representation representation_multiplicities(const std::vector<Matrix>& images,
                                             const algebra::FiniteDimAlgebra& n) {
  if (images.size() != static_cast<std::size_t>(n.num_blocks())) {
    throw std::invalid_argument("one image per central projection required");
  }
  const long k = images.front().rows();
  const double tol = tolerances().metric * std::max<double>(1.0, k);
  std::vector<long> multiplicities(n.num_blocks(), 0);
  for (int j = 0; j < n.num_blocks(); ++j) {
    const Matrix& img = images[j];
    if (img.rows() != k || img.cols() != k) throw std::invalid_argument("image shape mismatch");
    if ((img - img.adjoint()).norm() > tol || (img * img - img).norm() > tol) {
      throw InconsistentRepresentationError("central projection image is not a projection");
    }
    double scaled = img.trace().real() / n.block_dims[j];
    long l = std::lround(scaled);
    if (l < 0 || std::abs(scaled - l) > 1e-6) {
      throw InconsistentRepresentationError("trace is not an integer multiple of the block dim");
    }
    multiplicities[j] = l;
  }
  long used = 0;
  for (int j = 0; j < n.num_blocks(); ++j) used += multiplicities[j] * n.block_dims[j];
  if (used > k) throw InconsistentRepresentationError("multiplicities exceed ambient dimension");

  Representation rep(n, multiplicities, k - used);

  // Rank consistency against a re-synthesized copy.
  auto rank_of = [&](const Matrix& proj) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(proj, Eigen::EigenvaluesOnly);
    long rank = 0;
    for (long i = 0; i < es.eigenvalues().size(); ++i) {
      if (es.eigenvalues()(i) > 0.5) ++rank;
    }
    return rank;
  };
  auto reference = rep.central_projection_images();
  for (int j = 0; j < n.num_blocks(); ++j) {
    if (rank_of(images[j]) != rank_of(reference[j])) {
      throw InconsistentRepresentationError("block rank mismatch under re-synthesis");
    }
  }
  return rep;
}

// Stretch-layout index of (block j, internal row s, copy c).
static long slot_index(const Representation& rep, int j, long s, long c) {
  long off = 0;
  for (int b = 0; b < j; ++b) off += rep.source.block_dims[b] * rep.multiplicities[b];
  return off + s * rep.multiplicities[j] + c;
}

std::pair<Matrix, ConjugacyCertificate> conjugate_representations(const Representation& rep1,
                                                                  const Representation& rep2) {
  if (rep1.source.block_dims != rep2.source.block_dims) {
    throw std::invalid_argument("representations of different algebras");
  }
  if (rep1.k() != rep2.k()) throw std::invalid_argument("ambient dimension mismatch");
  const long k = rep1.k();
  const int p = rep1.source.num_blocks();

  // Match the shared copies of each block slot by slot; pack the leftovers
  // into whatever indices remain on the other side.
  std::vector<long> target_of(k, -1);
  std::vector<bool> target_used(k, false);
  for (int j = 0; j < p; ++j) {
    const long n = rep1.source.block_dims[j];
    const long shared = std::min(rep1.multiplicities[j], rep2.multiplicities[j]);
    for (long s = 0; s < n; ++s) {
      for (long c = 0; c < shared; ++c) {
        long src = slot_index(rep1, j, s, c);
        long dst = slot_index(rep2, j, s, c);
        target_of[src] = dst;
        target_used[dst] = true;
      }
    }
  }
  long cursor = 0;
  for (long src = 0; src < k; ++src) {
    if (target_of[src] >= 0) continue;
    while (target_used[cursor]) ++cursor;
    target_of[src] = cursor;
    target_used[cursor] = true;
  }
  Matrix u = Matrix::Zero(k, k);
  for (long src = 0; src < k; ++src) u(target_of[src], src) = 1.0;

  ConjugacyCertificate cert;
  cert.trace_distance = to_double(trace_functional_distance(rep1, rep2));
  cert.epsilon = std::sqrt(cert.trace_distance);
  auto [b1, b2] = algebra::selfadjoint_generator_pair(rep1.source);
  for (const auto& b : {b1, b2}) {
    double norm = linalg::op_norm(b);
    double dist = linalg::hs_norm(Matrix(u * rep1.apply(b) * u.adjoint() - rep2.apply(b)));
    double rel = norm > 0 ? dist / norm : dist;
    cert.max_relative_distance = std::max(cert.max_relative_distance, rel);
  }
  cert.bound_satisfied =
      cert.max_relative_distance <= 2.0 * cert.epsilon + tolerances().metric;
  return {u, cert};
}

Homomorphism::Homomorphism(Representation rep_, Matrix frame_)
    : rep(std::move(rep_)), frame(std::move(frame_)) {
  if (frame.size() != 0) {
    if (frame.rows() != rep.k() || frame.cols() != rep.k()) {
      throw std::invalid_argument("frame dimension mismatch");
    }
    double residual =
        (frame.adjoint() * frame - Matrix::Identity(rep.k(), rep.k())).norm();
    if (residual > tolerances().metric * std::max<double>(1.0, rep.k())) {
      throw std::invalid_argument("frame is not unitary");
    }
  }
}

Matrix Homomorphism::apply(const BlockMatrix& x) const {
  Matrix image = rep.apply(x);
  if (frame.size() == 0) return image;
  return frame * image * frame.adjoint();
}

AlignmentResult align_microstates(const geometry::Tuple& xs, const geometry::Tuple& ys,
                                  const algebra::FiniteDimAlgebra& n, double epsilon,
                                  const Homomorphism& sigma, const Homomorphism& pi) {
  if (!(epsilon > 0)) throw std::invalid_argument("epsilon must be > 0");
  auto [b1, b2] = algebra::selfadjoint_generator_pair(n);
  const std::vector<BlockMatrix> generators{b1, b2};
  if (xs.size() != generators.size() || ys.size() != generators.size()) {
    throw std::invalid_argument("tuples must match the canonical generator pair");
  }
  const double slack = tolerances().metric;
  for (std::size_t i = 0; i < generators.size(); ++i) {
    if (linalg::hs_norm(Matrix(sigma.apply(generators[i]) - xs[i])) > epsilon + slack) {
      throw std::invalid_argument("sigma witness is not epsilon-close to xs");
    }
    if (linalg::hs_norm(Matrix(pi.apply(generators[i]) - ys[i])) > epsilon + slack) {
      throw std::invalid_argument("pi witness is not epsilon-close to ys");
    }
  }
  const double eps2 = epsilon * epsilon;
  if (to_double(trace_functional_distance(sigma.rep, n.block_weights)) >= eps2 ||
      to_double(trace_functional_distance(pi.rep, n.block_weights)) >= eps2) {
    throw std::invalid_argument("witness trace is not epsilon^2-close to the state");
  }

  auto [canonical_u, cert] = conjugate_representations(sigma.rep, pi.rep);
  (void)cert;
  Matrix u = canonical_u;
  if (pi.frame.size() != 0) u = pi.frame * u;
  if (sigma.frame.size() != 0) u = u * sigma.frame.adjoint();

  double radius_norm = 0.0;
  for (const auto& b : generators) radius_norm = std::max(radius_norm, linalg::op_norm(b));

  AlignmentResult out;
  out.unitary = u;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    out.max_distance =
        std::max(out.max_distance, linalg::hs_norm(Matrix(u * xs[i] * u.adjoint() - ys[i])));
  }
  out.radius = 2.0 * epsilon * (1.0 + std::sqrt(2.0) * radius_norm);
  out.within_radius = out.max_distance <= out.radius + slack;
  return out;
}

}  // namespace msl::embed
