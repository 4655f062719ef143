#pragma once

#include "msl/block_matrix.hpp"
#include "msl/rng.hpp"

#include <functional>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace msl::geometry {

/// Block Lie subgroup of U_k: a direct sum of factors, each repeating a
/// U(size) element `mult` times along the diagonal. Real dimension is the
/// sum of size^2; the ambient index layout follows the factor order.
struct TractableSubgroup {
  struct Factor {
    long mult;
    long size;
  };

  long k = 0;
  std::vector<Factor> factors;

  TractableSubgroup(long k_, std::vector<Factor> factors_);

  long dim() const;

  static TractableSubgroup full(long k) { return TractableSubgroup(k, {{1, k}}); }
  static TractableSubgroup scalars(long k) { return TractableSubgroup(k, {{k, 1}}); }
  static TractableSubgroup torus(long k) {
    return TractableSubgroup(k, std::vector<Factor>(k, Factor{1, 1}));
  }
};

/// Real dimension of the homogeneous space U_k / H, i.e. k^2 - dim H.
long quotient_dim(const TractableSubgroup& h);

/// Trace-preserving conditional expectation onto the subgroup's algebra:
/// per factor, the diagonal size x size sub-blocks are averaged over the
/// mult repetitions (a block partial trace).
Matrix conditional_expectation(const Matrix& w, const TractableSubgroup& h);

/// Member of H closest to w in |.|_2: blockwise polar part of the
/// conditional expectation.
Matrix nearest_subgroup_unitary(const Matrix& w, const TractableSubgroup& h);

/// Quotient metric induced by |.|_2 on U_k / H:
/// inf_h |v* u - h|_2, computed exactly through the Pythagorean split
/// |w - h|_2^2 = |w - E(w)|_2^2 + |E(w) - h|_2^2 with E the conditional
/// expectation, minimized blockwise by the polar part of E(w).
double quotient_distance_d2(const Matrix& u, const Matrix& v, const TractableSubgroup& h);

/// Bracket (lower, upper) for the operator-norm quotient metric. Upper bound
/// from candidate subgroup elements (the d2 minimizer plus `budget` seeded
/// draws from H); lower bound from max(d2, |w - E(w)|_op / 2). No exactness
/// is claimed.
std::pair<double, double> quotient_distance_dinf(const Matrix& u, const Matrix& v,
                                                 const TractableSubgroup& h, long budget);

using Tuple = std::vector<Matrix>;

/// max_i |a_i - b_i|_2 on tuples.
double rho_distance(const Tuple& a, const Tuple& b);

/// Indexable stream of unitary-orbit points (u x_1 u*, ..., u x_d u*) with
/// Haar u derived per index, so concurrent consumption reproduces the
/// sequential stream.
class OrbitPointSampler {
 public:
  OrbitPointSampler(Tuple base, RNGSeed seed);

  Tuple at(std::uint64_t index) const;
  long k() const { return k_; }

 private:
  Tuple base_;
  RNGSeed seed_;
  long k_;
};

/// Greedy packing: inserts stream points whose distance to every kept center
/// is >= eps. The result is a maximal eps-separated subset of the first
/// `budget` points, hence a certified lower bound for the packing number.
template <class Point, class Sampler, class Metric>
std::vector<Point> pack_greedy_points(Sampler&& sample, Metric&& dist, double eps, long budget) {
  std::vector<Point> centers;
  for (long t = 0; t < budget; ++t) {
    Point x = sample(static_cast<std::uint64_t>(t));
    bool separated = true;
    for (const auto& c : centers) {
      if (dist(x, c) < eps) {
        separated = false;
        break;
      }
    }
    if (separated) centers.push_back(std::move(x));
  }
  return centers;
}

template <class Point, class Sampler, class Metric>
long pack_greedy(Sampler&& sample, Metric&& dist, double eps, long budget) {
  return static_cast<long>(
      pack_greedy_points<Point>(std::forward<Sampler>(sample), std::forward<Metric>(dist), eps,
                                budget)
          .size());
}

/// Farthest-point traversal radii of a finite cloud, walked until the
/// farthest remaining point is strictly within `stop_eps` of a center:
/// radii[i] is the distance of the (i+1)-th chosen center to the previously
/// chosen ones (radii[0] is +inf), and the sequence is non-increasing. For
/// any eps >= stop_eps the prefix with radii >= eps is simultaneously an
/// eps-separated subset and the center set of an eps-cover of the cloud.
template <class Point, class Metric>
std::vector<double> farthest_point_radii(const std::vector<Point>& cloud, Metric&& dist,
                                         double stop_eps) {
  std::vector<double> radii;
  if (cloud.empty()) return radii;
  std::vector<double> min_dist(cloud.size(), std::numeric_limits<double>::infinity());
  long next = 0;
  radii.push_back(std::numeric_limits<double>::infinity());
  while (true) {
    for (std::size_t i = 0; i < cloud.size(); ++i) {
      double d = dist(cloud[i], cloud[next]);
      if (d < min_dist[i]) min_dist[i] = d;
    }
    next = 0;
    for (std::size_t i = 1; i < cloud.size(); ++i) {
      if (min_dist[i] > min_dist[next]) next = static_cast<long>(i);
    }
    if (min_dist[next] < stop_eps) break;
    radii.push_back(min_dist[next]);
  }
  return radii;
}

/// Greedy covering count: size of the farthest-point prefix needed to bring
/// every sampled point strictly within eps of a center. A certified upper
/// estimate for the covering number of the sampled cloud.
template <class Point, class Sampler, class Metric>
long cover_greedy(Sampler&& sample, Metric&& dist, double eps, long budget) {
  std::vector<Point> cloud;
  cloud.reserve(budget);
  for (long t = 0; t < budget; ++t) cloud.push_back(sample(static_cast<std::uint64_t>(t)));
  auto radii = farthest_point_radii(cloud, dist, eps);
  return static_cast<long>(radii.size());
}

/// Greedy packing / covering counts across an epsilon grid with the
/// classical sandwich guaranteed per run: covering_counts[i] <=
/// packing_counts[i], counts nondecreasing as eps decreases, and every
/// packing count at eps' >= 2 eps stays below the covering count at eps.
/// Packing counts take the better of insertion-greedy and the
/// farthest-point prefix (both are certified separated sets), cumulated
/// across the grid since an eps-separated set is eps'-separated for
/// eps' <= eps.
struct PackingResult {
  std::vector<double> epsilons;  // strictly decreasing
  std::vector<long> packing_counts;
  std::vector<long> covering_counts;
  double fitted_exponent = 0.0;
  double fit_residual = 0.0;
  RNGSeed seed;
};

template <class Point, class Sampler, class Metric>
PackingResult run_packing_experiment(Sampler&& sample, Metric&& dist,
                                     const std::vector<double>& epsilons, long budget,
                                     RNGSeed seed) {
  for (std::size_t i = 0; i + 1 < epsilons.size(); ++i) {
    if (!(epsilons[i] > epsilons[i + 1])) {
      throw std::invalid_argument("epsilon grid must be strictly decreasing");
    }
  }
  std::vector<Point> cloud;
  cloud.reserve(budget);
  for (long t = 0; t < budget; ++t) cloud.push_back(sample(static_cast<std::uint64_t>(t)));
  auto radii = farthest_point_radii(cloud, dist, epsilons.empty() ? 0.0 : epsilons.back());

  PackingResult out;
  out.epsilons = epsilons;
  out.seed = std::move(seed);
  long running_best = 0;
  for (double eps : epsilons) {
    long fpt = 0;
    for (double r : radii) {
      if (r >= eps) ++fpt;
    }
    long insertion = 0;
    {
      std::vector<const Point*> centers;
      for (const auto& x : cloud) {
        bool separated = true;
        for (const Point* c : centers) {
          if (dist(x, *c) < eps) {
            separated = false;
            break;
          }
        }
        if (separated) centers.push_back(&x);
      }
      insertion = static_cast<long>(centers.size());
    }
    running_best = std::max(running_best, std::max(insertion, fpt));
    out.packing_counts.push_back(running_best);
    out.covering_counts.push_back(fpt);
  }
  return out;
}

/// Least-squares slope of log(count) against log(1/eps). Throws on fewer
/// than 3 grid points or a degenerate abscissa.
double exponent_fit(const std::vector<double>& epsilons, const std::vector<long>& counts,
                    double* residual = nullptr);

struct SeparationError : std::runtime_error {
  SeparationError(std::string msg, std::size_t first, std::size_t second)
      : std::runtime_error(std::move(msg)), first_index(first), second_index(second) {}
  std::size_t first_index;
  std::size_t second_index;
};

/// Product construction for separated families: for u in S (unitary in
/// U_{n0+n1}) and v in G (unitary in U_{n1}) form
/// w = (u (I_{n0} + v)) + I_{n2} and emit the conjugated base tuple. The
/// pairwise rho-separation of the output is measured directly and must reach
/// min_separation, otherwise a SeparationError carrying the violating pair
/// is thrown. Cardinality is exactly |S| * |G|.
std::vector<Tuple> combine_separated_families(const std::vector<Matrix>& s_unitaries,
                                              const std::vector<Matrix>& g_unitaries, long n0,
                                              long n1, long n2, const Tuple& base,
                                              double min_separation);

/// Volume of the Euclidean ball of radius sqrt(d) in R^{d^2} (the
/// Hilbert-Schmidt ball matching the operator-norm unit ball's circumradius).
double ball_volume_theta(long d);
double log_ball_volume_theta(long d);

struct VolumeEstimate {
  double estimate = 0.0;
  double stderr_ = 0.0;
  long samples = 0;
};

/// Monte Carlo estimate of the volume of the operator-norm unit ball of
/// anti-Hermitian d x d matrices: uniform samples in the radius-sqrt(d)
/// Hilbert-Schmidt ball scaled by the acceptance fraction. Guarded to d <= 3.
VolumeEstimate estimate_opnorm_ball_volume(int d, long samples, const RNGSeed& seed);

}  // namespace msl::geometry
