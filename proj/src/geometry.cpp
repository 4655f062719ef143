#include "msl/geometry.hpp"

#include "msl/linalg.hpp"
#include "msl/tolerances.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace msl::geometry {

TractableSubgroup::TractableSubgroup(long k_, std::vector<Factor> factors_)
    : k(k_), factors(std::move(factors_)) {
  if (k < 1) throw std::invalid_argument("ambient size must be >= 1");
  long total = 0;
  for (const auto& f : factors) {
    if (f.mult < 1 || f.size < 0) throw std::invalid_argument("bad factor");
    total += f.mult * f.size;
  }
  if (total != k) throw std::invalid_argument("factors must tile the ambient space");
}

long TractableSubgroup::dim() const {
  long d = 0;
  for (const auto& f : factors) d += f.size * f.size;
  return d;
}

long quotient_dim(const TractableSubgroup& h) { return h.k * h.k - h.dim(); }

Matrix conditional_expectation(const Matrix& w, const TractableSubgroup& h) {
  if (w.rows() != h.k || w.cols() != h.k) throw std::invalid_argument("shape mismatch");
  Matrix out = Matrix::Zero(h.k, h.k);
  long off = 0;
  for (const auto& f : h.factors) {
    if (f.size == 0) continue;
    Matrix avg = Matrix::Zero(f.size, f.size);
    for (long a = 0; a < f.mult; ++a) {
      avg += w.block(off + a * f.size, off + a * f.size, f.size, f.size);
    }
    avg /= static_cast<double>(f.mult);
    for (long a = 0; a < f.mult; ++a) {
      out.block(off + a * f.size, off + a * f.size, f.size, f.size) = avg;
    }
    off += f.mult * f.size;
  }
  return out;
}

Matrix nearest_subgroup_unitary(const Matrix& w, const TractableSubgroup& h) {
  Matrix expected = conditional_expectation(w, h);
  Matrix out = Matrix::Zero(h.k, h.k);
  long off = 0;
  for (const auto& f : h.factors) {
    if (f.size == 0) continue;
    Matrix u = linalg::polar_unitary(expected.block(off, off, f.size, f.size));
    for (long a = 0; a < f.mult; ++a) {
      out.block(off + a * f.size, off + a * f.size, f.size, f.size) = u;
    }
    off += f.mult * f.size;
  }
  return out;
}

static void require_unitary(const Matrix& u, const char* who) {
  const long k = u.rows();
  if (u.cols() != k) throw std::invalid_argument(std::string(who) + ": not square");
  double res = (u.adjoint() * u - Matrix::Identity(k, k)).norm();
  if (res > tolerances().metric * std::max<double>(1.0, k)) {
    throw std::invalid_argument(std::string(who) + ": not unitary");
  }
}

double quotient_distance_d2(const Matrix& u, const Matrix& v, const TractableSubgroup& h) {
  require_unitary(u, "quotient_distance_d2(u)");
  require_unitary(v, "quotient_distance_d2(v)");
  Matrix w = v.adjoint() * u;
  Matrix h_opt = nearest_subgroup_unitary(w, h);
  return linalg::hs_norm(Matrix(w - h_opt));
}

std::pair<double, double> quotient_distance_dinf(const Matrix& u, const Matrix& v,
                                                 const TractableSubgroup& h, long budget) {
  require_unitary(u, "quotient_distance_dinf(u)");
  require_unitary(v, "quotient_distance_dinf(v)");
  Matrix w = v.adjoint() * u;
  Matrix expected = conditional_expectation(w, h);

  // The conditional expectation is a unital completely positive contraction,
  // so dist_op(w, H'') >= |w - E(w)|_op / 2; the d2 value lower-bounds any
  // operator-norm distance directly.
  double lower = std::max(quotient_distance_d2(u, v, h),
                          0.5 * linalg::op_norm(Matrix(w - expected)));

  double upper = linalg::op_norm(Matrix(w - nearest_subgroup_unitary(w, h)));
  RNGSeed probe_seed{kDefaultSeed, "dinf-probe"};
  for (long t = 0; t < budget; ++t) {
    Matrix candidate = Matrix::Zero(h.k, h.k);
    long off = 0;
    std::uint64_t factor_index = 0;
    for (const auto& f : h.factors) {
      if (f.size == 0) continue;
      Matrix g = linalg::haar_unitary(static_cast<int>(f.size), probe_seed,
                                      static_cast<std::uint64_t>(t) * 64 + factor_index++);
      for (long a = 0; a < f.mult; ++a) {
        candidate.block(off + a * f.size, off + a * f.size, f.size, f.size) = g;
      }
      off += f.mult * f.size;
    }
    upper = std::min(upper, linalg::op_norm(Matrix(w - candidate)));
  }
  upper = std::max(upper, lower);
  return {lower, upper};
}

double rho_distance(const Tuple& a, const Tuple& b) {
  if (a.size() != b.size()) throw std::invalid_argument("tuple arity mismatch");
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    worst = std::max(worst, linalg::hs_norm(Matrix(a[i] - b[i])));
  }
  return worst;
}

OrbitPointSampler::OrbitPointSampler(Tuple base, RNGSeed seed)
    : base_(std::move(base)), seed_(std::move(seed)) {
  if (base_.empty()) throw std::invalid_argument("orbit base must be nonempty");
  k_ = base_.front().rows();
  for (const auto& m : base_) {
    if (m.rows() != k_ || m.cols() != k_) throw std::invalid_argument("base shape mismatch");
  }
}

Tuple OrbitPointSampler::at(std::uint64_t index) const {
  Matrix u = linalg::haar_unitary(static_cast<int>(k_), seed_, index);
  Tuple out;
  out.reserve(base_.size());
  for (const auto& x : base_) out.push_back(u * x * u.adjoint());
  return out;
}

double exponent_fit(const std::vector<double>& epsilons, const std::vector<long>& counts,
                    double* residual) {
  if (epsilons.size() != counts.size()) throw std::invalid_argument("grid size mismatch");
  if (epsilons.size() < 3) throw std::invalid_argument("need at least 3 grid points");
  const std::size_t n = epsilons.size();
  std::vector<double> xs(n), ys(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!(epsilons[i] > 0) || counts[i] < 1) throw std::invalid_argument("degenerate grid entry");
    xs[i] = std::log(1.0 / epsilons[i]);
    ys[i] = std::log(static_cast<double>(counts[i]));
  }
  double mean_x = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
  double mean_y = std::accumulate(ys.begin(), ys.end(), 0.0) / n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (xs[i] - mean_x) * (xs[i] - mean_x);
    sxy += (xs[i] - mean_x) * (ys[i] - mean_y);
  }
  if (sxx < 1e-12) throw std::invalid_argument("degenerate abscissa");
  double slope = sxy / sxx;
  if (residual) {
    double intercept = mean_y - slope * mean_x;
    double rss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double r = ys[i] - (slope * xs[i] + intercept);
      rss += r * r;
    }
    *residual = std::sqrt(rss / n);
  }
  return slope;
}

std::vector<Tuple> combine_separated_families(const std::vector<Matrix>& s_unitaries,
                                              const std::vector<Matrix>& g_unitaries, long n0,
                                              long n1, long n2, const Tuple& base,
                                              double min_separation) {
  const long top = n0 + n1;
  const long total = n0 + n1 + n2;
  if (base.empty()) throw std::invalid_argument("base tuple must be nonempty");
  for (const auto& m : base) {
    if (m.rows() != total || m.cols() != total) throw std::invalid_argument("base shape mismatch");
  }
  for (const auto& u : s_unitaries) {
    if (u.rows() != top || u.cols() != top) throw std::invalid_argument("S shape mismatch");
  }
  for (const auto& v : g_unitaries) {
    if (v.rows() != n1 || v.cols() != n1) throw std::invalid_argument("G shape mismatch");
  }

  std::vector<Tuple> out;
  out.reserve(s_unitaries.size() * g_unitaries.size());
  for (const auto& u : s_unitaries) {
    for (const auto& v : g_unitaries) {
      Matrix w = Matrix::Zero(total, total);
      Matrix inner = Matrix::Identity(top, top);
      inner.block(n0, n0, n1, n1) = v;
      w.block(0, 0, top, top) = u * inner;
      if (n2 > 0) w.block(top, top, n2, n2) = Matrix::Identity(n2, n2);
      Tuple point;
      point.reserve(base.size());
      for (const auto& x : base) point.push_back(w * x * w.adjoint());
      out.push_back(std::move(point));
    }
  }

  for (std::size_t i = 0; i < out.size(); ++i) {
    for (std::size_t j = i + 1; j < out.size(); ++j) {
      double d = rho_distance(out[i], out[j]);
      if (d < min_separation) {
        throw SeparationError("combined family is not separated at the requested threshold", i,
                              j);
      }
    }
  }
  return out;
}

double log_ball_volume_theta(long d) {
  if (d < 1) throw std::invalid_argument("d must be >= 1");
  double dim = static_cast<double>(d) * static_cast<double>(d);
  return 0.5 * dim * (std::log(M_PI) + std::log(static_cast<double>(d))) -
         std::lgamma(0.5 * dim + 1.0);
}

double ball_volume_theta(long d) { return std::exp(log_ball_volume_theta(d)); }

VolumeEstimate estimate_opnorm_ball_volume(int d, long samples, const RNGSeed& seed) {
  if (d < 1 || d > 3) throw std::invalid_argument("estimate_opnorm_ball_volume: d must be in 1..3");
  if (samples < 1) throw std::invalid_argument("samples must be >= 1");
  const int dim = d * d;
  Rng rng = derive_rng(seed, 0);
  long hits = 0;
  Eigen::VectorXd coords(dim);
  const double inv_sqrt2 = 0.7071067811865476;
  for (long s = 0; s < samples; ++s) {
    // Uniform point in the Euclidean ball of radius sqrt(d) in R^{d^2}.
    double norm2 = 0.0;
    for (int i = 0; i < dim; ++i) {
      coords(i) = rng.gaussian();
      norm2 += coords(i) * coords(i);
    }
    double norm = std::sqrt(norm2);
    if (norm == 0.0) continue;
    double radius = std::sqrt(static_cast<double>(d)) *
                    std::pow(rng.uniform01(), 1.0 / static_cast<double>(dim));
    coords *= radius / norm;

    // Identify with a Hermitian matrix via the Re Tr isometry: diagonal
    // entries are coordinates, off-diagonal pairs are scaled by 1/sqrt(2).
    Matrix hmat = Matrix::Zero(d, d);
    int idx = 0;
    for (int i = 0; i < d; ++i) hmat(i, i) = coords(idx++);
    for (int i = 0; i < d; ++i) {
      for (int j = i + 1; j < d; ++j) {
        Complex z(coords(idx) * inv_sqrt2, coords(idx + 1) * inv_sqrt2);
        idx += 2;
        hmat(i, j) = z;
        hmat(j, i) = std::conj(z);
      }
    }
    if (linalg::op_norm(hmat) <= 1.0) ++hits;
  }
  double fraction = static_cast<double>(hits) / static_cast<double>(samples);
  double theta = ball_volume_theta(d);
  VolumeEstimate est;
  est.estimate = fraction * theta;
  est.stderr_ = theta * std::sqrt(std::max(0.0, fraction * (1.0 - fraction)) /
                                  static_cast<double>(samples));
  est.samples = samples;
  return est;
}

}  // namespace msl::geometry
