#include "msl/acceptance.hpp"

#include "msl/algebra.hpp"
#include "msl/embed.hpp"
#include "msl/geometry.hpp"
#include "msl/linalg.hpp"
#include "msl/microstates.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>

namespace msl::acceptance {

namespace {

using algebra::FiniteDimAlgebra;
using algebra::HyperfiniteSpec;
using algebra::InclusionMatrix;
using geometry::TractableSubgroup;

std::vector<Rational> weights_from_counts(const std::vector<long>& counts) {
  long total = 0;
  for (long c : counts) total += c;
  std::vector<Rational> out;
  out.reserve(counts.size());
  for (long c : counts) out.push_back(make_rational(c, total));
  return out;
}

HyperfiniteSpec random_spec(Rng& rng, int max_blocks) {
  int blocks = static_cast<int>(rng.next_u64() % (max_blocks + 1));
  bool diffuse = blocks == 0 || (rng.next_u64() % 2 == 0);
  std::vector<long> counts;
  if (diffuse) counts.push_back(1 + static_cast<long>(rng.next_u64() % 9));
  for (int i = 0; i < blocks; ++i) counts.push_back(1 + static_cast<long>(rng.next_u64() % 9));
  auto weights = weights_from_counts(counts);
  std::size_t cursor = 0;
  Rational alpha0 = diffuse ? weights[cursor++] : Rational(0);
  std::vector<HyperfiniteSpec::Block> spec_blocks;
  for (int i = 0; i < blocks; ++i) {
    spec_blocks.push_back(
        {1 + static_cast<int>(rng.next_u64() % 6), weights[cursor++]});
  }
  return HyperfiniteSpec(alpha0, std::move(spec_blocks), rng.next_u64() % 4 == 0);
}

FiniteDimAlgebra random_state_algebra(Rng& rng, int max_blocks, int max_dim) {
  int blocks = 1 + static_cast<int>(rng.next_u64() % max_blocks);
  std::vector<int> dims;
  std::vector<long> counts;
  for (int i = 0; i < blocks; ++i) {
    dims.push_back(1 + static_cast<int>(rng.next_u64() % max_dim));
    counts.push_back(1 + static_cast<long>(rng.next_u64() % 9));
  }
  return FiniteDimAlgebra(std::move(dims), weights_from_counts(counts));
}

struct Check {
  bool ok = true;
  std::ostringstream detail;

  void fail(const std::string& msg) {
    if (ok) detail << msg;
    ok = false;
  }
};

using CriterionFn = std::function<void(Check&, const SuiteOptions&)>;

// ---------------------------------------------------------------- criteria

void closed_form_matrix_blocks(Check& check, const SuiteOptions&) {
  for (int k = 1; k <= 6; ++k) {
    HyperfiniteSpec spec(Rational(0), {{k, Rational(1)}});
    Rational expected = Rational(1) - make_rational(1, static_cast<long>(k) * k);
    if (algebra::delta0_hyperfinite(spec) != expected) {
      check.fail("delta0(M_" + std::to_string(k) + ") != 1 - 1/k^2");
      return;
    }
  }
  check.detail << "delta0(M_k) = 1 - 1/k^2 exactly for k = 1..6";
}

void fdim_equals_delta0(Check& check, const SuiteOptions& options) {
  Rng rng = derive_rng({options.seed, "fdim-vs-delta0"}, 0);
  for (int trial = 0; trial < 1000; ++trial) {
    HyperfiniteSpec spec = random_spec(rng, 6);
    if (algebra::fdim(spec) != algebra::delta0_hyperfinite(spec)) {
      check.fail("fdim != delta0 at trial " + std::to_string(trial));
      return;
    }
  }
  check.detail << "exact equality on 1000 random specs";
}

void capacity_monotonicity(Check& check, const SuiteOptions& options) {
  Rng rng = derive_rng({options.seed, "capacity-monotone"}, 0);
  for (int trial = 0; trial < 500; ++trial) {
    int d = 1 + static_cast<int>(rng.next_u64() % 4);
    std::vector<int> a_dims;
    for (int i = 0; i < d; ++i) a_dims.push_back(1 + static_cast<int>(rng.next_u64() % 5));
    int s = 1 + static_cast<int>(rng.next_u64() % 4);
    std::vector<int> b_dims(s, 0);
    std::vector<std::vector<long>> entries(d, std::vector<long>(s, 0));
    for (int j = 0; j < s; ++j) {
      // Fill column j with a random unital combination of A blocks.
      while (b_dims[j] == 0) {
        for (int attempts = 0; attempts < 8; ++attempts) {
          int i = static_cast<int>(rng.next_u64() % d);
          if (b_dims[j] + a_dims[i] <= 5) {
            ++entries[i][j];
            b_dims[j] += a_dims[i];
          }
        }
      }
    }
    InclusionMatrix inclusion(entries, a_dims, b_dims);
    std::vector<long> counts;
    for (int j = 0; j < s; ++j) counts.push_back(1 + static_cast<long>(rng.next_u64() % 9));
    std::vector<Rational> b_weights;
    for (long c : counts) b_weights.push_back(make_rational(c, 7));
    FiniteDimAlgebra restricted = algebra::restrict_trace(inclusion, b_weights);
    FiniteDimAlgebra ambient(b_dims, b_weights);
    if (!(algebra::delta_capacity(restricted) <= algebra::delta_capacity(ambient))) {
      check.fail("capacity monotonicity failed at trial " + std::to_string(trial));
      return;
    }
  }
  check.detail << "capacity(A) <= capacity(B) exactly on 500 random unital inclusions";
}

void embedding_bounds(Check& check, const SuiteOptions& options) {
  Rng rng = derive_rng({options.seed, "embedding-bounds"}, 0);
  const double r = 0.5;
  long exercised = 0;
  for (int trial = 0; trial < 50; ++trial) {
    FiniteDimAlgebra n = random_state_algebra(rng, 3, 3);
    const double capacity = to_double(algebra::delta_capacity(n));
    long k0 = embed::build_embedding(n, 1, r).k0;
    for (long k = k0 + 1; k <= 300; ++k) {
      embed::EmbeddingReport report = embed::build_embedding(n, k, r);
      ++exercised;
      if (!(report.trace_error < r * r)) {
        check.fail("trace_error >= r^2 at k=" + std::to_string(k));
        return;
      }
      double kk = static_cast<double>(k) * k;
      if (!(kk * (capacity - r) < report.quotient_dim &&
            report.quotient_dim < kk * (capacity + r))) {
        check.fail("dimension bounds violated at k=" + std::to_string(k));
        return;
      }
    }
  }
  check.detail << exercised << " (algebra, k) pairs above threshold, zero violations";
}

void conjugacy_bound(Check& check, const SuiteOptions& options) {
  Rng rng = derive_rng({options.seed, "conjugacy"}, 0);
  const double slack = 1e-9 * options.tolerance_scale;
  for (int trial = 0; trial < 200; ++trial) {
    FiniteDimAlgebra n = random_state_algebra(rng, 3, 3);
    long k = 5 + static_cast<long>(rng.next_u64() % 56);
    auto random_rep = [&](void) {
      std::vector<long> mult(n.num_blocks(), 0);
      long remaining = k;
      for (int j = 0; j < n.num_blocks(); ++j) {
        long cap = remaining / n.block_dims[j];
        if (cap > 0) mult[j] = static_cast<long>(rng.next_u64() % (cap + 1));
        remaining -= mult[j] * n.block_dims[j];
      }
      return embed::Representation(n, mult, remaining);
    };
    embed::Representation rep1 = random_rep();
    embed::Representation rep2 = random_rep();
    auto [u, cert] = embed::conjugate_representations(rep1, rep2);
    (void)u;
    if (cert.max_relative_distance > 2.0 * cert.epsilon + slack) {
      check.fail("conjugacy bound violated at trial " + std::to_string(trial));
      return;
    }
    if (rep1.multiplicities == rep2.multiplicities &&
        cert.max_relative_distance > 1e-12 * options.tolerance_scale) {
      check.fail("equal multiplicities did not align exactly at trial " + std::to_string(trial));
      return;
    }
  }
  check.detail << "|u s1(b) u* - s2(b)|_2 <= 2 ||b|| eps on 200 random pairs";
}

void nearest_unitary_bound(Check& check, const SuiteOptions& options) {
  Rng rng = derive_rng({options.seed, "nearest-unitary"}, 0);
  RNGSeed haar_seed{options.seed, "nearest-unitary-haar"};
  const double algebraic = 1e-10 * options.tolerance_scale;
  const double slack = 1e-8 * options.tolerance_scale;
  for (int trial = 0; trial < 500; ++trial) {
    int k = 2 + static_cast<int>(rng.next_u64() % 39);
    int rank = 1 + static_cast<int>(rng.next_u64() % k);
    Matrix basis = linalg::haar_unitary(k, haar_seed, trial).leftCols(rank);
    Matrix p = basis * basis.adjoint();
    Matrix g(k, k);
    for (int i = 0; i < k; ++i) {
      for (int j = 0; j < k; ++j) g(i, j) = rng.complex_gaussian();
    }
    Matrix z = p * g * p * rng.uniform(0.0, 2.0);
    Matrix y = linalg::nearest_unitary_on_projection(z, p);
    if (linalg::hs_norm(Matrix(y * y.adjoint() - p)) > algebraic ||
        linalg::hs_norm(Matrix(y.adjoint() * y - p)) > algebraic) {
      check.fail("y y* = y* y = p violated at trial " + std::to_string(trial));
      return;
    }
    double lhs = linalg::hs_norm(Matrix(y - z));
    double rhs = 2.0 * linalg::hs_norm(Matrix(p - z.adjoint() * z));
    if (!(lhs <= rhs + slack)) {
      check.fail("|y - z|_2 bound violated at trial " + std::to_string(trial));
      return;
    }
  }
  check.detail << "identity to 1e-10 and |y - z|_2 <= 2 |p - z*z|_2 on 500 draws";
}

double brute_force_quotient_distance(const Matrix& u, const Matrix& v,
                                     const TractableSubgroup& h, int grid) {
  // All factor sizes are 1, so the subgroup element is one phase per factor
  // and the squared distance splits as a sum over factors; each phase is
  // minimized independently over the grid.
  Matrix w = v.adjoint() * u;
  const long k = h.k;
  double off_block = w.squaredNorm();
  long off = 0;
  double per_factor_min = 0.0;
  for (const auto& f : h.factors) {
    long span = f.mult * f.size;
    Matrix block = w.block(off, off, span, span);
    off_block -= block.squaredNorm();
    double best = std::numeric_limits<double>::infinity();
    for (int g = 0; g < grid; ++g) {
      double phi = 2.0 * M_PI * g / grid;
      Complex phase(std::cos(phi), std::sin(phi));
      double val = (block - phase * Matrix::Identity(span, span)).squaredNorm();
      best = std::min(best, val);
    }
    per_factor_min += best;
    off += span;
  }
  return std::sqrt((off_block + per_factor_min) / static_cast<double>(k));
}

void quotient_metric_exactness(Check& check, const SuiteOptions& options) {
  Rng rng = derive_rng({options.seed, "quotient-metric"}, 0);
  RNGSeed haar_seed{options.seed, "quotient-metric-haar"};
  const double grid_tol = 1e-3 * options.tolerance_scale;

  Matrix u0(2, 2);
  u0 << 1.0, 0.0, 0.0, Complex(0.0, 1.0);
  double scalar_case =
      geometry::quotient_distance_d2(u0, Matrix::Identity(2, 2), TractableSubgroup::scalars(2));
  if (std::abs(scalar_case - 2.0 * std::sin(M_PI / 8.0)) > 1e-6 * options.tolerance_scale) {
    check.fail("scalar theta = pi/2 case missed 2 sin(pi/8)");
    return;
  }

  for (int trial = 0; trial < 100; ++trial) {
    int k = 2 + static_cast<int>(rng.next_u64() % 2);
    std::vector<TractableSubgroup> candidates{TractableSubgroup::scalars(k),
                                              TractableSubgroup::torus(k)};
    if (k == 3) candidates.push_back(TractableSubgroup(3, {{1, 1}, {2, 1}}));
    const TractableSubgroup& h = candidates[rng.next_u64() % candidates.size()];
    Matrix u = linalg::haar_unitary(k, haar_seed, 2 * trial);
    Matrix v = linalg::haar_unitary(k, haar_seed, 2 * trial + 1);
    double exact = geometry::quotient_distance_d2(u, v, h);
    double brute = brute_force_quotient_distance(u, v, h, 20000);
    if (std::abs(exact - brute) > grid_tol) {
      check.fail("quotient distance missed brute force at trial " + std::to_string(trial));
      return;
    }
  }
  check.detail << "matches phase-grid minimization within 1e-3 on 100 instances";
}

// Torus U(1)^m sampled uniformly; metric is the max of the coordinate chord
// distances.
struct TorusSampler {
  int m;
  RNGSeed seed;

  std::vector<double> operator()(std::uint64_t index) const {
    Rng rng = derive_rng(seed, index);
    std::vector<double> angles(m);
    for (int i = 0; i < m; ++i) angles[i] = rng.uniform(0.0, 2.0 * M_PI);
    return angles;
  }
};

double torus_metric(const std::vector<double>& a, const std::vector<double>& b) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    worst = std::max(worst, 2.0 * std::abs(std::sin(0.5 * (a[i] - b[i]))));
  }
  return worst;
}

void packing_duality_and_scaling(Check& check, const SuiteOptions& options) {
  auto verify_duality = [&](const geometry::PackingResult& result, const char* what) {
    for (std::size_t i = 0; i < result.epsilons.size(); ++i) {
      if (result.covering_counts[i] > result.packing_counts[i]) {
        check.fail(std::string(what) + ": cover > pack");
        return false;
      }
      for (std::size_t j = 0; j < result.epsilons.size(); ++j) {
        if (result.epsilons[i] >= 2.0 * result.epsilons[j] &&
            result.packing_counts[i] > result.covering_counts[j]) {
          check.fail(std::string(what) + ": pack(2eps) > cover(eps)");
          return false;
        }
      }
    }
    return true;
  };

  for (int m = 1; m <= 3; ++m) {
    std::vector<double> grid;
    double eps0 = (m == 1) ? 0.50 : (m == 2) ? 0.80 : 1.20;
    for (int i = 0; i < 5; ++i) grid.push_back(eps0 * std::pow(0.8, i));
    long budget = (m == 1) ? 4096 : (m == 2) ? 16384 : 32768;
    TorusSampler sampler{m, {options.seed, "torus-" + std::to_string(m)}};
    auto result = geometry::run_packing_experiment<std::vector<double>>(
        sampler, torus_metric, grid, budget, {options.seed, "torus"});
    if (!verify_duality(result, "torus")) return;
    double fit = geometry::exponent_fit(result.epsilons, result.packing_counts);
    if (std::abs(fit - m) > 0.2 * m) {
      std::ostringstream msg;
      msg << "torus exponent " << fit << " outside " << m << " +- 20%";
      check.fail(msg.str());
      return;
    }
  }

  // U_2 modulo its scalars, sampled along the Haar orbit.
  TractableSubgroup scalars = TractableSubgroup::scalars(2);
  RNGSeed orbit_seed{options.seed, "u2-mod-scalars"};
  auto sampler = [&](std::uint64_t index) { return linalg::haar_unitary(2, orbit_seed, index); };
  auto metric = [&](const Matrix& a, const Matrix& b) {
    return geometry::quotient_distance_d2(a, b, scalars);
  };
  std::vector<double> grid;
  for (int i = 0; i < 5; ++i) grid.push_back(0.9 * std::pow(0.8, i));
  auto result = geometry::run_packing_experiment<Matrix>(sampler, metric, grid, 4000,
                                                         orbit_seed);
  if (!verify_duality(result, "u2/scalars")) return;
  double fit = geometry::exponent_fit(result.epsilons, result.packing_counts);
  if (!(2.1 <= fit && fit <= 3.9)) {
    std::ostringstream msg;
    msg << "U_2/U(1) exponent " << fit << " outside [2.1, 3.9]";
    check.fail(msg.str());
    return;
  }
  std::ostringstream msg;
  msg << "duality held on every run; U_2/U(1) exponent " << std::fixed << fit;
  check.detail << msg.str();
}

void microstate_exactness(Check& check, const SuiteOptions& options) {
  const double gamma = 1e-9 * options.tolerance_scale;
  struct Case {
    FiniteDimAlgebra algebra;
    std::vector<long> ks;
  };
  std::vector<Case> cases;
  cases.push_back({FiniteDimAlgebra({2, 1}, {Rational(1, 2), Rational(1, 2)}), {4, 8}});
  cases.push_back({FiniteDimAlgebra({3, 1}, {Rational(1, 2), Rational(1, 2)}), {6, 12}});
  for (const auto& c : cases) {
    for (long k : c.ks) {
      embed::EmbeddingReport report = embed::build_embedding(c.algebra, k, 0.5);
      if (report.trace_error != 0.0) {
        check.fail("divisible k did not give an exact trace");
        return;
      }
      auto [b1, b2] = algebra::selfadjoint_generator_pair(c.algebra);
      std::vector<Matrix> images{report.representation.apply(b1),
                                 report.representation.apply(b2)};
      microstates::AlgebraMomentOracle oracle(c.algebra, {b1, b2});
      double radius = std::max(linalg::op_norm(b1), linalg::op_norm(b2)) + 1e-9;
      auto membership =
          microstates::check_gamma_membership(images, oracle, {6, gamma, radius});
      if (!membership.member) {
        std::ostringstream msg;
        msg << "sigma_k images left the microstate set at k=" << k
            << " (worst deviation " << membership.worst_deviation << ")";
        check.fail(msg.str());
        return;
      }
    }
  }

  algebra::SpectralMeasure two_atoms({{-1.0, Rational(1, 2)}, {1.0, Rational(1, 2)}});
  Matrix diag = microstates::diagonal_microstate(two_atoms, 8);
  microstates::SpectralMeasureOracle oracle(two_atoms);
  for (int m = 1; m <= 8; ++m) {
    auto membership =
        microstates::check_gamma_membership({diag}, oracle, {m, gamma, 1.0 + 1e-12});
    if (!membership.member) {
      check.fail("two-atom diagonal microstate failed at m=" + std::to_string(m));
      return;
    }
  }
  check.detail << "exact embeddings and two-atom diagonals pass at gamma = 1e-9";
}

void asymptotic_freeness(Check& check, const SuiteOptions& options) {
  const int k = 200;
  Matrix projection = Matrix::Zero(k, k);
  for (int i = 0; i < k / 2; ++i) projection(i, i) = 1.0;
  double frequency = microstates::asymptotic_freeness_experiment(
      {projection}, {projection}, 200, 2, 0.05, {options.seed, "freeness"});
  if (!(frequency >= 0.95)) {
    std::ostringstream msg;
    msg << "freeness frequency " << frequency << " < 0.95";
    check.fail(msg.str());
    return;
  }
  std::ostringstream msg;
  msg << "surrogate-free in " << frequency * 100.0 << "% of 200 trials";
  check.detail << msg.str();
}

void alignment_radius(Check& check, const SuiteOptions& options) {
  Rng rng = derive_rng({options.seed, "alignment"}, 0);
  for (int trial = 0; trial < 100; ++trial) {
    FiniteDimAlgebra n = random_state_algebra(rng, 3, 3);
    long k = 10 + static_cast<long>(rng.next_u64() % 31);

    auto rounded_rep = [&](long jitter_mask) {
      std::vector<long> mult(n.num_blocks(), 0);
      long used = 0;
      for (int j = 0; j < n.num_blocks(); ++j) {
        double ideal = to_double(n.block_weights[j]) * k / n.block_dims[j];
        long l = std::lround(ideal);
        if (jitter_mask & (1L << j)) l += (rng.next_u64() % 2 == 0) ? -1 : 1;
        l = std::max<long>(0, l);
        while (used + l * n.block_dims[j] > k) --l;
        mult[j] = std::max<long>(0, l);
        used += mult[j] * n.block_dims[j];
      }
      return embed::Representation(n, mult, k - used);
    };
    embed::Representation sigma = rounded_rep(0);
    embed::Representation pi = rounded_rep(static_cast<long>(rng.next_u64() % 4));

    double trace_gap =
        std::max(to_double(trace_functional_distance(sigma, n.block_weights)),
                 to_double(trace_functional_distance(pi, n.block_weights)));
    double epsilon = std::sqrt(trace_gap + 0.05);
    double delta = 0.4 * epsilon;

    auto [b1, b2] = algebra::selfadjoint_generator_pair(n);
    geometry::Tuple xs, ys;
    for (const auto& b : {b1, b2}) {
      Matrix sx = linalg::random_selfadjoint(static_cast<int>(k), rng);
      Matrix sy = linalg::random_selfadjoint(static_cast<int>(k), rng);
      xs.push_back(sigma.apply(b) + sx * (delta * rng.uniform01() / linalg::hs_norm(sx)));
      ys.push_back(pi.apply(b) + sy * (delta * rng.uniform01() / linalg::hs_norm(sy)));
    }
    auto result = embed::align_microstates(xs, ys, n, epsilon, sigma, pi);
    if (!result.within_radius) {
      std::ostringstream msg;
      msg << "alignment radius exceeded at trial " << trial << ": " << result.max_distance
          << " > " << result.radius;
      check.fail(msg.str());
      return;
    }
  }
  check.detail << "max_i |u x_i u* - y_i|_2 <= 2 eps (1 + sqrt(2) R) on 100 trials";
}

void volume_formulas(Check& check, const SuiteOptions& options) {
  if (std::abs(geometry::ball_volume_theta(1) - 2.0) > 1e-12 * options.tolerance_scale) {
    check.fail("Theta_1 != 2");
    return;
  }
  auto lambda1 = geometry::estimate_opnorm_ball_volume(1, 20000, {options.seed, "volume-1"});
  if (std::abs(lambda1.estimate - 2.0) > 3.0 * lambda1.stderr_ + 1e-9) {
    check.fail("Lambda_1 estimate missed 2 beyond 3 stderr");
    return;
  }
  auto lambda2 = geometry::estimate_opnorm_ball_volume(2, 20000, {options.seed, "volume-2"});
  double theta2 = geometry::ball_volume_theta(2);
  double ratio = lambda2.estimate / theta2;
  double ratio_stderr = lambda2.stderr_ / theta2;
  if (!(ratio <= 1.0 + 3.0 * ratio_stderr)) {
    check.fail("Lambda_2 / Theta_2 exceeded 1 beyond 3 stderr");
    return;
  }
  std::ostringstream msg;
  msg << "Theta_1 = 2 exactly; Lambda_1 within 3 stderr; Lambda_2/Theta_2 = " << ratio;
  check.detail << msg.str();
}

}  // namespace

std::vector<CriterionResult> run_all(const SuiteOptions& options) {
  const std::vector<std::pair<std::string, CriterionFn>> criteria = {
      {"closed-form-invariant", closed_form_matrix_blocks},
      {"fdim-equals-delta0", fdim_equals_delta0},
      {"capacity-monotonicity", capacity_monotonicity},
      {"embedding-bounds", embedding_bounds},
      {"conjugacy-bound", conjugacy_bound},
      {"nearest-unitary-bound", nearest_unitary_bound},
      {"quotient-metric-exactness", quotient_metric_exactness},
      {"packing-duality-scaling", packing_duality_and_scaling},
      {"microstate-exactness", microstate_exactness},
      {"asymptotic-freeness", asymptotic_freeness},
      {"alignment-radius", alignment_radius},
      {"volume-formulas", volume_formulas},
  };
  std::vector<CriterionResult> results;
  results.reserve(criteria.size());
  int index = 1;
  for (const auto& [name, fn] : criteria) {
    CriterionResult result;
    result.index = index++;
    result.name = name;
    auto start = std::chrono::steady_clock::now();
    Check check;
    try {
      fn(check, options);
    } catch (const std::exception& e) {
      check.fail(std::string("exception: ") + e.what());
    }
    auto stop = std::chrono::steady_clock::now();
    result.passed = check.ok;
    result.detail = check.detail.str();
    result.seconds = std::chrono::duration<double>(stop - start).count();
    results.push_back(std::move(result));
  }
  return results;
}

bool all_passed(const std::vector<CriterionResult>& results) {
  for (const auto& r : results) {
    if (!r.passed) return false;
  }
  return true;
}

std::string format_line(const CriterionResult& r) {
  char buf[512];
  std::snprintf(buf, sizeof(buf), "%s %2d %-28s (%.2fs)  %s", r.passed ? "PASS" : "FAIL",
                r.index, r.name.c_str(), r.seconds, r.detail.c_str());
  return buf;
}

}  // namespace msl::acceptance
