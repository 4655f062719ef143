#include "msl/microstates.hpp"

#include "msl/linalg.hpp"
#include "msl/tolerances.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace msl::microstates {

MicrostateSpec::MicrostateSpec(int m_, double gamma_, double radius_)
    : m(m_), gamma(gamma_), radius(radius_) {
  if (m < 1) throw std::invalid_argument("m must be >= 1");
  if (!(gamma > 0)) throw std::invalid_argument("gamma must be > 0");
  if (!(radius > 0)) throw std::invalid_argument("R must be > 0");
}

AlgebraMomentOracle::AlgebraMomentOracle(algebra::FiniteDimAlgebra algebra,
                                         std::vector<BlockMatrix> elements)
    : algebra_(std::move(algebra)), elements_(std::move(elements)) {
  for (const auto& e : elements_) {
    if (e.shape() != algebra_.block_dims) throw std::invalid_argument("element shape mismatch");
  }
}

Complex AlgebraMomentOracle::moment(const std::vector<int>& word) const {
  return algebra::exact_moment(elements_, algebra_, word);
}

Complex SemicircularOracle::moment(const std::vector<int>& word) const {
  // Non-crossing pairings of identically-labelled letters; each pair carries
  // the second moment 1/4. Recursion on the first letter with memoization.
  std::map<std::pair<int, int>, double> memo;
  std::function<double(int, int)> eval = [&](int lo, int hi) -> double {
    if (lo >= hi) return 1.0;
    if ((hi - lo) % 2 != 0) return 0.0;
    auto key = std::make_pair(lo, hi);
    auto it = memo.find(key);
    if (it != memo.end()) return it->second;
    double acc = 0.0;
    for (int t = lo + 1; t < hi; t += 2) {
      if (word[t] != word[lo]) continue;
      acc += 0.25 * eval(lo + 1, t) * eval(t + 1, hi);
    }
    memo[key] = acc;
    return acc;
  };
  return eval(0, static_cast<int>(word.size()));
}

Rational semicircular_moment(long d) {
  if (d < 0) throw std::invalid_argument("moment order must be >= 0");
  if (d % 2 == 1) return Rational(0);
  const long half = d / 2;
  mpz_class catalan;
  mpz_bin_uiui(catalan.get_mpz_t(), 2 * half, half);
  catalan /= (half + 1);
  mpz_class denom = 1;
  mpz_mul_2exp(denom.get_mpz_t(), denom.get_mpz_t(), 2 * half);  // 4^half
  Rational out(catalan, denom);
  out.canonicalize();
  return out;
}

namespace {

// Canonical-rotation test: true iff `word` is the lexicographically smallest
// among its cyclic rotations.
bool is_canonical_rotation(const std::vector<int>& word) {
  const std::size_t n = word.size();
  for (std::size_t shift = 1; shift < n; ++shift) {
    for (std::size_t i = 0; i < n; ++i) {
      int a = word[i];
      int b = word[(i + shift) % n];
      if (b < a) return false;
      if (b > a) break;
    }
  }
  return true;
}

}  // namespace

MembershipResult check_gamma_membership(const std::vector<Matrix>& tuple,
                                        const MomentOracle& oracle, const MicrostateSpec& spec) {
  const int n = static_cast<int>(tuple.size());
  if (n != oracle.arity()) throw std::invalid_argument("tuple arity does not match oracle");
  if (n == 0) throw std::invalid_argument("empty tuple");
  const long k = tuple.front().rows();
  for (const auto& x : tuple) {
    if (x.rows() != k || x.cols() != k) throw std::invalid_argument("tuple shape mismatch");
  }

  double word_count = 0.0;
  for (int p = 1; p <= spec.m; ++p) word_count += std::pow(static_cast<double>(n), p);
  if (word_count > 1e7) throw std::invalid_argument("word enumeration exceeds the cost guard");

  MembershipResult result;
  result.member = true;
  for (const auto& x : tuple) {
    if (linalg::op_norm(x) > spec.radius) {
      result.member = false;
      result.worst_deviation = std::numeric_limits<double>::infinity();
      return result;
    }
  }

  std::vector<int> word;
  for (int length = 1; length <= spec.m; ++length) {
    word.assign(length, 0);
    while (true) {
      if (is_canonical_rotation(word)) {
        Matrix prod = tuple[word[0]];
        for (int i = 1; i < length; ++i) prod = prod * tuple[word[i]];
        Complex trace = prod.trace() / static_cast<double>(k);
        double deviation = std::abs(trace - oracle.moment(word));
        if (deviation > result.worst_deviation) {
          result.worst_deviation = deviation;
          result.worst_word = word;
        }
        if (!(deviation < spec.gamma)) result.member = false;
      }
      int pos = length - 1;
      while (pos >= 0 && word[pos] == n - 1) word[pos--] = 0;
      if (pos < 0) break;
      ++word[pos];
    }
  }
  return result;
}

bool check_T_membership(const std::vector<Matrix>& tuple, const embed::Homomorphism& witness,
                        const algebra::FiniteDimAlgebra& n, double epsilon) {
  auto [b1, b2] = algebra::selfadjoint_generator_pair(n);
  const std::vector<BlockMatrix> generators{b1, b2};
  if (tuple.size() != generators.size()) {
    throw std::invalid_argument("tuple must match the canonical generator pair");
  }
  for (const auto& x : tuple) {
    if (x.rows() != witness.k() || x.cols() != witness.k()) {
      throw std::invalid_argument("tuple dimension does not match the witness");
    }
  }
  for (std::size_t i = 0; i < generators.size(); ++i) {
    if (linalg::hs_norm(Matrix(witness.apply(generators[i]) - tuple[i])) > epsilon) return false;
  }
  return to_double(trace_functional_distance(witness.rep, n.block_weights)) < epsilon * epsilon;
}

Matrix diagonal_microstate(const algebra::SpectralMeasure& mu, int k) {
  if (k < 1) throw std::invalid_argument("k must be >= 1");
  Matrix out = Matrix::Zero(k, k);
  for (int j = 1; j <= k; ++j) {
    Rational u = make_rational(2 * j - 1, 2 * static_cast<long>(k));
    out(j - 1, j - 1) = mu.quantile(u);
  }
  return out;
}

namespace {

// Centered words of each family, indexed by degree.
std::vector<std::vector<Matrix>> centered_words(const std::vector<Matrix>& family, int max_degree,
                                                long k) {
  std::vector<std::vector<Matrix>> by_degree(max_degree + 1);
  std::vector<Matrix> current{Matrix::Identity(k, k)};
  for (int degree = 1; degree <= max_degree; ++degree) {
    std::vector<Matrix> next;
    next.reserve(current.size() * family.size());
    for (const auto& w : current) {
      for (const auto& x : family) next.push_back(w * x);
    }
    for (const auto& w : next) {
      Complex mean = w.trace() / static_cast<double>(k);
      by_degree[degree].push_back(w - mean * Matrix::Identity(k, k));
    }
    current = std::move(next);
  }
  return by_degree;
}

void max_alternating_trace(const std::vector<std::vector<Matrix>>& first,
                           const std::vector<std::vector<Matrix>>& second, int degree_left,
                           const Matrix& prefix, bool prefix_empty, long k, double& worst) {
  // Extend the product by one centered factor from `first`, then alternate.
  for (int d = 1; d <= degree_left; ++d) {
    for (const auto& w : first[d]) {
      Matrix extended = prefix_empty ? w : Matrix(prefix * w);
      worst = std::max(worst, std::abs(extended.trace()) / static_cast<double>(k));
      max_alternating_trace(second, first, degree_left - d, extended, false, k, worst);
    }
  }
}

}  // namespace

double freeness_defect(const std::vector<Matrix>& xs, const std::vector<Matrix>& ys, int m) {
  if (m < 1) throw std::invalid_argument("m must be >= 1");
  if (xs.empty() || ys.empty()) throw std::invalid_argument("families must be nonempty");
  const long k = xs.front().rows();
  for (const auto& x : xs) {
    if (x.rows() != k || x.cols() != k) throw std::invalid_argument("shape mismatch");
  }
  for (const auto& y : ys) {
    if (y.rows() != k || y.cols() != k) throw std::invalid_argument("shape mismatch");
  }
  const double branch = static_cast<double>(std::max(xs.size(), ys.size()));
  double products = std::pow(branch + 1.0, m) * std::pow(2.0, m);
  if (products > 1e6) throw std::invalid_argument("alternating enumeration exceeds cost guard");

  auto x_words = centered_words(xs, m, k);
  auto y_words = centered_words(ys, m, k);
  double worst = 0.0;
  Matrix empty;
  max_alternating_trace(x_words, y_words, m, empty, true, k, worst);
  max_alternating_trace(y_words, x_words, m, empty, true, k, worst);
  return worst;
}

double asymptotic_freeness_experiment(const std::vector<Matrix>& xs,
                                      const std::vector<Matrix>& ys, int trials, int m,
                                      double gamma, const RNGSeed& seed,
                                      std::vector<double>* defects_out) {
  if (trials < 1) throw std::invalid_argument("trials must be >= 1");
  if (xs.empty() || ys.empty()) throw std::invalid_argument("families must be nonempty");
  const long k = xs.front().rows();
  long members = 0;
  for (int t = 0; t < trials; ++t) {
    Matrix u = linalg::haar_unitary(static_cast<int>(k), seed, static_cast<std::uint64_t>(t));
    std::vector<Matrix> conjugated;
    conjugated.reserve(ys.size());
    for (const auto& y : ys) conjugated.push_back(u * y * u.adjoint());
    double defect = freeness_defect(xs, conjugated, m);
    if (defects_out) defects_out->push_back(defect);
    if (defect < gamma) ++members;
  }
  return static_cast<double>(members) / trials;
}

}  // namespace msl::microstates
