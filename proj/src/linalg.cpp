#include "msl/linalg.hpp"

#include "msl/tolerances.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace msl::linalg {

double hs_norm(const Matrix& x) {
  return x.norm() / std::sqrt(static_cast<double>(x.rows()));
}

double hs_norm(const BlockMatrix& x, const std::vector<Rational>& weights) {
  if (weights.size() != x.num_blocks()) throw std::invalid_argument("weight/block mismatch");
  double acc = 0.0;
  for (std::size_t j = 0; j < x.num_blocks(); ++j) {
    const Matrix& b = x.blocks[j];
    acc += to_double(weights[j]) * b.squaredNorm() / static_cast<double>(b.rows());
  }
  return std::sqrt(acc);
}

double op_norm(const Matrix& x) {
  if (x.rows() == 0) return 0.0;
  if (x.rows() == 1) return std::abs(x(0, 0));
  Eigen::SelfAdjointEigenSolver<Matrix> es(x.adjoint() * x, Eigen::EigenvaluesOnly);
  double top = es.eigenvalues().maxCoeff();
  return std::sqrt(std::max(0.0, top));
}

double op_norm(const BlockMatrix& x) {
  double top = 0.0;
  for (const auto& b : x.blocks) top = std::max(top, op_norm(b));
  return top;
}

Matrix polar_unitary(const Matrix& z) {
  if (z.rows() != z.cols()) throw std::invalid_argument("polar_unitary: not square");
  if (z.rows() == 0) return z;
  Eigen::JacobiSVD<Matrix> svd(z, Eigen::ComputeFullU | Eigen::ComputeFullV);
  return svd.matrixU() * svd.matrixV().adjoint();
}

// Orthonormal column basis of the range of a (numerical) projection.
static Matrix projection_basis(const Matrix& p) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(p);
  long rank = 0;
  for (long i = 0; i < p.rows(); ++i) {
    if (es.eigenvalues()(i) > 0.5) ++rank;
  }
  // SelfAdjointEigenSolver sorts ascending, so range vectors sit at the tail.
  return es.eigenvectors().rightCols(rank);
}

Matrix nearest_unitary_on_projection(const Matrix& z, const Matrix& p) {
  const double tol = tolerances().metric;
  if (z.rows() != z.cols() || p.rows() != p.cols() || z.rows() != p.rows()) {
    throw std::invalid_argument("shape mismatch");
  }
  const long k = z.rows();
  if ((p * p - p).norm() > tol * k || (p - p.adjoint()).norm() > tol * k) {
    throw SupportError("p is not a projection");
  }
  const Matrix id = Matrix::Identity(k, k);
  double scale = std::max(1.0, z.norm());
  if (((id - p) * z).norm() > tol * scale || (z * (id - p)).norm() > tol * scale) {
    throw SupportError("z is not supported under p");
  }

  Eigen::JacobiSVD<Matrix> svd(z, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  double cutoff = sv.size() > 0 ? sv(0) * 1e-12 : 0.0;
  long rank = 0;
  for (long i = 0; i < sv.size(); ++i) {
    if (sv(i) > cutoff && sv(i) > 0.0) ++rank;
  }
  Matrix partial = svd.matrixU().leftCols(rank) * svd.matrixV().leftCols(rank).adjoint();

  Matrix defect_left = p - partial * partial.adjoint();
  Matrix defect_right = p - partial.adjoint() * partial;
  Matrix basis_left = projection_basis(defect_left);
  Matrix basis_right = projection_basis(defect_right);
  if (basis_left.cols() != basis_right.cols()) {
    throw SupportError("defect projections have mismatched ranks");
  }
  return partial + basis_left * basis_right.adjoint();
}

Matrix haar_unitary(int k, const RNGSeed& seed, std::uint64_t index) {
  if (k < 1) throw std::invalid_argument("haar_unitary: k must be >= 1");
  Rng rng = derive_rng(seed, index);
  Matrix g(k, k);
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < k; ++j) g(i, j) = rng.complex_gaussian();
  }
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ();
  Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int i = 0; i < k; ++i) {
    Complex d = r(i, i);
    double a = std::abs(d);
    q.col(i) *= (a > 0.0) ? d / a : Complex(1.0, 0.0);
  }
  return q;
}

Matrix apply_nc_polynomial(const NCPolynomial& f, const std::vector<Matrix>& args) {
  if (static_cast<int>(args.size()) != f.arity) throw std::invalid_argument("arity mismatch");
  long k = args.empty() ? 1 : args.front().rows();
  for (const auto& a : args) {
    if (a.rows() != k || a.cols() != k) throw std::invalid_argument("argument shape mismatch");
  }
  Matrix acc = Matrix::Zero(k, k);
  for (const auto& term : f.terms) {
    Matrix prod = Matrix::Identity(k, k);
    for (int g : term.word) prod *= args[g];
    acc += term.coeff * prod;
  }
  return acc;
}

ChebyshevPolynomial clamp_polynomial(double r, double l1, double tol, int degree_cap) {
  if (!(0.0 < r && r < l1)) throw std::invalid_argument("need 0 < r < L1");
  if (!(tol > 0.0)) throw std::invalid_argument("need tol > 0");

  auto clamp = [r](double t) { return std::max(-r, std::min(t, r)); };

  // Chebyshev coefficients by Gauss-Chebyshev quadrature on the pulled-back
  // clamp g(theta) = f(L1 cos theta).
  const int quad = 8192;
  std::vector<double> g(quad);
  for (int j = 0; j < quad; ++j) {
    double theta = M_PI * (j + 0.5) / quad;
    g[j] = clamp(l1 * std::cos(theta));
  }
  std::vector<double> coeff(degree_cap + 1, 0.0);
  for (int n = 0; n <= degree_cap; ++n) {
    double acc = 0.0;
    for (int j = 0; j < quad; ++j) acc += g[j] * std::cos(n * M_PI * (j + 0.5) / quad);
    coeff[n] = acc * ((n == 0) ? 1.0 : 2.0) / quad;
  }

  auto sup_error = [&](int degree) {
    ChebyshevPolynomial h{-l1, l1, {coeff.begin(), coeff.begin() + degree + 1}};
    const int grid = 40001;
    double worst = 0.0;
    for (int j = 0; j < grid; ++j) {
      double t = -l1 + 2.0 * l1 * j / (grid - 1);
      worst = std::max(worst, std::abs(h(t) - clamp(t)));
    }
    return worst;
  };

  // Coefficient tails bound the sup error; verify the candidate on a grid and
  // walk upward if the bound was optimistic.
  double tail = 0.0;
  for (int n = 1; n <= degree_cap; ++n) tail += std::abs(coeff[n]);
  int degree = degree_cap;
  double running = tail;
  for (int n = 1; n <= degree_cap; ++n) {
    running -= std::abs(coeff[n]);
    if (running <= 0.90 * tol) {
      degree = n;
      break;
    }
  }
  while (degree <= degree_cap && sup_error(degree) > tol) ++degree;
  if (degree > degree_cap) {
    throw std::invalid_argument("clamp_polynomial: tol unreachable within degree cap");
  }
  return ChebyshevPolynomial{-l1, l1, {coeff.begin(), coeff.begin() + degree + 1}};
}

template <class Poly>
static Matrix apply_scalar_function(const Poly& h, const Matrix& b) {
  if (b.rows() != b.cols()) throw std::invalid_argument("not square");
  Eigen::SelfAdjointEigenSolver<Matrix> es(b);
  Eigen::VectorXd vals = es.eigenvalues();
  Eigen::VectorXcd mapped(vals.size());
  for (long i = 0; i < vals.size(); ++i) mapped(i) = h(vals(i));
  return es.eigenvectors() * mapped.asDiagonal() * es.eigenvectors().adjoint();
}

Matrix apply_to_selfadjoint(const ChebyshevPolynomial& h, const Matrix& b) {
  return apply_scalar_function(h, b);
}

Matrix apply_to_selfadjoint(const Polynomial& h, const Matrix& b) {
  return apply_scalar_function(h, b);
}

Matrix random_selfadjoint(int k, Rng& rng) {
  Matrix g(k, k);
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < k; ++j) g(i, j) = rng.complex_gaussian();
  }
  return 0.5 * (g + Matrix(g.adjoint()));
}

Matrix random_selfadjoint_bounded(int k, double radius, Rng& rng) {
  Matrix h = random_selfadjoint(k, rng);
  double top = op_norm(h);
  if (top == 0.0) return h;
  return h * (radius * rng.uniform01() / top);
}

double lipschitz_estimate(const NCPolynomial& f, double radius, int k, int trials,
                          const RNGSeed& seed) {
  if (trials < 1) throw std::invalid_argument("trials must be >= 1");
  double best = 0.0;
  for (int t = 0; t < trials; ++t) {
    Rng rng = derive_rng(seed, static_cast<std::uint64_t>(t));
    std::vector<Matrix> xs(f.arity), ys(f.arity);
    bool nearby = (t % 2 == 1);
    double delta = radius * std::pow(10.0, -3.0 * rng.uniform01());
    for (int i = 0; i < f.arity; ++i) {
      xs[i] = random_selfadjoint_bounded(k, radius, rng);
      if (nearby) {
        Matrix step = random_selfadjoint(k, rng);
        double top = op_norm(step);
        ys[i] = xs[i] + (top > 0 ? step * (delta / top) : step);
        double yn = op_norm(ys[i]);
        if (yn > radius) ys[i] *= radius / yn;
      } else {
        ys[i] = random_selfadjoint_bounded(k, radius, rng);
      }
    }
    double den = 0.0;
    for (int i = 0; i < f.arity; ++i) den = std::max(den, hs_norm(Matrix(xs[i] - ys[i])));
    if (den < 1e-14) continue;
    double num = hs_norm(Matrix(apply_nc_polynomial(f, xs) - apply_nc_polynomial(f, ys)));
    best = std::max(best, num / den);
  }
  return best;
}

}  // namespace msl::linalg
