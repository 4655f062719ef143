#pragma once

#include "msl/block_matrix.hpp"
#include "msl/polynomials.hpp"
#include "msl/rational.hpp"
#include "msl/rng.hpp"

#include <utility>
#include <vector>

namespace msl::linalg {

/// Normalized Hilbert-Schmidt norm (tr_k(x*x))^{1/2} on M_k.
double hs_norm(const Matrix& x);

/// Weighted Hilbert-Schmidt norm (phi(x*x))^{1/2} where phi assigns weight
/// w_j to the normalized trace of block j.
double hs_norm(const BlockMatrix& x, const std::vector<Rational>& weights);

/// Largest singular value (across blocks for the block overload).
double op_norm(const Matrix& x);
double op_norm(const BlockMatrix& x);

/// |.|_2-nearest unitary to a square matrix: SVD with singular values
/// replaced by 1. On the kernel the left/right singular vectors of the zero
/// singular values are paired in index order, so the completion is
/// deterministic.
Matrix polar_unitary(const Matrix& z);

/// Thrown when z is not supported under p (zz*, z*z <= |z*z| p fails).
struct SupportError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Nearest-unitary completion on a projection: returns y with
/// yy* = y*y = p and |y - z|_2 <= 2 |p - z*z|_2. The partial isometry part
/// comes from the polar decomposition of z; the defect is filled with an
/// index-ordered isometry between the two defect projections.
Matrix nearest_unitary_on_projection(const Matrix& z, const Matrix& p);

/// Haar-distributed unitary in U_k: QR of a complex Gaussian matrix with the
/// diagonal phase correction applied to R.
Matrix haar_unitary(int k, const RNGSeed& seed, std::uint64_t index = 0);

/// Evaluates a noncommutative polynomial on square matrices of one size.
Matrix apply_nc_polynomial(const NCPolynomial& f, const std::vector<Matrix>& args);

/// Chebyshev approximation of the clamp t -> max(-r, min(t, r)) on
/// [-L1, L1], accurate to sup error <= tol. Throws std::invalid_argument when
/// tol is unreachable within the degree cap.
ChebyshevPolynomial clamp_polynomial(double r, double l1, double tol, int degree_cap = 512);

/// Applies a scalar polynomial to a self-adjoint matrix through its
/// eigendecomposition.
Matrix apply_to_selfadjoint(const ChebyshevPolynomial& h, const Matrix& b);
Matrix apply_to_selfadjoint(const Polynomial& h, const Matrix& b);

/// Empirical Lipschitz constant of f on operator-norm-R tuples in M_k:
/// max sampled ratio |f(xs) - f(ys)|_2 / max_i |xs_i - ys_i|_2. Nondecreasing
/// in `trials` for a fixed seed stream.
double lipschitz_estimate(const NCPolynomial& f, double radius, int k, int trials,
                          const RNGSeed& seed);

/// GUE-style random self-adjoint matrix (unnormalized).
Matrix random_selfadjoint(int k, Rng& rng);

/// Random self-adjoint matrix rescaled to operator norm <= radius.
Matrix random_selfadjoint_bounded(int k, double radius, Rng& rng);

}  // namespace msl::linalg
