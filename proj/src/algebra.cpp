#include "msl/algebra.hpp"

#include <Eigen/QR>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace msl::algebra {

FiniteDimAlgebra::FiniteDimAlgebra(std::vector<int> dims, std::vector<Rational> weights)
    : block_dims(std::move(dims)), block_weights(std::move(weights)) {
  if (block_dims.empty()) throw std::invalid_argument("algebra needs at least one block");
  if (block_dims.size() != block_weights.size()) {
    throw std::invalid_argument("dims/weights size mismatch");
  }
  for (int n : block_dims) {
    if (n < 1) throw std::invalid_argument("block dimension must be >= 1");
  }
  for (const auto& w : block_weights) {
    if (w < 0) throw std::invalid_argument("block weight must be >= 0");
  }
}

bool FiniteDimAlgebra::is_state() const {
  Rational total(0);
  for (const auto& w : block_weights) total += w;
  return total == 1;
}

long FiniteDimAlgebra::total_matrix_dim() const {
  long n = 0;
  for (int d : block_dims) n += d;
  return n;
}

long FiniteDimAlgebra::complex_dimension() const {
  long n = 0;
  for (int d : block_dims) n += static_cast<long>(d) * d;
  return n;
}

HyperfiniteSpec::HyperfiniteSpec(Rational diffuse, std::vector<Block> blocks_, bool infinite_part)
    : diffuse_weight(std::move(diffuse)), blocks(std::move(blocks_)),
      has_infinite_part(infinite_part) {
  if (diffuse_weight < 0) throw std::invalid_argument("diffuse weight must be >= 0");
  Rational total = diffuse_weight;
  for (const auto& b : blocks) {
    if (b.dim < 1) throw std::invalid_argument("block dimension must be >= 1");
    if (b.weight <= 0) throw std::invalid_argument("block weight must be > 0");
    total += b.weight;
  }
  if (total != 1) throw std::invalid_argument("weights must sum to 1 exactly");
}

InclusionMatrix::InclusionMatrix(std::vector<std::vector<long>> entries_, std::vector<int> a_dims_,
                                 std::vector<int> b_dims_)
    : entries(std::move(entries_)), a_dims(std::move(a_dims_)), b_dims(std::move(b_dims_)) {
  if (entries.size() != a_dims.size()) throw std::invalid_argument("row count mismatch");
  for (const auto& row : entries) {
    if (row.size() != b_dims.size()) throw std::invalid_argument("column count mismatch");
    for (long v : row) {
      if (v < 0) throw std::invalid_argument("inclusion entries must be >= 0");
    }
  }
}

bool InclusionMatrix::is_unital() const {
  for (std::size_t j = 0; j < b_dims.size(); ++j) {
    long acc = 0;
    for (std::size_t i = 0; i < a_dims.size(); ++i) acc += entries[i][j] * a_dims[i];
    if (acc != b_dims[j]) return false;
  }
  return true;
}

SpectralMeasure::SpectralMeasure(std::vector<Atom> atoms_, Rational continuous_mass_, double lo,
                                 double hi)
    : atoms(std::move(atoms_)), continuous_mass(std::move(continuous_mass_)), continuous_lo(lo),
      continuous_hi(hi) {
  Rational total = continuous_mass;
  if (continuous_mass < 0) throw std::invalid_argument("continuous mass must be >= 0");
  if (continuous_mass > 0 && !(lo < hi)) {
    throw std::invalid_argument("continuous carrier must be a nontrivial interval");
  }
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    if (atoms[i].mass <= 0) throw std::invalid_argument("atom mass must be > 0");
    if (i > 0 && !(atoms[i - 1].location < atoms[i].location)) {
      throw std::invalid_argument("atom locations must be strictly increasing");
    }
    total += atoms[i].mass;
  }
  if (total != 1) throw std::invalid_argument("measure must have total mass 1");
}

double SpectralMeasure::quantile(const Rational& u) const {
  if (!(u > 0 && u < 1)) throw std::invalid_argument("quantile argument must be in (0,1)");
  const double width = continuous_hi - continuous_lo;
  Rational remaining = u;
  double ramp_start = continuous_lo;
  for (const auto& atom : atoms) {
    // Uniform stretch below this atom. Its mass is converted to an exact
    // rational once so atom hits further down stay exact decisions.
    if (continuous_mass > 0 && atom.location > ramp_start && ramp_start < continuous_hi) {
      double stop = std::min(atom.location, continuous_hi);
      Rational seg = continuous_mass * Rational(mpq_class((stop - ramp_start) / width));
      if (remaining <= seg) {
        return ramp_start + to_double(remaining) * width / to_double(continuous_mass);
      }
      remaining -= seg;
      ramp_start = stop;
    }
    if (remaining <= atom.mass) return atom.location;
    remaining -= atom.mass;
  }
  if (continuous_mass > 0 && ramp_start < continuous_hi) {
    double pos = ramp_start + to_double(remaining) * width / to_double(continuous_mass);
    return std::min(pos, continuous_hi);
  }
  return atoms.empty() ? continuous_hi : atoms.back().location;
}

double SpectralMeasure::moment(long p) const {
  double acc = 0.0;
  for (const auto& atom : atoms) acc += to_double(atom.mass) * std::pow(atom.location, p);
  if (continuous_mass > 0) {
    // Uniform density on [lo, hi]: (hi^{p+1} - lo^{p+1}) / ((p+1)(hi - lo)).
    double hi_pow = std::pow(continuous_hi, p + 1);
    double lo_pow = std::pow(continuous_lo, p + 1);
    acc += to_double(continuous_mass) * (hi_pow - lo_pow) /
           ((p + 1) * (continuous_hi - continuous_lo));
  }
  return acc;
}

Rational delta0_hyperfinite(const HyperfiniteSpec& spec) {
  Rational acc(1);
  for (const auto& b : spec.blocks) {
    Rational k(b.dim);
    acc -= (b.weight * b.weight) / (k * k);
  }
  return acc;
}

Rational fdim(const HyperfiniteSpec& spec) {
  const Rational& a0 = spec.diffuse_weight;
  Rational acc = a0 * a0 + Rational(2) * a0 * (Rational(1) - a0);
  for (const auto& b : spec.blocks) {
    Rational k(b.dim);
    acc += b.weight * b.weight * (Rational(1) - Rational(1) / (k * k));
  }
  for (std::size_t i = 0; i < spec.blocks.size(); ++i) {
    for (std::size_t j = 0; j < spec.blocks.size(); ++j) {
      if (i != j) acc += spec.blocks[i].weight * spec.blocks[j].weight;
    }
  }
  return acc;
}

Rational delta_capacity(const FiniteDimAlgebra& algebra) {
  Rational acc(1);
  for (int j = 0; j < algebra.num_blocks(); ++j) {
    Rational n(algebra.block_dims[j]);
    acc -= (algebra.block_weights[j] * algebra.block_weights[j]) / (n * n);
  }
  return acc;
}

FiniteDimAlgebra restrict_trace(const InclusionMatrix& inclusion,
                                const std::vector<Rational>& b_weights) {
  if (b_weights.size() != inclusion.b_dims.size()) {
    throw std::invalid_argument("weight count mismatch");
  }
  for (const auto& w : b_weights) {
    if (w < 0) throw std::invalid_argument("weights must be >= 0");
  }
  if (!inclusion.is_unital()) {
    throw NonUnitalInclusionError("inclusion is not unital");
  }
  std::vector<Rational> a_weights(inclusion.a_dims.size(), Rational(0));
  for (std::size_t i = 0; i < inclusion.a_dims.size(); ++i) {
    Rational per_projection(0);
    for (std::size_t j = 0; j < inclusion.b_dims.size(); ++j) {
      per_projection += Rational(inclusion.entries[i][j]) * b_weights[j] /
                        Rational(inclusion.b_dims[j]);
    }
    a_weights[i] = Rational(inclusion.a_dims[i]) * per_projection;
  }
  return FiniteDimAlgebra(inclusion.a_dims, std::move(a_weights));
}

Rational delta0_selfadjoint(const SpectralMeasure& mu) {
  Rational acc(1);
  for (const auto& atom : mu.atoms) acc -= atom.mass * atom.mass;
  return acc;
}

BlockMatrix single_generator(const FiniteDimAlgebra& algebra) {
  BlockMatrix x = BlockMatrix::zero(algebra.block_dims);
  int label = 1;
  for (std::size_t j = 0; j < x.blocks.size(); ++j) {
    Matrix& b = x.blocks[j];
    for (long i = 0; i < b.rows(); ++i) b(i, i) = static_cast<double>(label++);
    for (long i = 0; i + 1 < b.rows(); ++i) b(i, i + 1) = 1.0;
  }
  return x;
}

std::pair<BlockMatrix, BlockMatrix> selfadjoint_generator_pair(const FiniteDimAlgebra& algebra) {
  BlockMatrix x = single_generator(algebra);
  BlockMatrix xs = x.adjoint();
  BlockMatrix real = 0.5 * (x + xs);
  BlockMatrix imag = Complex(0.0, -0.5) * (x - xs);
  real.selfadjoint_hint = true;
  imag.selfadjoint_hint = true;
  return {real, imag};
}

// Flattens a block element into one coefficient row for rank computations.
static Eigen::RowVectorXcd vectorize(const BlockMatrix& x) {
  long n = 0;
  for (const auto& b : x.blocks) n += b.size();
  Eigen::RowVectorXcd row(n);
  long off = 0;
  for (const auto& b : x.blocks) {
    for (long c = 0; c < b.cols(); ++c) {
      for (long r = 0; r < b.rows(); ++r) row(off++) = b(r, c);
    }
  }
  return row;
}

static long span_rank(const std::vector<BlockMatrix>& words) {
  if (words.empty()) return 0;
  long cols = vectorize(words.front()).cols();
  Matrix stack(static_cast<long>(words.size()), cols);
  for (std::size_t i = 0; i < words.size(); ++i) stack.row(static_cast<long>(i)) = vectorize(words[i]);
  Eigen::ColPivHouseholderQR<Matrix> qr(stack);
  qr.setThreshold(1e-9);
  return qr.rank();
}

bool verify_generation(const std::vector<BlockMatrix>& elems, const FiniteDimAlgebra& algebra) {
  for (const auto& e : elems) {
    if (e.shape() != algebra.block_dims) throw std::invalid_argument("element shape mismatch");
  }
  std::vector<BlockMatrix> generators;
  for (const auto& e : elems) {
    generators.push_back(e);
    generators.push_back(e.adjoint());
  }
  const long target = algebra.complex_dimension();
  const long sum_dim = algebra.total_matrix_dim();
  const long cap = 2 * sum_dim * sum_dim;

  std::vector<BlockMatrix> words{BlockMatrix::identity(algebra.block_dims)};
  std::vector<BlockMatrix> frontier = words;
  long rank = span_rank(words);
  for (long length = 1; length <= cap; ++length) {
    std::vector<BlockMatrix> next;
    next.reserve(frontier.size() * generators.size());
    for (const auto& w : frontier) {
      for (const auto& g : generators) next.push_back(w * g);
    }
    words.insert(words.end(), next.begin(), next.end());
    long new_rank = span_rank(words);
    if (new_rank == rank) return rank == target;  // span is an algebra once stationary
    rank = new_rank;
    if (rank == target) return true;
    frontier = std::move(next);
  }
  throw std::runtime_error("verify_generation: word-length cap exceeded before stabilizing");
}

Complex exact_moment(const std::vector<BlockMatrix>& elems, const FiniteDimAlgebra& algebra,
                     const std::vector<int>& word) {
  for (const auto& e : elems) {
    if (e.shape() != algebra.block_dims) throw std::invalid_argument("element shape mismatch");
  }
  for (int g : word) {
    if (g < 0 || g >= static_cast<int>(elems.size())) {
      throw std::invalid_argument("word index out of range");
    }
  }
  Complex acc = 0.0;
  for (int j = 0; j < algebra.num_blocks(); ++j) {
    const long n = algebra.block_dims[j];
    Matrix prod = Matrix::Identity(n, n);
    for (int g : word) prod *= elems[g].blocks[j];
    acc += to_double(algebra.block_weights[j]) * prod.trace() / static_cast<double>(n);
  }
  return acc;
}

Polynomial annihilator_polynomial(const std::vector<double>& spectrum) {
  for (std::size_t i = 0; i < spectrum.size(); ++i) {
    for (std::size_t j = i + 1; j < spectrum.size(); ++j) {
      if (spectrum[i] == spectrum[j]) {
        throw std::invalid_argument("annihilator_polynomial: duplicate spectrum point");
      }
    }
  }
  std::vector<double> coeffs{1.0};
  for (double root : spectrum) {
    std::vector<double> next(coeffs.size() + 1, 0.0);
    for (std::size_t i = 0; i < coeffs.size(); ++i) {
      next[i + 1] += coeffs[i];
      next[i] -= root * coeffs[i];
    }
    coeffs = std::move(next);
  }
  return Polynomial{std::move(coeffs)};
}

}  // namespace msl::algebra
