#pragma once

#include <Eigen/Dense>

#include <complex>
#include <stdexcept>
#include <vector>

namespace msl {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;

/// Element of a direct sum of matrix algebras. A one-block instance doubles
/// as an element of M_k. Blocks are dense; shapes are fixed at construction.
struct BlockMatrix {
  std::vector<Matrix> blocks;
  bool selfadjoint_hint = false;

  BlockMatrix() = default;
  explicit BlockMatrix(std::vector<Matrix> b) : blocks(std::move(b)) {
    for (const auto& m : blocks) {
      if (m.rows() != m.cols()) throw std::invalid_argument("block not square");
    }
  }
  explicit BlockMatrix(Matrix single) : BlockMatrix(std::vector<Matrix>{std::move(single)}) {}

  static BlockMatrix zero(const std::vector<int>& dims) {
    std::vector<Matrix> b;
    b.reserve(dims.size());
    for (int n : dims) b.push_back(Matrix::Zero(n, n));
    return BlockMatrix(std::move(b));
  }

  static BlockMatrix identity(const std::vector<int>& dims) {
    std::vector<Matrix> b;
    b.reserve(dims.size());
    for (int n : dims) b.push_back(Matrix::Identity(n, n));
    return BlockMatrix(std::move(b));
  }

  std::size_t num_blocks() const { return blocks.size(); }

  long total_dim() const {
    long n = 0;
    for (const auto& m : blocks) n += m.rows();
    return n;
  }

  std::vector<int> shape() const {
    std::vector<int> dims;
    dims.reserve(blocks.size());
    for (const auto& m : blocks) dims.push_back(static_cast<int>(m.rows()));
    return dims;
  }

  bool same_shape(const BlockMatrix& other) const { return shape() == other.shape(); }

  BlockMatrix adjoint() const {
    BlockMatrix out = *this;
    for (auto& m : out.blocks) m = m.adjoint().eval();
    return out;
  }

  /// Embeds the element as one block-diagonal matrix.
  Matrix direct_sum() const {
    long n = total_dim();
    Matrix out = Matrix::Zero(n, n);
    long off = 0;
    for (const auto& m : blocks) {
      out.block(off, off, m.rows(), m.cols()) = m;
      off += m.rows();
    }
    return out;
  }

  friend BlockMatrix operator+(const BlockMatrix& a, const BlockMatrix& b) {
    BlockMatrix out = a;
    for (std::size_t j = 0; j < out.blocks.size(); ++j) out.blocks[j] += b.blocks[j];
    out.selfadjoint_hint = a.selfadjoint_hint && b.selfadjoint_hint;
    return out;
  }

  friend BlockMatrix operator-(const BlockMatrix& a, const BlockMatrix& b) {
    BlockMatrix out = a;
    for (std::size_t j = 0; j < out.blocks.size(); ++j) out.blocks[j] -= b.blocks[j];
    out.selfadjoint_hint = a.selfadjoint_hint && b.selfadjoint_hint;
    return out;
  }

  friend BlockMatrix operator*(const BlockMatrix& a, const BlockMatrix& b) {
    BlockMatrix out = a;
    for (std::size_t j = 0; j < out.blocks.size(); ++j) out.blocks[j] *= b.blocks[j];
    out.selfadjoint_hint = false;
    return out;
  }

  friend BlockMatrix operator*(Complex c, const BlockMatrix& a) {
    BlockMatrix out = a;
    for (auto& m : out.blocks) m *= c;
    out.selfadjoint_hint = false;
    return out;
  }
};

}  // namespace msl
