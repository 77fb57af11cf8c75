#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "hjac/core.hpp"
#include "hjac/rotation.hpp"

namespace hjac {

// Split of n columns into b contiguous blocks.
struct BlockPartition {
  std::vector<std::size_t> sizes;
  std::vector<std::size_t> offsets;  // prefix sums, offsets[0] = 0

  static BlockPartition from_sizes(std::vector<std::size_t> sizes);
  // Both halves keep their own blocks; used for local pivots [G_r, G_s].
  static BlockPartition concat(const BlockPartition& a, const BlockPartition& b);

  std::size_t count() const { return sizes.size(); }
  std::size_t total() const;
  std::size_t size(std::size_t l) const { return sizes[l]; }
  std::size_t offset(std::size_t l) const { return offsets[l]; }
  std::size_t max_size() const;
};

// ceil(n / n_t)
std::size_t num_blocks(std::size_t n, std::size_t n_t);

// b - 1 blocks of n_t columns, the last one takes the remainder.
BlockPartition greedy_partition(std::size_t n, std::size_t n_t);

// Block sizes differ by at most one, larger blocks first.
BlockPartition uniform_partition(std::size_t n, std::size_t b);

// Maps current block slots to original (1-based) block indices.
class ColumnTracker {
 public:
  explicit ColumnTracker(std::size_t b);

  std::size_t size() const { return slots_.size(); }
  std::size_t at(std::size_t slot) const { return slots_[slot]; }
  void assign(std::size_t slot, std::size_t block);
  void swap(std::size_t a, std::size_t b);
  bool is_permutation() const;
  // order[k] is the slot currently holding original block k + 1.
  std::vector<std::size_t> restore_order() const;

 private:
  std::vector<std::size_t> slots_;
};

// Scratch space for block-column products; the product cannot be formed
// in place, so every update goes through here and is copied back.
template <Scalar T>
class Workspace {
 public:
  Workspace() = default;
  Workspace(std::size_t rows, std::size_t max_block)
      : buffer_(rows * 2 * max_block) {}

  std::size_t capacity() const { return buffer_.size(); }
  MatrixView<T> take(std::size_t rows, std::size_t cols);

 private:
  std::vector<T> buffer_;
};

// Upper-triangular factor of
//
//   A = [ diag(lam_i)  a_ij        ]
//       [ a_ij^*       diag(lam_j) ]
//
// with a diagonal leading block. Throws NumericalError when the Schur
// complement is not positive definite.
template <Scalar T>
DenseMatrix<T> structured_cholesky(std::span<const double> lam_i,
                                   ConstMatrixView<T> a_ij,
                                   std::span<const double> lam_j);

// [G_i, G_j]^* [G_i, G_j], exactly Hermitian.
template <Scalar T>
DenseMatrix<T> pair_gram(ConstMatrixView<T> gi, ConstMatrixView<T> gj);

// [G_i, G_j] <- [G_i, G_j] * W. Either block may be empty.
template <Scalar T>
void update_block_columns(MatrixView<T> gi, MatrixView<T> gj,
                          ConstMatrixView<T> w, Workspace<T>& ws);

// Full block algorithm on g (m x n) with diag(J). Every sweep first
// diagonalizes each diagonal block, then fully diagonalizes each block
// pivot in column-cyclic order. When v is non-null (n x n) every
// transformation is also applied to it. Runs at most tol.max_sweeps sweeps.
template <Scalar T>
RunStats full_block(MatrixView<T> g, const SignVector& j,
                    const BlockPartition& part, const Tolerances& tol,
                    MatrixView<T>* v = nullptr);

// Block-oriented algorithm: per sweep, one cycle on every diagonal block and
// one annihilation pass over every off-diagonal block.
template <Scalar T>
RunStats block_oriented(MatrixView<T> g, const SignVector& j,
                        const BlockPartition& part, const Tolerances& tol,
                        MatrixView<T>* v = nullptr);

// One annihilation pass over the cross blocks of g = [G_r, G_s], where G_r
// holds the first n_r columns. Each side is split uniformly into blocks of
// about inner_nt columns.
template <Scalar T>
SweepStats off_diagonal_pass(MatrixView<T> g, const SignVector& j,
                             std::size_t n_r, std::size_t inner_nt,
                             const Tolerances& tol, MatrixView<T>* v = nullptr);

}  // namespace hjac
