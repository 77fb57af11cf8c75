#include "hjac/blocked.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace hjac {

BlockPartition BlockPartition::from_sizes(std::vector<std::size_t> sizes) {
  BlockPartition p;
  p.offsets.reserve(sizes.size());
  std::size_t acc = 0;
  for (std::size_t s : sizes) {
    if (s == 0) {
      throw InputError("block partition has an empty block");
    }
    p.offsets.push_back(acc);
    acc += s;
  }
  p.sizes = std::move(sizes);
  return p;
}

BlockPartition BlockPartition::concat(const BlockPartition& a,
                                      const BlockPartition& b) {
  std::vector<std::size_t> sizes = a.sizes;
  sizes.insert(sizes.end(), b.sizes.begin(), b.sizes.end());
  return from_sizes(std::move(sizes));
}

std::size_t BlockPartition::total() const {
  return std::accumulate(sizes.begin(), sizes.end(), std::size_t{0});
}

std::size_t BlockPartition::max_size() const {
  return sizes.empty() ? 0 : *std::max_element(sizes.begin(), sizes.end());
}

std::size_t num_blocks(std::size_t n, std::size_t n_t) {
  if (n == 0 || n_t == 0) {
    throw InputError("num_blocks: n and n_t must be positive");
  }
  return (n + n_t - 1) / n_t;
}

BlockPartition greedy_partition(std::size_t n, std::size_t n_t) {
  const std::size_t b = num_blocks(n, n_t);
  std::vector<std::size_t> sizes(b, n_t);
  sizes.back() = (n - 1) % n_t + 1;
  return BlockPartition::from_sizes(std::move(sizes));
}

BlockPartition uniform_partition(std::size_t n, std::size_t b) {
  if (b == 0 || b > n) {
    throw InputError("uniform_partition: need 1 <= b <= n, got b = " +
                     std::to_string(b) + ", n = " + std::to_string(n));
  }
  const std::size_t n_min = n / b;
  const std::size_t b_r = n % b;
  std::vector<std::size_t> sizes(b, n_min);
  for (std::size_t l = 0; l < b_r; ++l) {
    ++sizes[l];
  }
  return BlockPartition::from_sizes(std::move(sizes));
}

ColumnTracker::ColumnTracker(std::size_t b) : slots_(b) {
  std::iota(slots_.begin(), slots_.end(), std::size_t{1});
}

void ColumnTracker::assign(std::size_t slot, std::size_t block) {
  if (slot >= slots_.size() || block < 1 || block > slots_.size()) {
    throw InputError("ColumnTracker: slot or block index out of range");
  }
  slots_[slot] = block;
}

void ColumnTracker::swap(std::size_t a, std::size_t b) {
  std::swap(slots_.at(a), slots_.at(b));
}

bool ColumnTracker::is_permutation() const {
  std::vector<bool> seen(slots_.size(), false);
  for (std::size_t b : slots_) {
    if (b < 1 || b > slots_.size() || seen[b - 1]) {
      return false;
    }
    seen[b - 1] = true;
  }
  return true;
}

std::vector<std::size_t> ColumnTracker::restore_order() const {
  if (!is_permutation()) {
    throw NumericalError("ColumnTracker: block slots are not a permutation");
  }
  std::vector<std::size_t> order(slots_.size());
  for (std::size_t slot = 0; slot < slots_.size(); ++slot) {
    order[slots_[slot] - 1] = slot;
  }
  return order;
}

template <Scalar T>
MatrixView<T> Workspace<T>::take(std::size_t rows, std::size_t cols) {
  if (rows * cols > buffer_.size()) {
    throw InputError("workspace too small: need " + std::to_string(rows * cols) +
                     " entries, have " + std::to_string(buffer_.size()));
  }
  return {buffer_.data(), rows, cols};
}

template <Scalar T>
DenseMatrix<T> structured_cholesky(std::span<const double> lam_i,
                                   ConstMatrixView<T> a_ij,
                                   std::span<const double> lam_j) {
  const std::size_t ni = lam_i.size();
  const std::size_t nj = lam_j.size();
  if (a_ij.rows() != ni || a_ij.cols() != nj) {
    throw InputError("structured_cholesky: off-diagonal block has wrong shape");
  }
  DenseMatrix<T> r(ni + nj, ni + nj);
  std::vector<double> inv_root(ni);
  for (std::size_t k = 0; k < ni; ++k) {
    if (!(lam_i[k] > 0.0)) {
      throw NumericalError("structured_cholesky: nonpositive diagonal entry");
    }
    const double root = std::sqrt(lam_i[k]);
    r(k, k) = T(root);
    inv_root[k] = 1.0 / root;
  }
  for (std::size_t c = 0; c < nj; ++c) {
    for (std::size_t k = 0; k < ni; ++k) {
      r(k, ni + c) = a_ij(k, c) * inv_root[k];
    }
  }
  // Schur complement diag(lam_j) - R_ij^* R_ij.
  DenseMatrix<T> schur(nj, nj);
  if (nj > 0) {
    const auto r_ij = r.view().eigen().topRightCorner(ni, nj);
    schur.eigen().noalias() = -(r_ij.adjoint() * r_ij);
  }
  for (std::size_t c = 0; c < nj; ++c) {
    schur(c, c) += lam_j[c];
  }
  symmetrize(schur);
  const DenseMatrix<T> r_jj = cholesky_upper(schur);
  for (std::size_t c = 0; c < nj; ++c) {
    for (std::size_t k = 0; k <= c; ++k) {
      r(ni + k, ni + c) = r_jj(k, c);
    }
  }
  return r;
}

template <Scalar T>
DenseMatrix<T> pair_gram(ConstMatrixView<T> gi, ConstMatrixView<T> gj) {
  const std::size_t ni = gi.cols();
  const std::size_t nj = gj.cols();
  DenseMatrix<T> a(ni + nj, ni + nj);
  auto e = a.eigen();
  if (ni > 0) {
    e.topLeftCorner(ni, ni).noalias() = gi.eigen().adjoint() * gi.eigen();
  }
  if (nj > 0) {
    e.bottomRightCorner(nj, nj).noalias() = gj.eigen().adjoint() * gj.eigen();
  }
  if (ni > 0 && nj > 0) {
    e.topRightCorner(ni, nj).noalias() = gi.eigen().adjoint() * gj.eigen();
    e.bottomLeftCorner(nj, ni) = e.topRightCorner(ni, nj).adjoint();
  }
  symmetrize(a);
  return a;
}

template <Scalar T>
void update_block_columns(MatrixView<T> gi, MatrixView<T> gj,
                          ConstMatrixView<T> w, Workspace<T>& ws) {
  const std::size_t ni = gi.cols();
  const std::size_t nj = gj.cols();
  const std::size_t np = ni + nj;
  if (w.rows() != np || w.cols() != np) {
    throw InputError("update_block_columns: W must be square of order n_i + n_j");
  }
  if (ni > 0 && nj > 0 && gi.rows() != gj.rows()) {
    throw InputError("update_block_columns: block row counts differ");
  }
  const std::size_t m = ni > 0 ? gi.rows() : gj.rows();
  MatrixView<T> out = ws.take(m, np);
  auto o = out.eigen();
  const auto we = w.eigen();
  if (ni > 0) {
    o.noalias() = gi.eigen() * we.topRows(ni);
    if (nj > 0) {
      o.noalias() += gj.eigen() * we.bottomRows(nj);
    }
  } else {
    o.noalias() = gj.eigen() * we;
  }
  if (ni > 0) {
    gi.eigen() = o.leftCols(ni);
  }
  if (nj > 0) {
    gj.eigen() = o.rightCols(nj);
  }
}

namespace {

template <Scalar T>
MatrixView<T> block_of(MatrixView<T> g, const BlockPartition& part,
                       std::size_t l) {
  return g.columns(part.offset(l), part.size(l));
}

template <Scalar T>
std::size_t workspace_rows(MatrixView<T> g, MatrixView<T>* v) {
  return std::max(g.rows(), v != nullptr ? v->rows() : std::size_t{0});
}

template <Scalar T>
void check_blocked_args(MatrixView<T> g, const SignVector& j,
                        const BlockPartition& part, MatrixView<T>* v,
                        const char* who) {
  if (part.total() != g.cols() || j.size() != g.cols()) {
    throw InputError(std::string(who) +
                     ": partition or sign vector does not match the factor");
  }
  if (v != nullptr && (v->rows() != g.cols() || v->cols() != g.cols())) {
    throw InputError(std::string(who) + ": accumulator must be n x n");
  }
}

// Pair of (possibly empty) column blocks together with the matching sign
// segments and slots of the diagonal cache.
template <Scalar T>
struct PivotBlocks {
  MatrixView<T> gi;
  MatrixView<T> gj;
  MatrixView<T> vi;
  MatrixView<T> vj;
  bool has_v = false;
};

template <Scalar T>
void apply_local(PivotBlocks<T>& p, const DenseMatrix<T>& w, Workspace<T>& ws) {
  update_block_columns(p.gi, p.gj, w.view(), ws);
  if (p.has_v) {
    update_block_columns(p.vi, p.vj, w.view(), ws);
  }
}

template <Scalar T>
PivotBlocks<T> pivot_blocks(MatrixView<T> g, MatrixView<T>* v,
                            const BlockPartition& part, std::size_t i,
                            std::size_t jb) {
  PivotBlocks<T> p;
  p.gi = block_of(g, part, i);
  p.gj = jb < part.count() ? block_of(g, part, jb)
                           : MatrixView<T>(g.data(), g.rows(), 0);
  if (v != nullptr) {
    p.has_v = true;
    p.vi = block_of(*v, part, i);
    p.vj = jb < part.count() ? block_of(*v, part, jb)
                             : MatrixView<T>(v->data(), v->rows(), 0);
  }
  return p;
}

template <Scalar T>
SignVector pivot_signs(const SignVector& j, const BlockPartition& part,
                       std::size_t i, std::size_t jb) {
  const SignVector si = j.segment(part.offset(i), part.size(i));
  if (jb >= part.count()) {
    return si;
  }
  return SignVector::concat(si, j.segment(part.offset(jb), part.size(jb)));
}

// Fully diagonalizes a single diagonal block and refreshes its cache.
template <Scalar T>
SweepStats diagonalize_block(MatrixView<T> g, MatrixView<T>* v,
                             const SignVector& j, const BlockPartition& part,
                             std::size_t l, std::vector<double>& d,
                             const Tolerances& tol, int max_it,
                             Workspace<T>& ws) {
  const std::size_t nl = part.size(l);
  PivotBlocks<T> p = pivot_blocks(g, v, part, l, part.count());
  DenseMatrix<T> r = cholesky_upper(gram(ConstMatrixView<T>(p.gi)));
  DenseMatrix<T> w(nl, nl);
  MatrixView<T> wv = w.view();
  std::vector<double> dl;
  const RunStats rs = jacobi_diagonalize(r.view(), j.segment(part.offset(l), nl),
                                         dl, &wv, tol, max_it);
  if (rs.rotations > 0) {
    apply_local(p, w, ws);
  }
  const std::vector<double> norms = column_norms_squared(r);
  std::copy(norms.begin(), norms.end(), d.begin() + part.offset(l));
  SweepStats s;
  s.rotations_applied = rs.rotations;
  s.big_rotations = rs.last_sweep.big_rotations;
  s.max_abs_t = rs.last_sweep.max_abs_t;
  return s;
}

}  // namespace

template <Scalar T>
RunStats full_block(MatrixView<T> g, const SignVector& j,
                    const BlockPartition& part, const Tolerances& tol,
                    MatrixView<T>* v) {
  check_blocked_args(g, j, part, v, "full_block");
  tol.validate();
  Workspace<T> ws(workspace_rows(g, v), part.max_size());
  std::vector<double> d(g.cols(), 0.0);
  RunStats stats;
  if (v != nullptr) {
    v->eigen().setIdentity();
  }
  for (int sweep = 0; sweep < tol.max_sweeps; ++sweep) {
    SweepStats total;
    for (std::size_t l = 0; l < part.count(); ++l) {
      total.merge(diagonalize_block(g, v, j, part, l, d, tol, tol.max_sweeps, ws));
    }
    for (std::size_t jb = 1; jb < part.count(); ++jb) {
      for (std::size_t ib = 0; ib < jb; ++ib) {
        PivotBlocks<T> p = pivot_blocks(g, v, part, ib, jb);
        const std::span<double> di(d.data() + part.offset(ib), part.size(ib));
        const std::span<double> dj(d.data() + part.offset(jb), part.size(jb));
        DenseMatrix<T> r;
        try {
          const DenseMatrix<T> a_ij =
              gram(ConstMatrixView<T>(p.gi), ConstMatrixView<T>(p.gj));
          r = structured_cholesky<T>(di, a_ij.view(), dj);
        } catch (const NumericalError&) {
          try {
            r = cholesky_upper(pair_gram(ConstMatrixView<T>(p.gi),
                                         ConstMatrixView<T>(p.gj)));
          } catch (const NumericalError&) {
            throw NumericalError("block pivot (" + std::to_string(ib + 1) +
                                 ", " + std::to_string(jb + 1) +
                                 ") is numerically indefinite");
          }
        }
        const std::size_t np = r.cols();
        DenseMatrix<T> w(np, np);
        MatrixView<T> wv = w.view();
        std::vector<double> dp;
        const RunStats rs = jacobi_diagonalize(
            r.view(), pivot_signs<T>(j, part, ib, jb), dp, &wv, tol,
            tol.max_sweeps);
        if (rs.rotations > 0) {
          apply_local(p, w, ws);
        }
        const std::vector<double> norms = column_norms_squared(r);
        std::copy_n(norms.begin(), di.size(), di.begin());
        std::copy_n(norms.begin() + di.size(), dj.size(), dj.begin());
        SweepStats s;
        s.rotations_applied = rs.rotations;
        s.big_rotations = rs.last_sweep.big_rotations;
        s.max_abs_t = rs.last_sweep.max_abs_t;
        total.merge(s);
      }
    }
    stats.add_sweep(total);
    if (total.rotations_applied == 0) {
      stats.converged = true;
      break;
    }
  }
  return stats;
}

template <Scalar T>
RunStats block_oriented(MatrixView<T> g, const SignVector& j,
                        const BlockPartition& part, const Tolerances& tol,
                        MatrixView<T>* v) {
  check_blocked_args(g, j, part, v, "block_oriented");
  tol.validate();
  Workspace<T> ws(workspace_rows(g, v), part.max_size());
  std::vector<double> d(g.cols(), 0.0);
  RunStats stats;
  if (v != nullptr) {
    v->eigen().setIdentity();
  }
  for (int sweep = 0; sweep < tol.max_sweeps; ++sweep) {
    SweepStats total;
    for (std::size_t l = 0; l < part.count(); ++l) {
      total.merge(diagonalize_block(g, v, j, part, l, d, tol, 1, ws));
    }
    for (std::size_t jb = 1; jb < part.count(); ++jb) {
      for (std::size_t ib = 0; ib < jb; ++ib) {
        PivotBlocks<T> p = pivot_blocks(g, v, part, ib, jb);
        DenseMatrix<T> r;
        try {
          r = cholesky_upper(
              pair_gram(ConstMatrixView<T>(p.gi), ConstMatrixView<T>(p.gj)));
        } catch (const NumericalError&) {
          throw NumericalError("block pivot (" + std::to_string(ib + 1) + ", " +
                               std::to_string(jb + 1) +
                               ") is numerically indefinite");
        }
        const std::size_t np = r.cols();
        DenseMatrix<T> w = DenseMatrix<T>::identity(np);
        MatrixView<T> wv = w.view();
        std::vector<double> dp = column_norms_squared(r);
        const SweepStats s =
            jacobi_cycle(r.view(), pivot_signs<T>(j, part, ib, jb),
                         std::span<double>(dp), &wv, part.size(ib),
                         part.size(jb), false, tol);
        if (s.rotations_applied > 0) {
          apply_local(p, w, ws);
        }
        total.merge(s);
      }
    }
    stats.add_sweep(total);
    if (total.rotations_applied == 0) {
      stats.converged = true;
      break;
    }
  }
  return stats;
}

template <Scalar T>
SweepStats off_diagonal_pass(MatrixView<T> g, const SignVector& j,
                             std::size_t n_r, std::size_t inner_nt,
                             const Tolerances& tol, MatrixView<T>* v) {
  const std::size_t n = g.cols();
  if (n_r == 0 || n_r >= n || j.size() != n || inner_nt == 0) {
    throw InputError("off_diagonal_pass: invalid split of the local factor");
  }
  if (v != nullptr && (v->rows() != n || v->cols() != n)) {
    throw InputError("off_diagonal_pass: accumulator must be n x n");
  }
  const std::size_t n_s = n - n_r;
  const BlockPartition part =
      BlockPartition::concat(uniform_partition(n_r, num_blocks(n_r, inner_nt)),
                             uniform_partition(n_s, num_blocks(n_s, inner_nt)));
  const std::size_t b_r = num_blocks(n_r, inner_nt);
  Workspace<T> ws(workspace_rows(g, v), part.max_size());
  SweepStats total;
  for (std::size_t jb = b_r; jb < part.count(); ++jb) {
    for (std::size_t ib = 0; ib < b_r; ++ib) {
      PivotBlocks<T> p = pivot_blocks(g, v, part, ib, jb);
      DenseMatrix<T> r;
      try {
        r = cholesky_upper(
            pair_gram(ConstMatrixView<T>(p.gi), ConstMatrixView<T>(p.gj)));
      } catch (const NumericalError&) {
        throw NumericalError("inner block pivot is numerically indefinite");
      }
      const std::size_t np = r.cols();
      DenseMatrix<T> w = DenseMatrix<T>::identity(np);
      MatrixView<T> wv = w.view();
      std::vector<double> dp = column_norms_squared(r);
      const SweepStats s = jacobi_cycle(
          r.view(), pivot_signs<T>(j, part, ib, jb), std::span<double>(dp),
          &wv, part.size(ib), part.size(jb), false, tol);
      if (s.rotations_applied > 0) {
        apply_local(p, w, ws);
      }
      total.merge(s);
    }
  }
  return total;
}

template class Workspace<double>;
template class Workspace<complex128>;

#define HJAC_INSTANTIATE(T)                                                    \
  template DenseMatrix<T> structured_cholesky(                                 \
      std::span<const double>, ConstMatrixView<T>, std::span<const double>);   \
  template DenseMatrix<T> pair_gram(ConstMatrixView<T>, ConstMatrixView<T>);   \
  template void update_block_columns(MatrixView<T>, MatrixView<T>,             \
                                     ConstMatrixView<T>, Workspace<T>&);       \
  template RunStats full_block(MatrixView<T>, const SignVector&,               \
                               const BlockPartition&, const Tolerances&,       \
                               MatrixView<T>*);                                \
  template RunStats block_oriented(MatrixView<T>, const SignVector&,           \
                                   const BlockPartition&, const Tolerances&,   \
                                   MatrixView<T>*);                            \
  template SweepStats off_diagonal_pass(MatrixView<T>, const SignVector&,      \
                                        std::size_t, std::size_t,              \
                                        const Tolerances&, MatrixView<T>*);

HJAC_INSTANTIATE(double)
HJAC_INSTANTIATE(complex128)

#undef HJAC_INSTANTIATE

}  // namespace hjac
