#include "hjac/rotation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace hjac {

Tolerances Tolerances::defaults(std::size_t m, std::size_t n) {
  Tolerances tol;
  tol.orth_tol = std::sqrt(static_cast<double>(std::max<std::size_t>(m, 1))) * eps;
  tol.quad_tol = static_cast<double>(std::max<std::size_t>(n, 1)) * eps;
  return tol;
}

void Tolerances::validate() const {
  if (!(orth_tol > 0.0) || !(quad_tol > 0.0) || max_sweeps < 1) {
    throw InputError("tolerances must be positive and max_sweeps >= 1");
  }
}

void SweepStats::merge(const SweepStats& other) {
  rotations_applied += other.rotations_applied;
  big_rotations += other.big_rotations;
  max_abs_t = std::max(max_abs_t, other.max_abs_t);
}

template <Scalar T>
PlaneRotation<T> compute_plane_rotation(double a_rr, double a_ss, T a_rs,
                                        int j_rr, int j_ss) {
  if (!(a_rr > 0.0) || !(a_ss > 0.0)) {
    throw NumericalError("rotation pivot has a nonpositive diagonal entry");
  }
  PlaneRotation<T> rot;
  const double abs_rs = std::abs(a_rs);
  if (abs_rs == 0.0) {
    return rot;
  }
  if (abs_rs >= std::sqrt(a_rr) * std::sqrt(a_ss)) {
    throw NumericalError("rotation pivot is not positive definite");
  }
  const int sigma = j_rr * j_ss;
  rot.eta = real_part(a_rs) >= 0.0 ? abs_rs : -abs_rs;
  rot.phase = a_rs / rot.eta;
  if constexpr (!is_complex_v<T>) {
    rot.phase = 1.0;
  }

  // t solves t^2 + 2*theta*t - sigma = 0; take the root of smaller modulus.
  const double theta = (a_ss - sigma * a_rr) / (2.0 * rot.eta);
  const double abs_theta = std::abs(theta);
  const double sgn = theta >= 0.0 ? 1.0 : -1.0;
  if (sigma > 0) {
    rot.kind = RotationKind::trigonometric;
    rot.t = sgn / (abs_theta + std::hypot(abs_theta, 1.0));
    rot.cs = 1.0 / std::sqrt(1.0 + rot.t * rot.t);
  } else {
    // Positive definiteness gives |theta| > 1.
    if (!(abs_theta > 1.0)) {
      throw NumericalError("hyperbolic pivot is not positive definite");
    }
    const double root = abs_theta > 1e150
                            ? abs_theta
                            : std::sqrt((abs_theta - 1.0) * (abs_theta + 1.0));
    rot.kind = RotationKind::hyperbolic;
    rot.t = -sgn / (abs_theta + root);
    rot.cs = 1.0 / std::sqrt((1.0 - rot.t) * (1.0 + rot.t));
  }
  rot.sn = rot.cs * rot.t;
  return rot;
}

template <Scalar T>
DenseMatrix<T> rotation_matrix(const PlaneRotation<T>& rot) {
  const double sigma = rot.sign_product();
  DenseMatrix<T> w(2, 2);
  w(0, 0) = rot.cs * rot.phase;
  w(0, 1) = rot.sn * rot.phase;
  w(1, 0) = T(-sigma * rot.sn);
  w(1, 1) = T(rot.cs);
  return w;
}

namespace {

template <Scalar T>
void rotate_columns(MatrixView<T> g, std::size_t r, std::size_t s,
                    const PlaneRotation<T>& rot) {
  const double cs = rot.cs;
  const double sn = rot.sn;
  const double sigma_sn = rot.sign_product() * rot.sn;
  const T phase = rot.phase;
  T* gr = g.col(r).data();
  T* gs = g.col(s).data();
  const std::size_t m = g.rows();
  for (std::size_t k = 0; k < m; ++k) {
    const T f = phase * gr[k];
    const T y = gs[k];
    gr[k] = cs * f - sigma_sn * y;
    gs[k] = sn * f + cs * y;
  }
}

}  // namespace

template <Scalar T>
void apply_rotation(MatrixView<T> g, MatrixView<T>* w, std::span<double> d,
                    std::size_t r, std::size_t s, const PlaneRotation<T>& rot) {
  if (rot.kind == RotationKind::identity) {
    return;
  }
  rotate_columns(g, r, s, rot);
  if (w != nullptr) {
    rotate_columns(*w, r, s, rot);
  }
  const double shift = rot.t * rot.eta;
  d[r] -= rot.sign_product() * shift;
  d[s] += shift;
}

template <Scalar T>
SweepStats jacobi_cycle(MatrixView<T> g, const SignVector& j,
                        std::span<double> d, MatrixView<T>* w, std::size_t n_i,
                        std::size_t n_j, bool diag_bl, const Tolerances& tol) {
  const std::size_t ncols = diag_bl ? n_i : n_i + n_j;
  if (g.cols() < ncols || j.size() < ncols || d.size() < ncols) {
    throw InputError("jacobi_cycle: block sizes exceed the factor");
  }
  SweepStats stats;
  const std::size_t start_s = diag_bl ? 1 : n_i;
  for (std::size_t s = start_s; s < ncols; ++s) {
    const std::size_t final_r = diag_bl ? s : n_i;
    const auto gs = std::span<const T>(g.col(s));
    for (std::size_t r = 0; r < final_r; ++r) {
      const T a_rs = dot_conj(std::span<const T>(g.col(r)), gs);
      if (std::abs(a_rs) <=
          tol.orth_tol * std::sqrt(std::max(d[r], 0.0)) *
              std::sqrt(std::max(d[s], 0.0))) {
        continue;
      }
      PlaneRotation<T> rot;
      try {
        rot = compute_plane_rotation(d[r], d[s], a_rs, j[r], j[s]);
      } catch (const NumericalError&) {
        // The cached diagonal may have drifted; retry with fresh norms.
        d[r] = real_part(dot_conj(std::span<const T>(g.col(r)),
                                  std::span<const T>(g.col(r))));
        d[s] = real_part(dot_conj(gs, gs));
        rot = compute_plane_rotation(d[r], d[s], a_rs, j[r], j[s]);
      }
      if (rot.kind == RotationKind::identity) {
        continue;
      }
      apply_rotation(g, w, d, r, s, rot);
      ++stats.rotations_applied;
      const double abs_t = std::abs(rot.t);
      stats.max_abs_t = std::max(stats.max_abs_t, abs_t);
      if (abs_t > tol.quad_tol) {
        ++stats.big_rotations;
      }
    }
  }
  return stats;
}

template <Scalar T>
RunStats jacobi_diagonalize(MatrixView<T> g, const SignVector& j,
                            std::vector<double>& d, MatrixView<T>* w,
                            const Tolerances& tol, int max_it) {
  const std::size_t n = g.cols();
  if (j.size() != n) {
    throw InputError("jacobi_diagonalize: sign vector length mismatch");
  }
  if (w != nullptr) {
    if (w->rows() != n || w->cols() != n) {
      throw InputError("jacobi_diagonalize: accumulator must be n x n");
    }
    for (std::size_t c = 0; c < n; ++c) {
      auto col = w->col(c);
      std::fill(col.begin(), col.end(), T(0));
      col[c] = T(1);
    }
  }
  RunStats stats;
  for (int iter = 0; iter < max_it; ++iter) {
    d = column_norms_squared(ConstMatrixView<T>(g));
    const SweepStats sweep = jacobi_cycle(g, j, d, w, n, 0, true, tol);
    stats.add_sweep(sweep);
    if (sweep.rotations_applied == 0) {
      stats.converged = true;
      break;
    }
  }
  return stats;
}

template <Scalar T>
EigenResult<T> extract_eigen(ConstMatrixView<T> g_final, const SignVector& j,
                             std::span<const std::size_t> col_perm) {
  const std::size_t n = g_final.cols();
  if (j.size() != n || col_perm.size() != n) {
    throw InputError("extract_eigen: sign vector or permutation length mismatch");
  }
  std::vector<bool> seen(n, false);
  for (std::size_t k : col_perm) {
    if (k >= n || seen[k]) {
      throw InputError("extract_eigen: col_perm is not a permutation");
    }
    seen[k] = true;
  }
  EigenResult<T> out;
  out.eigenvalues.assign(n, 0.0);
  out.eigenvectors = DenseMatrix<T>(g_final.rows(), n);
  const std::vector<double> norms2 = column_norms_squared(g_final);
  for (std::size_t k = 0; k < n; ++k) {
    if (!(norms2[k] > 0.0)) {
      throw NumericalError("extract_eigen: column " + std::to_string(k) +
                           " has zero norm (factor is rank deficient)");
    }
    const std::size_t dst = col_perm[k];
    out.eigenvalues[dst] = j[k] * norms2[k];
    const double inv = 1.0 / std::sqrt(norms2[k]);
    const auto src = g_final.col(k);
    auto u = out.eigenvectors.col(dst);
    for (std::size_t i = 0; i < src.size(); ++i) {
      u[i] = src[i] * inv;
    }
  }
  return out;
}

template <Scalar T>
void sort_descending(EigenResult<T>& result) {
  const std::size_t n = result.eigenvalues.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return result.eigenvalues[a] > result.eigenvalues[b];
  });
  std::vector<double> values(n);
  DenseMatrix<T> vectors(result.eigenvectors.rows(), n);
  for (std::size_t k = 0; k < n; ++k) {
    values[k] = result.eigenvalues[order[k]];
    const auto src = result.eigenvectors.col(order[k]);
    std::copy(src.begin(), src.end(), vectors.col(k).begin());
  }
  result.eigenvalues = std::move(values);
  result.eigenvectors = std::move(vectors);
}

#define HJAC_INSTANTIATE(T)                                                   \
  template PlaneRotation<T> compute_plane_rotation(double, double, T, int,    \
                                                   int);                      \
  template DenseMatrix<T> rotation_matrix(const PlaneRotation<T>&);           \
  template void apply_rotation(MatrixView<T>, MatrixView<T>*,                 \
                               std::span<double>, std::size_t, std::size_t,   \
                               const PlaneRotation<T>&);                      \
  template SweepStats jacobi_cycle(MatrixView<T>, const SignVector&,          \
                                   std::span<double>, MatrixView<T>*,         \
                                   std::size_t, std::size_t, bool,            \
                                   const Tolerances&);                        \
  template RunStats jacobi_diagonalize(MatrixView<T>, const SignVector&,      \
                                       std::vector<double>&, MatrixView<T>*,  \
                                       const Tolerances&, int);               \
  template EigenResult<T> extract_eigen(ConstMatrixView<T>, const SignVector&, \
                                        std::span<const std::size_t>);        \
  template void sort_descending(EigenResult<T>&);

HJAC_INSTANTIATE(double)
HJAC_INSTANTIATE(complex128)

#undef HJAC_INSTANTIATE

}  // namespace hjac
