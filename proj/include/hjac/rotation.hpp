#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "hjac/core.hpp"

namespace hjac {

enum class RotationKind { identity, trigonometric, hyperbolic };

// Nontrivial 2x2 part of a J-unitary plane transformation,
//
//   W_P = [ cs*phase   sn*phase ]
//         [ -s*sn      cs       ]      s = j_rr * j_ss,
//
// acting from the right on a column pair: [g_r', g_s'] = [g_r, g_s] W_P.
// With s = +1 this is a trigonometric rotation (cs^2 + sn^2 = 1), with
// s = -1 a hyperbolic one (cs^2 - sn^2 = 1).
template <Scalar T>
struct PlaneRotation {
  RotationKind kind = RotationKind::identity;
  double cs = 1.0;
  double sn = 0.0;
  T phase = T(1);  // e^{i alpha}; exactly 1 for real data
  double t = 0.0;  // sn / cs
  double eta = 0.0;  // sign(re a_rs) * |a_rs|

  int sign_product() const {
    return kind == RotationKind::hyperbolic ? -1 : 1;
  }
};

struct Tolerances {
  double orth_tol = 0.0;
  double quad_tol = 0.0;
  int max_sweeps = 30;

  // sqrt(m) * eps and n * eps for an m x n factor.
  static Tolerances defaults(std::size_t m, std::size_t n);
  void validate() const;
};

struct SweepStats {
  std::size_t rotations_applied = 0;
  std::size_t big_rotations = 0;
  double max_abs_t = 0.0;

  void merge(const SweepStats& other);
};

struct RunStats {
  int sweeps = 0;
  std::size_t rotations = 0;
  bool converged = false;
  SweepStats last_sweep;

  void add_sweep(const SweepStats& s) {
    ++sweeps;
    rotations += s.rotations_applied;
    last_sweep = s;
  }
};

// Rotation that annihilates the (1,2) entry of the pivot
// [[a_rr, a_rs], [conj(a_rs), a_ss]] under the signature diag(j_rr, j_ss),
// always choosing the root with the smallest |t|. Throws NumericalError
// when the pivot is not positive definite.
template <Scalar T>
PlaneRotation<T> compute_plane_rotation(double a_rr, double a_ss, T a_rs,
                                        int j_rr, int j_ss);

// The 2x2 matrix W_P assembled from a rotation.
template <Scalar T>
DenseMatrix<T> rotation_matrix(const PlaneRotation<T>& rot);

// Rotates columns r and s of g (and of w, when non-null) and updates the
// cached diagonal entries d[r], d[s].
template <Scalar T>
void apply_rotation(MatrixView<T> g, MatrixView<T>* w, std::span<double> d,
                    std::size_t r, std::size_t s, const PlaneRotation<T>& rot);

// One column-cyclic pass. With diag_bl the pass covers every pair of the
// first n_i columns; otherwise g = [G_i, G_j] and only the n_i * n_j cross
// pairs are visited. d caches the diagonal of g^* g on entry.
template <Scalar T>
SweepStats jacobi_cycle(MatrixView<T> g, const SignVector& j,
                        std::span<double> d, MatrixView<T>* w, std::size_t n_i,
                        std::size_t n_j, bool diag_bl, const Tolerances& tol);

// Repeats jacobi_cycle over all columns until a sweep applies no rotation
// or max_it sweeps have run. When w is non-null it is reset to the identity
// and accumulates every applied rotation. On return d holds the squared
// column norms as maintained by the final sweep.
template <Scalar T>
RunStats jacobi_diagonalize(MatrixView<T> g, const SignVector& j,
                            std::vector<double>& d, MatrixView<T>* w,
                            const Tolerances& tol, int max_it);

// Eigenpairs from a factor with numerically orthogonal columns:
// lambda_k = j_k * ||g_k||^2 and u_k = g_k / ||g_k||. col_perm[k] is the
// original index of current column k; the output is ordered by original
// index.
template <Scalar T>
EigenResult<T> extract_eigen(ConstMatrixView<T> g_final, const SignVector& j,
                             std::span<const std::size_t> col_perm);

// Reorders an extracted result by descending eigenvalue.
template <Scalar T>
void sort_descending(EigenResult<T>& result);

}  // namespace hjac
