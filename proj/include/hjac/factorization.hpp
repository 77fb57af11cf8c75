#pragma once

#include <cstddef>
#include <vector>

#include "hjac/core.hpp"

namespace hjac {

// P H P^T = G J G^*.
//
// row_perm describes P: (P H P^T)(i, j) = H(row_perm[i], row_perm[j]).
// col_perm describes the inertia ordering P1: current column k of G was
// column col_perm[k] before ordering. Both are identities when unused.
template <Scalar T>
struct FactoredForm {
  DenseMatrix<T> g;
  SignVector j;
  std::vector<std::size_t> row_perm;
  std::vector<std::size_t> col_perm;

  // P^T G, a factor of H itself in the original row indexing.
  DenseMatrix<T> factor_of_h() const;
};

// Bunch-Parlett threshold for choosing a 1x1 pivot.
inline const double kBunchParlettAlpha = 0.6403882032022076;  // (1+sqrt(17))/8

// Symmetric indefinite factorization with complete pivoting into
// P H P^T = M D M^*, followed by spectral decomposition of every 2x2 block of
// D and column scaling by sqrt|d|. The result G is lower block-triangular in
// the permuted order. Throws InputError for non-Hermitian input and
// NumericalError when a zero pivot shows H is singular.
template <Scalar T>
FactoredForm<T> factorize_hermitian_indefinite(const DenseMatrix<T>& h);

// Stable partition of the columns of G so all +1 signs come first.
template <Scalar T>
FactoredForm<T> order_by_inertia(FactoredForm<T> f);

// kappa(A_s) = ||A_s||_2 ||A_s^{-1}||_2 for A_s = diag(A)^{-1/2} A diag(A)^{-1/2}.
template <Scalar T>
double scaled_condition(const DenseMatrix<T>& a);

// Wraps a user-supplied full-column-rank n x m factor (m <= n).
template <Scalar T>
FactoredForm<T> accept_external_factor(DenseMatrix<T> g, SignVector j);

}  // namespace hjac
