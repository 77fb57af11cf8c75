#pragma once

#include <cstddef>

#include "hjac/config.hpp"
#include "hjac/core.hpp"
#include "hjac/factorization.hpp"

namespace hjac {

template <Scalar T>
struct SolveOutcome {
  EigenResult<T> eig;  // eigenvalues in the factor's original column order
  std::size_t positives = 0;
  std::size_t negatives = 0;
  double factor_seconds = 0.0;
  double solve_seconds = 0.0;
  std::size_t block_messages = 0;
  double scaled_condition = 0.0;  // kappa(A_s) of A = G^* G, when requested
  Tolerances tol;  // the tolerances actually used
};

// Fills unset tolerances from the factor's shape.
Tolerances resolve_tolerances(const SolverConfig& config, std::size_t m,
                              std::size_t n);

// Orthogonalizes the columns of g in place with the configured variant.
template <Scalar T>
RunStats orthogonalize(DenseMatrix<T>& g, const SignVector& j,
                       const SolverConfig& config,
                       std::size_t* block_messages = nullptr);

// Inertia ordering, orthogonalization and extraction for a factored form.
template <Scalar T>
SolveOutcome<T> solve_factor(FactoredForm<T> f, const SolverConfig& config,
                             bool with_condition = false);

// Factorizes H, then solve_factor. Eigenvectors are in H's row indexing.
template <Scalar T>
SolveOutcome<T> solve_hermitian(const DenseMatrix<T>& h,
                                const SolverConfig& config,
                                bool with_condition = false);

struct Accuracy {
  double residual = 0.0;       // ||HU - U Lambda||_F / ||H||_F
  double orthogonality = 0.0;  // max |U^* U - I|
};

template <Scalar T>
Accuracy measure_accuracy(const DenseMatrix<T>& h, const EigenResult<T>& eig);

}  // namespace hjac
