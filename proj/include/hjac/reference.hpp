#pragma once

#include <vector>

#include "hjac/core.hpp"

namespace hjac {

// Dense Hermitian eigensolver backed by Eigen's tridiagonal QR. It is
// independent of every Jacobi code path here and serves both as a test
// oracle and as the spectral engine behind scaled_condition.
template <Scalar T>
struct ReferenceEigen {
  std::vector<double> eigenvalues;  // ascending
  DenseMatrix<T> eigenvectors;
};

template <Scalar T>
std::vector<double> reference_eigenvalues(const DenseMatrix<T>& h);

template <Scalar T>
ReferenceEigen<T> reference_eigen(const DenseMatrix<T>& h);

// Eigenvalues of the pencil (A, J) with A Hermitian positive definite,
// i.e. the spectrum of J A, computed as the spectrum of R J R^* where
// A = R^* R. Ascending.
template <Scalar T>
std::vector<double> reference_pencil_eigenvalues(const DenseMatrix<T>& a,
                                                 const SignVector& j);

}  // namespace hjac
