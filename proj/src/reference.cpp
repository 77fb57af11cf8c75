#include "hjac/reference.hpp"

#include <Eigen/Eigenvalues>

namespace hjac {

template <Scalar T>
ReferenceEigen<T> reference_eigen(const DenseMatrix<T>& h) {
  if (h.rows() != h.cols()) {
    throw InputError("reference eigensolver: matrix is not square");
  }
  ReferenceEigen<T> out;
  if (h.rows() == 0) {
    return out;
  }
  typename DenseMatrix<T>::EigenMatrix m = h.eigen();
  Eigen::SelfAdjointEigenSolver<typename DenseMatrix<T>::EigenMatrix> solver(m);
  if (solver.info() != Eigen::Success) {
    throw NumericalError("reference eigensolver failed to converge");
  }
  const auto& ev = solver.eigenvalues();
  out.eigenvalues.assign(ev.data(), ev.data() + ev.size());
  out.eigenvectors = DenseMatrix<T>::from_eigen(solver.eigenvectors());
  return out;
}

template <Scalar T>
std::vector<double> reference_eigenvalues(const DenseMatrix<T>& h) {
  if (h.rows() != h.cols()) {
    throw InputError("reference eigensolver: matrix is not square");
  }
  if (h.rows() == 0) {
    return {};
  }
  typename DenseMatrix<T>::EigenMatrix m = h.eigen();
  Eigen::SelfAdjointEigenSolver<typename DenseMatrix<T>::EigenMatrix> solver(
      m, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw NumericalError("reference eigensolver failed to converge");
  }
  const auto& ev = solver.eigenvalues();
  return {ev.data(), ev.data() + ev.size()};
}

template <Scalar T>
std::vector<double> reference_pencil_eigenvalues(const DenseMatrix<T>& a,
                                                 const SignVector& j) {
  using M = typename DenseMatrix<T>::EigenMatrix;
  Eigen::LLT<M> llt(M(a.eigen()));
  if (llt.info() != Eigen::Success) {
    throw NumericalError("reference pencil: A is not positive definite");
  }
  const M r = llt.matrixU();
  M scaled = r;
  for (Eigen::Index c = 0; c < scaled.cols(); ++c) {
    if (j[static_cast<std::size_t>(c)] < 0) {
      scaled.col(c) *= -1.0;
    }
  }
  M h = scaled * r.adjoint();
  h = (0.5 * (h + h.adjoint())).eval();
  return reference_eigenvalues(DenseMatrix<T>::from_eigen(h));
}

template ReferenceEigen<double> reference_eigen(const DenseMatrix<double>&);
template ReferenceEigen<complex128> reference_eigen(
    const DenseMatrix<complex128>&);
template std::vector<double> reference_eigenvalues(const DenseMatrix<double>&);
template std::vector<double> reference_eigenvalues(
    const DenseMatrix<complex128>&);
template std::vector<double> reference_pencil_eigenvalues(
    const DenseMatrix<double>&, const SignVector&);
template std::vector<double> reference_pencil_eigenvalues(
    const DenseMatrix<complex128>&, const SignVector&);

}  // namespace hjac
