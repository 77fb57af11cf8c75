#pragma once

// Random generators and independent oracles shared by the test suites.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include "hjac/core.hpp"

namespace hjac::testing {

using Rng = std::mt19937_64;

inline double uniform(Rng& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

template <Scalar T>
T random_scalar(Rng& rng) {
  std::normal_distribution<double> normal;
  if constexpr (is_complex_v<T>) {
    const double re = normal(rng);
    return {re, normal(rng)};
  } else {
    return normal(rng);
  }
}

template <Scalar T>
DenseMatrix<T> random_matrix(std::size_t m, std::size_t n, Rng& rng) {
  DenseMatrix<T> a(m, n);
  for (auto& x : a.storage()) {
    x = random_scalar<T>(rng);
  }
  return a;
}

inline SignVector random_signs(std::size_t n, Rng& rng) {
  std::vector<int> s(n);
  std::bernoulli_distribution coin(0.5);
  for (int& v : s) {
    v = coin(rng) ? 1 : -1;
  }
  return SignVector(std::move(s));
}

// Hermitian matrix with eigenvalues drawn log-uniformly from [lo, hi] and
// random signs, built with a full random unitary from a QR factorization.
template <Scalar T>
DenseMatrix<T> random_hermitian(std::size_t n, double lo, double hi, Rng& rng,
                                std::vector<double>* spectrum = nullptr) {
  using Mat = typename DenseMatrix<T>::EigenMatrix;
  const DenseMatrix<T> z = random_matrix<T>(n, n, rng);
  Eigen::HouseholderQR<Mat> qr(z.eigen());
  const Mat q = qr.householderQ();
  std::vector<double> lam(n);
  for (double& v : lam) {
    v = std::exp(uniform(rng, std::log(lo), std::log(hi)));
    if (uniform(rng, 0.0, 1.0) < 0.5) {
      v = -v;
    }
  }
  Mat d = Mat::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) {
    d(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = lam[i];
  }
  DenseMatrix<T> h = DenseMatrix<T>::from_eigen(q * d * q.adjoint());
  symmetrize(h);
  if (spectrum != nullptr) {
    *spectrum = lam;
  }
  return h;
}

// Eigenvalues through Eigen directly, ascending.
template <Scalar T>
std::vector<double> oracle_eigenvalues(const DenseMatrix<T>& h) {
  using Mat = typename DenseMatrix<T>::EigenMatrix;
  Eigen::SelfAdjointEigenSolver<Mat> es(Mat(h.eigen()), Eigen::EigenvaluesOnly);
  std::vector<double> out(es.eigenvalues().data(),
                          es.eigenvalues().data() + es.eigenvalues().size());
  return out;
}

// Upper Cholesky factor with a positive diagonal through Eigen's LLT.
template <Scalar T>
DenseMatrix<T> oracle_cholesky_upper(const DenseMatrix<T>& a) {
  using Mat = typename DenseMatrix<T>::EigenMatrix;
  Eigen::LLT<Mat> llt(Mat(a.eigen()));
  return DenseMatrix<T>::from_eigen(llt.matrixU());
}

inline std::vector<double> sorted(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  return v;
}

inline double max_relative_gap(std::vector<double> a, std::vector<double> b) {
  a = sorted(std::move(a));
  b = sorted(std::move(b));
  if (a.size() != b.size()) {
    return INFINITY;
  }
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double scale = std::max(std::abs(a[i]), std::abs(b[i]));
    const double gap = std::abs(a[i] - b[i]);
    worst = std::max(worst, scale > 0.0 ? gap / scale : gap);
  }
  return worst;
}

template <Scalar T>
double max_abs_diff(const DenseMatrix<T>& a, const DenseMatrix<T>& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    return INFINITY;
  }
  double worst = 0.0;
  for (std::size_t k = 0; k < a.storage().size(); ++k) {
    worst = std::max(worst, std::abs(a.storage()[k] - b.storage()[k]));
  }
  return worst;
}

// Largest |g_i^* g_j| / (|g_i| |g_j|) over i != j.
template <Scalar T>
double max_cosine(const DenseMatrix<T>& g) {
  const auto a = g.eigen().adjoint() * g.eigen();
  double worst = 0.0;
  for (Eigen::Index j = 0; j < a.cols(); ++j) {
    for (Eigen::Index i = 0; i < j; ++i) {
      const double den = std::sqrt(std::abs(a(i, i)) * std::abs(a(j, j)));
      worst = std::max(worst, std::abs(a(i, j)) / den);
    }
  }
  return worst;
}

}  // namespace hjac::testing
