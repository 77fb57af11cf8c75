#include "hjac/core.hpp"

#include <algorithm>
#include <cmath>

namespace hjac {

template <Scalar T>
DenseMatrix<T>::DenseMatrix(std::initializer_list<std::initializer_list<T>> rows)
    : rows_(rows.size()), cols_(rows.size() ? rows.begin()->size() : 0) {
  data_.assign(rows_ * cols_, T(0));
  std::size_t i = 0;
  for (const auto& row : rows) {
    if (row.size() != cols_) {
      throw InputError("ragged matrix literal");
    }
    std::size_t j = 0;
    for (const auto& v : row) {
      (*this)(i, j++) = v;
    }
    ++i;
  }
}

template <Scalar T>
DenseMatrix<T> DenseMatrix<T>::identity(std::size_t n) {
  DenseMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    m(i, i) = T(1);
  }
  return m;
}

template <Scalar T>
DenseMatrix<T> DenseMatrix<T>::from_eigen(const EigenMatrix& e) {
  DenseMatrix m(static_cast<std::size_t>(e.rows()),
                static_cast<std::size_t>(e.cols()));
  m.eigen() = e;
  return m;
}

template <Scalar T>
DenseMatrix<T> copy_of(ConstMatrixView<T> v) {
  DenseMatrix<T> m(v.rows(), v.cols());
  std::copy(v.data(), v.data() + v.rows() * v.cols(), m.data());
  return m;
}

SignVector::SignVector(std::vector<int> signs) : signs_(std::move(signs)) {
  for (int s : signs_) {
    if (s != 1 && s != -1) {
      throw InputError("sign vector entries must be +1 or -1");
    }
  }
}

std::size_t SignVector::positives() const {
  return static_cast<std::size_t>(
      std::count(signs_.begin(), signs_.end(), 1));
}

SignVector SignVector::segment(std::size_t first, std::size_t count) const {
  if (first + count > signs_.size()) {
    throw InputError("sign segment out of range");
  }
  return SignVector(std::vector<int>(signs_.begin() + first,
                                     signs_.begin() + first + count));
}

SignVector SignVector::concat(const SignVector& a, const SignVector& b) {
  std::vector<int> s(a.signs_);
  s.insert(s.end(), b.signs_.begin(), b.signs_.end());
  return SignVector(std::move(s));
}

template <Scalar T>
DenseMatrix<T> gram(ConstMatrixView<T> gi, ConstMatrixView<T> gj) {
  if (gi.rows() != gj.rows()) {
    throw InputError("gram: row counts differ (" + std::to_string(gi.rows()) +
                     " vs " + std::to_string(gj.rows()) + ")");
  }
  DenseMatrix<T> out(gi.cols(), gj.cols());
  if (gi.rows() > 0) {
    out.eigen().noalias() = gi.eigen().adjoint() * gj.eigen();
  }
  return out;
}

template <Scalar T>
DenseMatrix<T> gram(ConstMatrixView<T> g) {
  DenseMatrix<T> out = gram(g, g);
  symmetrize(out);
  return out;
}

template <Scalar T>
std::vector<double> column_norms_squared(ConstMatrixView<T> g) {
  std::vector<double> d(g.cols());
  for (std::size_t j = 0; j < g.cols(); ++j) {
    double s = 0.0;
    for (const T& x : g.col(j)) {
      s += abs2(x);
    }
    d[j] = s;
  }
  return d;
}

template <Scalar T>
void symmetrize(DenseMatrix<T>& b) {
  const std::size_t n = b.rows();
  for (std::size_t j = 0; j < n; ++j) {
    b(j, j) = T(real_part(b(j, j)));
    for (std::size_t i = j + 1; i < n; ++i) {
      const T avg = (b(i, j) + conj(b(j, i))) * 0.5;
      b(i, j) = avg;
      b(j, i) = conj(avg);
    }
  }
}

template <Scalar T>
DenseMatrix<T> cholesky_upper(const DenseMatrix<T>& a, double rel_pivot_tol) {
  const std::size_t n = a.rows();
  if (a.cols() != n) {
    throw InputError("cholesky: matrix is not square");
  }
  DenseMatrix<T> r(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    const auto rj = r.col(j);
    for (std::size_t i = 0; i < j; ++i) {
      const auto ri = r.col(i);
      T s = a(i, j);
      for (std::size_t k = 0; k < i; ++k) {
        s -= conj(ri[k]) * rj[k];
      }
      rj[i] = s / ri[i];
    }
    double d = real_part(a(j, j));
    for (std::size_t k = 0; k < j; ++k) {
      d -= abs2(rj[k]);
    }
    if (!(d > rel_pivot_tol * real_part(a(j, j))) || !std::isfinite(d)) {
      throw NumericalError("cholesky: matrix is not positive definite (pivot " +
                           std::to_string(j) + ")");
    }
    rj[j] = T(std::sqrt(d));
  }
  return r;
}

template <Scalar T>
T dot_conj(std::span<const T> x, std::span<const T> y) {
  T s(0);
  const std::size_t n = x.size();
  for (std::size_t k = 0; k < n; ++k) {
    s += conj(x[k]) * y[k];
  }
  return s;
}

template <Scalar T>
double max_abs(ConstMatrixView<T> a) {
  double m = 0.0;
  for (std::size_t k = 0; k < a.rows() * a.cols(); ++k) {
    m = std::max(m, std::abs(a.data()[k]));
  }
  return m;
}

template <Scalar T>
double frobenius_norm(ConstMatrixView<T> a) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.rows() * a.cols(); ++k) {
    s += abs2(a.data()[k]);
  }
  return std::sqrt(s);
}

template <Scalar T>
DenseMatrix<T> adjoint(ConstMatrixView<T> a) {
  DenseMatrix<T> out(a.cols(), a.rows());
  for (std::size_t j = 0; j < a.cols(); ++j) {
    for (std::size_t i = 0; i < a.rows(); ++i) {
      out(j, i) = conj(a(i, j));
    }
  }
  return out;
}

template <Scalar T>
double hermitian_defect(ConstMatrixView<T> a) {
  if (a.rows() != a.cols()) {
    throw InputError("matrix is not square");
  }
  double m = 0.0;
  for (std::size_t j = 0; j < a.cols(); ++j) {
    for (std::size_t i = j; i < a.rows(); ++i) {
      m = std::max(m, std::abs(a(i, j) - conj(a(j, i))));
    }
  }
  return m;
}

template <Scalar T>
DenseMatrix<T> assemble_gjg(ConstMatrixView<T> g, const SignVector& j) {
  if (j.size() != g.cols()) {
    throw InputError("sign vector length does not match factor columns");
  }
  DenseMatrix<T> scaled = copy_of(g);
  for (std::size_t c = 0; c < g.cols(); ++c) {
    if (j[c] < 0) {
      for (T& x : scaled.col(c)) {
        x = -x;
      }
    }
  }
  DenseMatrix<T> h(g.rows(), g.rows());
  h.eigen().noalias() = scaled.eigen() * g.eigen().adjoint();
  symmetrize(h);
  return h;
}

#define HJAC_INSTANTIATE(T)                                                  \
  template class DenseMatrix<T>;                                             \
  template DenseMatrix<T> copy_of(ConstMatrixView<T>);                       \
  template DenseMatrix<T> gram(ConstMatrixView<T>, ConstMatrixView<T>);      \
  template DenseMatrix<T> gram(ConstMatrixView<T>);                          \
  template std::vector<double> column_norms_squared(ConstMatrixView<T>);     \
  template void symmetrize(DenseMatrix<T>&);                                 \
  template DenseMatrix<T> cholesky_upper(const DenseMatrix<T>&, double);     \
  template T dot_conj(std::span<const T>, std::span<const T>);               \
  template double max_abs(ConstMatrixView<T>);                              \
  template double frobenius_norm(ConstMatrixView<T>);                        \
  template DenseMatrix<T> adjoint(ConstMatrixView<T>);                       \
  template double hermitian_defect(ConstMatrixView<T>);                      \
  template DenseMatrix<T> assemble_gjg(ConstMatrixView<T>, const SignVector&);

HJAC_INSTANTIATE(double)
HJAC_INSTANTIATE(complex128)

#undef HJAC_INSTANTIATE

}  // namespace hjac
