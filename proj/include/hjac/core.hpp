#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <vector>

#include <Eigen/Core>

namespace hjac {

using complex128 = std::complex<double>;

// Error hierarchy. The CLI maps these onto exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed or inconsistent input: dimensions, files, non-Hermitian data.
class InputError : public Error {
 public:
  using Error::Error;
};

// A numerical or structural failure inside the solver: an indefinite pivot,
// a singular factor, a broken schedule.
class NumericalError : public Error {
 public:
  using Error::Error;
};

template <typename T>
inline constexpr bool is_complex_v = false;
template <>
inline constexpr bool is_complex_v<complex128> = true;

template <typename T>
concept Scalar = std::is_same_v<T, double> || std::is_same_v<T, complex128>;

inline double conj(double x) { return x; }
inline complex128 conj(const complex128& x) { return std::conj(x); }
inline double real_part(double x) { return x; }
inline double real_part(const complex128& x) { return x.real(); }
inline double abs2(double x) { return x * x; }
inline double abs2(const complex128& x) { return std::norm(x); }

inline constexpr double eps = 0x1p-52;

// Non-owning column-major view; columns are contiguous with leading
// dimension equal to the row count, so any column range is again a view.
template <typename T>
class MatrixView {
 public:
  using value_type = std::remove_const_t<T>;
  using EigenMatrix = Eigen::Matrix<value_type, Eigen::Dynamic, Eigen::Dynamic>;
  using EigenMap =
      std::conditional_t<std::is_const_v<T>, Eigen::Map<const EigenMatrix>,
                         Eigen::Map<EigenMatrix>>;

  MatrixView() = default;
  MatrixView(T* data, std::size_t rows, std::size_t cols)
      : data_(data), rows_(rows), cols_(cols) {}
  // A mutable view converts to a const one.
  template <typename U>
    requires(std::is_const_v<T> && std::is_same_v<std::remove_const_t<T>, U>)
  MatrixView(MatrixView<U> other)  // NOLINT(google-explicit-constructor)
      : data_(other.data()), rows_(other.rows()), cols_(other.cols()) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  T* data() const { return data_; }

  T& operator()(std::size_t i, std::size_t j) const {
    return data_[j * rows_ + i];
  }
  std::span<T> col(std::size_t j) const { return {data_ + j * rows_, rows_}; }
  MatrixView columns(std::size_t first, std::size_t count) const {
    return {data_ + first * rows_, rows_, count};
  }
  EigenMap eigen() const {
    return EigenMap(data_, static_cast<Eigen::Index>(rows_),
                    static_cast<Eigen::Index>(cols_));
  }

 private:
  T* data_ = nullptr;
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
};

template <typename T>
using ConstMatrixView = MatrixView<const T>;

template <Scalar T>
class DenseMatrix {
 public:
  using value_type = T;
  using EigenMatrix = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic>;

  DenseMatrix() = default;
  DenseMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols, T(0)) {}
  // Row-major nested initializer, convenient for small literals.
  DenseMatrix(std::initializer_list<std::initializer_list<T>> rows);

  static DenseMatrix identity(std::size_t n);
  static DenseMatrix from_eigen(const EigenMatrix& m);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool empty() const { return data_.empty(); }

  T& operator()(std::size_t i, std::size_t j) { return data_[j * rows_ + i]; }
  const T& operator()(std::size_t i, std::size_t j) const {
    return data_[j * rows_ + i];
  }

  T* data() { return data_.data(); }
  const T* data() const { return data_.data(); }
  std::span<T> storage() { return data_; }
  std::span<const T> storage() const { return data_; }

  std::span<T> col(std::size_t j) { return {data() + j * rows_, rows_}; }
  std::span<const T> col(std::size_t j) const {
    return {data() + j * rows_, rows_};
  }

  MatrixView<T> view() { return {data(), rows_, cols_}; }
  ConstMatrixView<T> view() const { return {data(), rows_, cols_}; }
  MatrixView<T> columns(std::size_t first, std::size_t count) {
    return view().columns(first, count);
  }
  ConstMatrixView<T> columns(std::size_t first, std::size_t count) const {
    return view().columns(first, count);
  }

  auto eigen() { return view().eigen(); }
  auto eigen() const { return view().eigen(); }

  bool operator==(const DenseMatrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> data_;
};

template <Scalar T>
DenseMatrix<T> copy_of(ConstMatrixView<T> v);

// Diagonal of J: entries are +1 or -1 only.
class SignVector {
 public:
  SignVector() = default;
  explicit SignVector(std::vector<int> signs);
  SignVector(std::initializer_list<int> signs)
      : SignVector(std::vector<int>(signs)) {}

  static SignVector all_positive(std::size_t n) {
    return SignVector(std::vector<int>(n, 1));
  }

  std::size_t size() const { return signs_.size(); }
  int operator[](std::size_t i) const { return signs_[i]; }
  std::span<const int> values() const { return signs_; }
  auto begin() const { return signs_.begin(); }
  auto end() const { return signs_.end(); }

  std::size_t positives() const;
  std::size_t negatives() const { return size() - positives(); }

  SignVector segment(std::size_t first, std::size_t count) const;
  // Concatenation, used when two block segments form a local pivot.
  static SignVector concat(const SignVector& a, const SignVector& b);

  bool operator==(const SignVector&) const = default;

 private:
  std::vector<int> signs_;
};

template <Scalar T>
struct EigenResult {
  std::vector<double> eigenvalues;
  DenseMatrix<T> eigenvectors;
  int sweeps = 0;
  std::size_t rotations = 0;
  bool converged = false;
};

// Gi^* Gj for two column blocks with equal row counts.
template <Scalar T>
DenseMatrix<T> gram(ConstMatrixView<T> gi, ConstMatrixView<T> gj);

// G^* G, symmetrized so the result is exactly Hermitian.
template <Scalar T>
DenseMatrix<T> gram(ConstMatrixView<T> g);

template <Scalar T>
std::vector<double> column_norms_squared(ConstMatrixView<T> g);

// Replace a square matrix by (B + B^*)/2.
template <Scalar T>
void symmetrize(DenseMatrix<T>& b);

// Upper-triangular R with A = R^* R, reading only the upper triangle of A.
// Throws NumericalError when a pivot falls to or below
// rel_pivot_tol * a_jj (zero tolerance means "not positive").
template <Scalar T>
DenseMatrix<T> cholesky_upper(const DenseMatrix<T>& a,
                              double rel_pivot_tol = 0.0);

// Conjugated dot product x^* y.
template <Scalar T>
T dot_conj(std::span<const T> x, std::span<const T> y);

template <Scalar T>
double max_abs(ConstMatrixView<T> a);

template <Scalar T>
double frobenius_norm(ConstMatrixView<T> a);

template <Scalar T>
DenseMatrix<T> adjoint(ConstMatrixView<T> a);

// Returns max |A - A^*| over all entries.
template <Scalar T>
double hermitian_defect(ConstMatrixView<T> a);

// G * diag(J) * G^*.
template <Scalar T>
DenseMatrix<T> assemble_gjg(ConstMatrixView<T> g, const SignVector& j);

// Template deduction does not see the view conversions, so the common entry
// points also accept owning matrices and mutable views directly.
template <Scalar T>
ConstMatrixView<T> cview(const DenseMatrix<T>& m) {
  return m.view();
}
template <Scalar T>
ConstMatrixView<T> cview(MatrixView<T> m) {
  return m;
}
template <Scalar T>
ConstMatrixView<T> cview(ConstMatrixView<T> m) {
  return m;
}

template <Scalar T>
DenseMatrix<T> gram(const DenseMatrix<T>& gi, const DenseMatrix<T>& gj) {
  return gram(gi.view(), gj.view());
}
template <Scalar T>
DenseMatrix<T> gram(const DenseMatrix<T>& g) {
  return gram(g.view());
}
template <Scalar T>
std::vector<double> column_norms_squared(const DenseMatrix<T>& g) {
  return column_norms_squared(g.view());
}
template <Scalar T>
double max_abs(const DenseMatrix<T>& a) {
  return max_abs(a.view());
}
template <Scalar T>
double frobenius_norm(const DenseMatrix<T>& a) {
  return frobenius_norm(a.view());
}

}  // namespace hjac
