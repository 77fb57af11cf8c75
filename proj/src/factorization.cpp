#include "hjac/factorization.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>
#include <utility>

#include "hjac/reference.hpp"

namespace hjac {

namespace {

template <Scalar T>
void symmetric_swap(DenseMatrix<T>& s, std::size_t a, std::size_t b) {
  if (a == b) {
    return;
  }
  const std::size_t n = s.rows();
  for (std::size_t j = 0; j < n; ++j) {
    std::swap(s(a, j), s(b, j));
  }
  for (std::size_t i = 0; i < n; ++i) {
    std::swap(s(i, a), s(i, b));
  }
}

// Eigen-decomposition of the Hermitian 2x2 block [[a, b], [conj(b), c]]
// with b != 0. Returns eigenvalues (l1, l2) and a unitary Q whose columns
// are the matching eigenvectors.
template <Scalar T>
void eig2x2(double a, T b, double c, double& l1, double& l2, T q[2][2]) {
  const double mid = 0.5 * (a + c);
  const double half = 0.5 * (a - c);
  const double rad = std::hypot(half, std::abs(b));
  const double det = a * c - abs2(b);
  // Compute the larger-magnitude root directly; the other from the
  // determinant.
  if (mid >= 0.0) {
    l1 = mid + rad;
    l2 = det / l1;
  } else {
    l2 = mid - rad;
    l1 = det / l2;
  }
  // Eigenvector for l1 without cancellation.
  T v0;
  T v1;
  if (half >= 0.0) {
    v0 = T(rad + half);
    v1 = conj(b);
  } else {
    v0 = b;
    v1 = T(rad - half);
  }
  const double nv = std::sqrt(abs2(v0) + abs2(v1));
  v0 /= nv;
  v1 /= nv;
  q[0][0] = v0;
  q[1][0] = v1;
  q[0][1] = -conj(v1);
  q[1][1] = conj(v0);
}

}  // namespace

template <Scalar T>
DenseMatrix<T> FactoredForm<T>::factor_of_h() const {
  DenseMatrix<T> out(g.rows(), g.cols());
  for (std::size_t c = 0; c < g.cols(); ++c) {
    for (std::size_t i = 0; i < g.rows(); ++i) {
      out(row_perm[i], c) = g(i, c);
    }
  }
  return out;
}

template <Scalar T>
FactoredForm<T> factorize_hermitian_indefinite(const DenseMatrix<T>& h) {
  const std::size_t n = h.rows();
  if (h.cols() != n) {
    throw InputError("factorize: matrix is not square");
  }
  const double hmax = max_abs(h);
  if (hermitian_defect(h.view()) >
      100.0 * static_cast<double>(std::max<std::size_t>(n, 1)) * eps * hmax) {
    throw InputError("factorize: matrix is not Hermitian");
  }

  DenseMatrix<T> s = h;
  symmetrize(s);
  DenseMatrix<T> l(n, n);
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), std::size_t{0});

  // Per pivot block: start index, size, and (for the diagonal of G) the
  // scaled columns are built after elimination.
  struct Pivot {
    std::size_t k;
    std::size_t size;
  };
  std::vector<Pivot> pivots;

  auto swap_all = [&](std::size_t k, std::size_t a, std::size_t b) {
    if (a == b) {
      return;
    }
    symmetric_swap(s, a, b);
    for (std::size_t c = 0; c < k; ++c) {
      std::swap(l(a, c), l(b, c));
    }
    std::swap(perm[a], perm[b]);
  };

  std::size_t k = 0;
  while (k < n) {
    double mu0 = 0.0;
    std::size_t p0 = k;
    std::size_t q0 = k;
    double mu1 = 0.0;
    std::size_t d1 = k;
    for (std::size_t j = k; j < n; ++j) {
      const double dj = std::abs(real_part(s(j, j)));
      if (dj > mu1) {
        mu1 = dj;
        d1 = j;
      }
      for (std::size_t i = j + 1; i < n; ++i) {
        const double v = std::abs(s(i, j));
        if (v > mu0) {
          mu0 = v;
          p0 = i;
          q0 = j;
        }
      }
    }
    if (mu1 == 0.0 && mu0 == 0.0) {
      throw NumericalError(
          "factorize: zero pivot at step " + std::to_string(k) +
          "; H is singular, supply a full-column-rank factor instead");
    }

    if (mu1 >= kBunchParlettAlpha * mu0) {
      swap_all(k, k, d1);
      const double d = real_part(s(k, k));
      l(k, k) = T(1);
      for (std::size_t i = k + 1; i < n; ++i) {
        l(i, k) = s(i, k) / d;
      }
      for (std::size_t j = k + 1; j < n; ++j) {
        const T skj = s(k, j);
        for (std::size_t i = j; i < n; ++i) {
          s(i, j) -= l(i, k) * skj;
        }
      }
      pivots.push_back({k, 1});
    } else {
      // Off-diagonal maximum at (p0, q0), p0 > q0 >= k.
      swap_all(k, k, q0);
      if (p0 == k) {
        p0 = q0;
      }
      swap_all(k, k + 1, p0);
      const double a = real_part(s(k, k));
      const T b = s(k, k + 1);
      const double c = real_part(s(k + 1, k + 1));
      const double det = a * c - abs2(b);
      // E^{-1} = [[c, -b], [-conj(b), a]] / det
      l(k, k) = T(1);
      l(k + 1, k + 1) = T(1);
      for (std::size_t i = k + 2; i < n; ++i) {
        const T x = s(i, k);
        const T y = s(i, k + 1);
        l(i, k) = (x * c - y * conj(b)) / det;
        l(i, k + 1) = (y * a - x * b) / det;
      }
      for (std::size_t j = k + 2; j < n; ++j) {
        const T s0 = s(k, j);
        const T s1 = s(k + 1, j);
        for (std::size_t i = j; i < n; ++i) {
          s(i, j) -= l(i, k) * s0 + l(i, k + 1) * s1;
        }
      }
      pivots.push_back({k, 2});
    }
    // Mirror the updated trailing lower triangle.
    const std::size_t next = pivots.back().k + pivots.back().size;
    for (std::size_t j = next; j < n; ++j) {
      s(j, j) = T(real_part(s(j, j)));
      for (std::size_t i = j + 1; i < n; ++i) {
        s(j, i) = conj(s(i, j));
      }
    }
    k = next;
  }

  // G = L * blockdiag(Q |Lambda|^{1/2}), J = sign(Lambda).
  FactoredForm<T> f;
  f.g = DenseMatrix<T>(n, n);
  std::vector<int> signs(n, 1);
  for (const Pivot& pv : pivots) {
    const std::size_t c = pv.k;
    if (pv.size == 1) {
      const double d = real_part(s(c, c));
      const double scale = std::sqrt(std::abs(d));
      signs[c] = d > 0.0 ? 1 : -1;
      for (std::size_t i = c; i < n; ++i) {
        f.g(i, c) = l(i, c) * scale;
      }
    } else {
      double l1 = 0.0;
      double l2 = 0.0;
      T q[2][2];
      eig2x2(real_part(s(c, c)), s(c, c + 1), real_part(s(c + 1, c + 1)), l1,
             l2, q);
      if (l1 == 0.0 || l2 == 0.0) {
        throw NumericalError("factorize: singular 2x2 pivot at step " +
                             std::to_string(c));
      }
      const double sc1 = std::sqrt(std::abs(l1));
      const double sc2 = std::sqrt(std::abs(l2));
      signs[c] = l1 > 0.0 ? 1 : -1;
      signs[c + 1] = l2 > 0.0 ? 1 : -1;
      for (std::size_t i = c; i < n; ++i) {
        const T x = l(i, c);
        const T y = l(i, c + 1);
        f.g(i, c) = (x * q[0][0] + y * q[1][0]) * sc1;
        f.g(i, c + 1) = (x * q[0][1] + y * q[1][1]) * sc2;
      }
    }
  }
  f.j = SignVector(std::move(signs));
  f.row_perm = std::move(perm);
  f.col_perm.resize(n);
  std::iota(f.col_perm.begin(), f.col_perm.end(), std::size_t{0});
  return f;
}

template <Scalar T>
FactoredForm<T> order_by_inertia(FactoredForm<T> f) {
  const std::size_t n = f.g.cols();
  if (f.j.size() != n) {
    throw InputError("order_by_inertia: sign vector length mismatch");
  }
  if (f.col_perm.size() != n) {
    f.col_perm.resize(n);
    std::iota(f.col_perm.begin(), f.col_perm.end(), std::size_t{0});
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_partition(order.begin(), order.end(),
                        [&](std::size_t c) { return f.j[c] > 0; });

  DenseMatrix<T> g(f.g.rows(), n);
  std::vector<int> signs(n);
  std::vector<std::size_t> col_perm(n);
  for (std::size_t k = 0; k < n; ++k) {
    const auto src = f.g.col(order[k]);
    std::copy(src.begin(), src.end(), g.col(k).begin());
    signs[k] = f.j[order[k]];
    col_perm[k] = f.col_perm[order[k]];
  }
  f.g = std::move(g);
  f.j = SignVector(std::move(signs));
  f.col_perm = std::move(col_perm);
  return f;
}

template <Scalar T>
double scaled_condition(const DenseMatrix<T>& a) {
  const std::size_t n = a.rows();
  if (a.cols() != n) {
    throw InputError("scaled_condition: matrix is not square");
  }
  if (n == 0) {
    return 1.0;
  }
  std::vector<double> scale(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double d = real_part(a(i, i));
    if (!(d > 0.0)) {
      throw InputError("scaled_condition: nonpositive diagonal entry at " +
                       std::to_string(i));
    }
    scale[i] = 1.0 / std::sqrt(d);
  }
  DenseMatrix<T> as(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < n; ++i) {
      as(i, j) = a(i, j) * (scale[i] * scale[j]);
    }
  }
  symmetrize(as);
  const std::vector<double> ev = reference_eigenvalues(as);
  double lo = std::abs(ev.front());
  double hi = lo;
  for (double v : ev) {
    lo = std::min(lo, std::abs(v));
    hi = std::max(hi, std::abs(v));
  }
  return lo > 0.0 ? hi / lo : std::numeric_limits<double>::infinity();
}

template <Scalar T>
FactoredForm<T> accept_external_factor(DenseMatrix<T> g, SignVector j) {
  const std::size_t n = g.rows();
  const std::size_t m = g.cols();
  if (j.size() != m) {
    throw InputError("external factor: sign vector length " +
                     std::to_string(j.size()) + " does not match " +
                     std::to_string(m) + " columns");
  }
  if (m > n) {
    throw InputError("external factor: more columns than rows");
  }
  try {
    (void)cholesky_upper(gram(g), static_cast<double>(std::max<std::size_t>(m, 1)) * eps);
  } catch (const NumericalError&) {
    throw NumericalError("external factor is rank deficient");
  }
  FactoredForm<T> f;
  f.g = std::move(g);
  f.j = std::move(j);
  f.row_perm.resize(n);
  std::iota(f.row_perm.begin(), f.row_perm.end(), std::size_t{0});
  f.col_perm.resize(m);
  std::iota(f.col_perm.begin(), f.col_perm.end(), std::size_t{0});
  return f;
}

#define HJAC_INSTANTIATE(T)                                                   \
  template struct FactoredForm<T>;                                            \
  template FactoredForm<T> factorize_hermitian_indefinite(                    \
      const DenseMatrix<T>&);                                                 \
  template FactoredForm<T> order_by_inertia(FactoredForm<T>);                 \
  template double scaled_condition(const DenseMatrix<T>&);                    \
  template FactoredForm<T> accept_external_factor(DenseMatrix<T>, SignVector);

HJAC_INSTANTIATE(double)
HJAC_INSTANTIATE(complex128)

#undef HJAC_INSTANTIATE

}  // namespace hjac
