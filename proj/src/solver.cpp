#include "hjac/solver.hpp"

#include <chrono>
#include <numeric>

#include "hjac/blocked.hpp"
#include "hjac/parallel.hpp"

namespace hjac {

namespace {

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
      .count();
}

}  // namespace

Tolerances resolve_tolerances(const SolverConfig& config, std::size_t m,
                              std::size_t n) {
  const Tolerances def = Tolerances::defaults(m, n);
  Tolerances tol = config.tol;
  if (tol.orth_tol == 0.0) {
    tol.orth_tol = def.orth_tol;
  }
  if (tol.quad_tol == 0.0) {
    tol.quad_tol = def.quad_tol;
  }
  tol.validate();
  return tol;
}

template <Scalar T>
RunStats orthogonalize(DenseMatrix<T>& g, const SignVector& j,
                       const SolverConfig& config,
                       std::size_t* block_messages) {
  config.validate();
  SolverConfig cfg = config;
  cfg.tol = resolve_tolerances(config, g.rows(), g.cols());
  const std::size_t n = g.cols();
  if (n == 0) {
    RunStats empty;
    empty.converged = true;
    return empty;
  }
  switch (cfg.variant) {
    case Variant::seq: {
      std::vector<double> d;
      return jacobi_diagonalize(g.view(), j, d, static_cast<MatrixView<T>*>(nullptr), cfg.tol,
                                cfg.tol.max_sweeps);
    }
    case Variant::seqF:
      return full_block(g.view(), j,
                        uniform_partition(n, num_blocks(n, cfg.outer_nt)),
                        cfg.tol);
    case Variant::seqB:
      return block_oriented(g.view(), j,
                            uniform_partition(n, num_blocks(n, cfg.outer_nt)),
                            cfg.tol);
    default:
      break;
  }
  const ParallelStats ps = parallel_orthogonalize(g, j, cfg);
  if (block_messages != nullptr) {
    *block_messages = ps.block_messages;
  }
  RunStats rs;
  rs.sweeps = ps.sweeps;
  rs.rotations = ps.rotations;
  rs.converged = ps.converged;
  return rs;
}

template <Scalar T>
SolveOutcome<T> solve_factor(FactoredForm<T> f, const SolverConfig& config,
                             bool with_condition) {
  SolveOutcome<T> out;
  if (with_condition) {
    out.scaled_condition = scaled_condition(gram(f.g));
  }
  out.tol = resolve_tolerances(config, f.g.rows(), f.g.cols());
  f = order_by_inertia(std::move(f));
  out.positives = f.j.positives();
  out.negatives = f.j.negatives();

  const auto start = std::chrono::steady_clock::now();
  const RunStats rs = orthogonalize(f.g, f.j, config, &out.block_messages);
  out.solve_seconds = seconds_since(start);

  out.eig = extract_eigen(ConstMatrixView<T>(f.g.view()), f.j, f.col_perm);
  out.eig.sweeps = rs.sweeps;
  out.eig.rotations = rs.rotations;
  out.eig.converged = rs.converged;
  return out;
}

template <Scalar T>
SolveOutcome<T> solve_hermitian(const DenseMatrix<T>& h,
                                const SolverConfig& config,
                                bool with_condition) {
  const auto start = std::chrono::steady_clock::now();
  FactoredForm<T> f = factorize_hermitian_indefinite(h);
  f.g = f.factor_of_h();
  std::iota(f.row_perm.begin(), f.row_perm.end(), std::size_t{0});
  const double factor_seconds = seconds_since(start);
  SolveOutcome<T> out = solve_factor(std::move(f), config, with_condition);
  out.factor_seconds = factor_seconds;
  return out;
}

template <Scalar T>
Accuracy measure_accuracy(const DenseMatrix<T>& h, const EigenResult<T>& eig) {
  Accuracy acc;
  const auto& u = eig.eigenvectors;
  const std::size_t k = u.cols();
  using Mat = typename DenseMatrix<T>::EigenMatrix;
  Mat hu = h.eigen() * u.eigen();
  for (std::size_t c = 0; c < k; ++c) {
    hu.col(static_cast<Eigen::Index>(c)) -=
        eig.eigenvalues[c] * u.eigen().col(static_cast<Eigen::Index>(c));
  }
  const double hnorm = frobenius_norm(h);
  acc.residual = hnorm > 0.0 ? hu.norm() / hnorm : hu.norm();
  Mat utu = u.eigen().adjoint() * u.eigen();
  utu -= Mat::Identity(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k));
  acc.orthogonality = k > 0 ? utu.cwiseAbs().maxCoeff() : 0.0;
  return acc;
}

#define HJAC_INSTANTIATE(T)                                                   \
  template RunStats orthogonalize(DenseMatrix<T>&, const SignVector&,         \
                                  const SolverConfig&, std::size_t*);         \
  template SolveOutcome<T> solve_factor(FactoredForm<T>, const SolverConfig&, \
                                        bool);                                \
  template SolveOutcome<T> solve_hermitian(const DenseMatrix<T>&,             \
                                           const SolverConfig&, bool);        \
  template Accuracy measure_accuracy(const DenseMatrix<T>&,                   \
                                     const EigenResult<T>&);

HJAC_INSTANTIATE(double)
HJAC_INSTANTIATE(complex128)

#undef HJAC_INSTANTIATE

}  // namespace hjac
