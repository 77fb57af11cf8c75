#include <gtest/gtest.h>

#include <thread>

#include "hjac/parallel.hpp"
#include "hjac/solver.hpp"
#include "support.hpp"

namespace hjac {
namespace {

using testing::Rng;

constexpr Variant kParallel[] = {Variant::p2F, Variant::p2B, Variant::p3F,
                                 Variant::p3B};

SolverConfig parallel_config(Variant v, Strategy s, std::size_t p,
                             std::size_t m, std::size_t n) {
  SolverConfig c;
  c.variant = v;
  c.strategy = s;
  c.p = p;
  c.inner_nt = 4;
  c.tol = Tolerances::defaults(m, n);
  c.recv_timeout = std::chrono::seconds(60);
  return c;
}

std::vector<Tally> all_reduce(const std::vector<std::size_t>& locals) {
  const std::size_t p = locals.size();
  Ring<double> ring(p, std::chrono::seconds(10));
  std::vector<Tally> out(p);
  std::vector<std::thread> threads;
  for (std::size_t q = 0; q < p; ++q) {
    threads.emplace_back([&, q] {
      Tally t;
      t.rotations = locals[q];
      t.big_rotations = locals[q] / 2;
      out[q] = exchange_convergence(t, q, ring);
    });
  }
  for (auto& t : threads) {
    t.join();
  }
  return out;
}

TEST(ExchangeConvergence, SumsAcrossWorkers) {
  for (const auto& t : all_reduce({3, 0, 5})) {
    EXPECT_EQ(t.rotations, 8u);
    EXPECT_EQ(t.big_rotations, 3u);
  }
  for (const auto& t : all_reduce({0, 0, 0, 0})) {
    EXPECT_EQ(t.rotations, 0u);
  }
  const auto single = all_reduce({7});
  EXPECT_EQ(single[0].rotations, 7u);
}

TEST(ChannelTest, TimesOutAndAborts) {
  Channel<int> ch;
  EXPECT_THROW(ch.receive(std::chrono::milliseconds(10)), NumericalError);
  ch.send(4);
  EXPECT_EQ(ch.pending(), 1u);
  EXPECT_EQ(ch.receive(std::chrono::milliseconds(10)), 4);
  ch.abort();
  EXPECT_THROW(ch.send(1), ChannelAborted);
  EXPECT_THROW(ch.receive(std::chrono::milliseconds(10)), ChannelAborted);
}

TEST(ParallelJacobi, SingleWorkerMatchesSequential) {
  Rng rng(61);
  auto g = testing::random_matrix<double>(20, 20, rng);
  const auto j = testing::random_signs(20, rng);
  auto seq = g;
  std::vector<double> d;
  jacobi_diagonalize(seq.view(), j, d, static_cast<MatrixView<double>*>(nullptr),
                     Tolerances::defaults(20, 20), 30);
  std::vector<double> expected = column_norms_squared(seq);
  for (std::size_t k = 0; k < 20; ++k) {
    expected[k] *= j[k];
  }
  for (Variant v : kParallel) {
    for (Strategy s : {Strategy::modulus, Strategy::round_robin}) {
      const auto r =
          parallel_jacobi(g, j, parallel_config(v, s, 1, 20, 20));
      ASSERT_TRUE(r.converged) << to_string(v);
      EXPECT_LT(testing::max_relative_gap(r.eigenvalues, expected), 1e-11)
          << to_string(v) << " " << to_string(s);
    }
  }
}

TEST(ParallelJacobi, AllConfigurationsAgreeWithReference) {
  Rng rng(62);
  const std::size_t n = 48;
  const auto h = testing::random_hermitian<double>(n, 1e-3, 1, rng);
  const auto f = factorize_hermitian_indefinite(h);
  const auto expected = testing::oracle_eigenvalues(h);
  for (std::size_t p : {2, 3, 4}) {
    for (Variant v : kParallel) {
      for (Strategy s : {Strategy::modulus, Strategy::round_robin}) {
        const auto r = parallel_jacobi(f.g, f.j, parallel_config(v, s, p, n, n));
        ASSERT_TRUE(r.converged);
        EXPECT_LT(testing::max_relative_gap(r.eigenvalues, expected), 1e-10)
            << to_string(v) << " " << to_string(s) << " p=" << p;
      }
    }
  }
}

TEST(ParallelJacobi, ComplexInput) {
  Rng rng(63);
  const std::size_t n = 30;
  const auto h = testing::random_hermitian<complex128>(n, 1e-2, 1, rng);
  const auto f = factorize_hermitian_indefinite(h);
  const auto expected = testing::oracle_eigenvalues(h);
  for (Variant v : kParallel) {
    const auto r = parallel_jacobi(
        f.g, f.j, parallel_config(v, Strategy::round_robin, 3, n, n));
    ASSERT_TRUE(r.converged);
    EXPECT_LT(testing::max_relative_gap(r.eigenvalues, expected), 1e-10);
  }
}

TEST(ParallelJacobi, OrthogonalColumnsNeedOneSweep) {
  auto g = DenseMatrix<double>::identity(16);
  for (std::size_t k = 0; k < 16; ++k) {
    g(k, k) = 1.0 + static_cast<double>(k);
  }
  const SignVector j{1, 1, 1, -1, 1, -1, -1, 1, 1, 1, -1, -1, 1, -1, 1, -1};
  for (std::size_t p : {1, 2, 3, 4}) {
    for (Variant v : kParallel) {
      for (Strategy s : {Strategy::modulus, Strategy::round_robin}) {
        auto work = g;
        const auto stats =
            parallel_orthogonalize(work, j, parallel_config(v, s, p, 16, 16));
        EXPECT_TRUE(stats.converged);
        EXPECT_EQ(stats.sweeps, 1);
        EXPECT_EQ(stats.rotations, 0u);
        EXPECT_EQ(work, g);
      }
    }
  }
}

TEST(ParallelJacobi, MessageCountPerSweep) {
  auto g = DenseMatrix<double>::identity(12);
  const auto j = SignVector::all_positive(12);
  for (Strategy s : {Strategy::modulus, Strategy::round_robin}) {
    auto work = g;
    const auto stats = parallel_orthogonalize(
        work, j, parallel_config(Variant::p2F, s, 3, 12, 12));
    EXPECT_EQ(stats.block_messages, 3 * steps_per_sweep(s, 3));
  }
}

TEST(ParallelJacobi, RunsAreBitIdentical) {
  Rng rng(64);
  const std::size_t n = 40;
  const auto h = testing::random_hermitian<double>(n, 1e-3, 1, rng);
  const auto f = factorize_hermitian_indefinite(h);
  for (Variant v : kParallel) {
    const auto cfg = parallel_config(v, Strategy::modulus, 4, n, n);
    const auto a = parallel_jacobi(f.g, f.j, cfg);
    const auto b = parallel_jacobi(f.g, f.j, cfg);
    EXPECT_EQ(a.eigenvalues, b.eigenvalues);
    EXPECT_EQ(a.eigenvectors, b.eigenvectors);
    EXPECT_EQ(a.rotations, b.rotations);
  }
}

TEST(ParallelJacobi, RejectsTooFewColumns) {
  auto g = DenseMatrix<double>::identity(5);
  EXPECT_THROW(parallel_orthogonalize(
                   g, SignVector::all_positive(5),
                   parallel_config(Variant::p2F, Strategy::modulus, 3, 5, 5)),
               InputError);
}

TEST(ParallelJacobi, WorkerFailureCarriesRank) {
  Rng rng(65);
  auto g = testing::random_matrix<double>(8, 8, rng);
  // Column 7 repeats column 0, so the pivot pairing their blocks is singular.
  for (std::size_t r = 0; r < 8; ++r) {
    g(r, 7) = g(r, 0);
  }
  try {
    parallel_orthogonalize(
        g, SignVector::all_positive(8),
        parallel_config(Variant::p2F, Strategy::modulus, 2, 8, 8));
    FAIL() << "expected a NumericalError";
  } catch (const NumericalError& e) {
    EXPECT_EQ(std::string(e.what()).rfind("worker ", 0), 0u) << e.what();
  }
}

}  // namespace
}  // namespace hjac
