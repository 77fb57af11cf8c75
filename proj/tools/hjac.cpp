// hjac: command-line driver for the Hermitian indefinite Jacobi solvers.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "hjac/bench.hpp"
#include "hjac/factorization.hpp"
#include "hjac/matrix_io.hpp"
#include "hjac/schedule.hpp"
#include "hjac/solver.hpp"
#include "hjac/testmatrix.hpp"

namespace {

enum ExitCode {
  kOk = 0,
  kUsage = 2,
  kInput = 3,
  kStructural = 4,
  kNonConvergence = 5,
};

struct GenArgs {
  std::size_t n = 0;
  std::string eigs;
  double neg = 0.0;
  std::uint64_t seed = 0;
  std::string out;
  bool complex = false;
  bool text = false;
  std::string eval_out;
};

struct SolveArgs {
  std::string in;
  std::vector<std::string> factor_in;
  std::string variant = "2F";
  std::string strategy = "modulus";
  std::size_t p = 1;
  std::size_t inner_nt = 32;
  std::size_t outer_nt = 32;
  double tol = 0.0;
  int max_sweeps = 30;
  std::string evec_out;
  std::string eval_out;
  std::string summary;
  std::string order = "desc";
  double timeout_s = 3600.0;
  // Used when no input file is given.
  std::size_t n = 0;
  std::string eigs = "log:1e-3:1";
  double neg = 0.5;
  std::uint64_t seed = 0;
  bool complex = false;
};

struct BenchArgs {
  std::string grid;
  std::string out;
};

struct ScheduleArgs {
  std::string strategy = "modulus";
  std::size_t p = 1;
  int sweep = 1;
};

void write_summary(const std::string& path, const nlohmann::json& record) {
  if (path.empty()) {
    return;
  }
  std::ofstream out(path, std::ios::trunc);
  if (!out) {
    throw hjac::InputError("cannot open summary '" + path + "'");
  }
  out << record.dump() << '\n';
}

int run_gen(const GenArgs& a) {
  const hjac::EigSpec spec = hjac::EigSpec::parse(a.eigs, a.neg, a.seed);
  auto emit = [&](const auto& tm) {
    if (a.text) {
      hjac::write_matrix_text(a.out, tm.h);
    } else {
      hjac::write_matrix(a.out, tm.h);
    }
    if (!a.eval_out.empty()) {
      std::vector<double> ev = tm.eigenvalues;
      std::sort(ev.begin(), ev.end(), std::greater<>());
      hjac::write_values(a.eval_out, ev);
    }
  };
  if (a.complex) {
    emit(hjac::generate_test_matrix<hjac::complex128>(a.n, spec));
  } else {
    emit(hjac::generate_test_matrix<double>(a.n, spec));
  }
  return kOk;
}

template <hjac::Scalar T>
int finish_solve(const SolveArgs& a, const hjac::SolverConfig& cfg,
                 const hjac::DenseMatrix<T>& h,
                 hjac::SolveOutcome<T> outcome) {
  const hjac::Accuracy acc = hjac::measure_accuracy(h, outcome.eig);
  if (a.order == "desc") {
    hjac::sort_descending(outcome.eig);
  }
  if (a.eval_out.empty()) {
    for (double v : outcome.eig.eigenvalues) {
      std::printf("%.17g\n", v);
    }
  } else {
    hjac::write_values(a.eval_out, outcome.eig.eigenvalues);
  }
  if (!a.evec_out.empty()) {
    hjac::write_matrix(a.evec_out, outcome.eig.eigenvectors);
  }
  nlohmann::json rec = {
      {"event", "solve"},
      {"variant", hjac::to_string(cfg.variant)},
      {"strategy", hjac::to_string(cfg.strategy)},
      {"scalar", hjac::is_complex_v<T> ? "complex" : "real"},
      {"n", h.rows()},
      {"p", cfg.p},
      {"inner_nt", cfg.inner_nt},
      {"sweeps", outcome.eig.sweeps},
      {"rotations", outcome.eig.rotations},
      {"converged", outcome.eig.converged},
      {"factor_time_s", outcome.factor_seconds},
      {"solve_time_s", outcome.solve_seconds},
      {"residual", acc.residual},
      {"orthogonality", acc.orthogonality},
      {"kappa_as", outcome.scaled_condition},
      {"positives", outcome.positives},
      {"negatives", outcome.negatives},
      {"block_messages", outcome.block_messages},
      {"orth_tol", outcome.tol.orth_tol},
  };
  write_summary(a.summary, rec);
  if (!outcome.eig.converged) {
    std::fprintf(stderr, "hjac: no convergence after %d sweeps\n",
                 outcome.eig.sweeps);
    return kNonConvergence;
  }
  return kOk;
}

template <hjac::Scalar T>
int solve_matrix(const SolveArgs& a, const hjac::SolverConfig& cfg,
                 const hjac::DenseMatrix<T>& h) {
  return finish_solve(a, cfg, h, hjac::solve_hermitian(h, cfg, true));
}

template <hjac::Scalar T>
int solve_given_factor(const SolveArgs& a, const hjac::SolverConfig& cfg,
                       hjac::DenseMatrix<T> g, hjac::SignVector j) {
  hjac::FactoredForm<T> f = hjac::accept_external_factor(std::move(g), std::move(j));
  const hjac::DenseMatrix<T> h = hjac::assemble_gjg(hjac::cview(f.g), f.j);
  return finish_solve(a, cfg, h, hjac::solve_factor(std::move(f), cfg, true));
}

int run_solve(const SolveArgs& a) {
  hjac::SolverConfig cfg;
  cfg.variant = hjac::parse_variant(a.variant);
  cfg.strategy = hjac::parse_strategy(a.strategy);
  cfg.p = a.p;
  cfg.inner_nt = a.inner_nt;
  cfg.outer_nt = a.outer_nt;
  cfg.tol.orth_tol = a.tol;
  cfg.tol.max_sweeps = a.max_sweeps;
  cfg.recv_timeout = std::chrono::milliseconds(
      static_cast<long long>(std::max(a.timeout_s, 0.001) * 1000.0));
  cfg.validate();

  if (!a.factor_in.empty()) {
    const hjac::AnyMatrix g = hjac::read_matrix(a.factor_in[0]);
    hjac::SignVector j = hjac::read_signs(a.factor_in[1]);
    return std::visit(
        [&](const auto& m) { return solve_given_factor(a, cfg, m, j); }, g);
  }
  if (!a.in.empty()) {
    const hjac::AnyMatrix h = hjac::read_matrix(a.in);
    return std::visit([&](const auto& m) { return solve_matrix(a, cfg, m); }, h);
  }
  if (a.n == 0) {
    throw hjac::InputError("solve needs --in, --factor-in, or --n to generate input");
  }
  const hjac::EigSpec spec = hjac::EigSpec::parse(a.eigs, a.neg, a.seed);
  if (a.complex) {
    return solve_matrix(a, cfg,
                        hjac::generate_test_matrix<hjac::complex128>(a.n, spec).h);
  }
  return solve_matrix(a, cfg, hjac::generate_test_matrix<double>(a.n, spec).h);
}

int run_bench(const BenchArgs& a) {
  const hjac::BenchGrid grid = hjac::BenchGrid::load(a.grid);
  std::ofstream out(a.out, std::ios::trunc);
  if (!out) {
    throw hjac::InputError("cannot open '" + a.out + "' for writing");
  }
  out << hjac::bench_csv_header() << '\n';
  std::printf("%s\n", hjac::bench_csv_header().c_str());
  hjac::run_bench(grid, [&](const hjac::BenchRecord& r) {
    const std::string row = r.csv_row();
    out << row << '\n';
    out.flush();
    std::printf("%s\n", row.c_str());
    std::fflush(stdout);
  });
  return kOk;
}

int run_schedule(const ScheduleArgs& a) {
  const hjac::Strategy s = hjac::parse_strategy(a.strategy);
  const hjac::SweepSchedule sched = hjac::generate_sweep_schedule(s, a.p, a.sweep);
  for (std::size_t k = 0; k < sched.layouts.size(); ++k) {
    std::printf("step %zu:", k + 1);
    for (const auto& [i, j] : sched.layouts[k]) {
      std::printf(" (%zu,%zu)", i, j);
    }
    std::printf("  sends:");
    for (const auto& [route, blk] : sched.messages[k]) {
      std::printf(" %zu->%zu:%zu", route.first, route.second, blk);
    }
    std::printf("\n");
  }
  const hjac::PairCoverage cov = hjac::pair_coverage(sched, a.p);
  std::printf("steps %zu, pair slots %zu, missing %zu, repeated %zu:",
              sched.layouts.size(), cov.slots, cov.missing.size(),
              cov.repeated.size());
  for (const auto& [i, j] : cov.repeated) {
    std::printf(" (%zu,%zu)", i, j);
  }
  std::printf("\n");
  if (!cov.missing.empty()) {
    std::fprintf(stderr, "hjac: schedule leaves %zu block pairs unvisited\n",
                 cov.missing.size());
    return kStructural;
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hermitian indefinite eigensolver via one-sided J-Jacobi"};
  app.require_subcommand(1);

  GenArgs gen;
  auto* gen_cmd = app.add_subcommand("gen", "generate a Hermitian test matrix");
  gen_cmd->add_option("--n", gen.n, "matrix order")->required()->check(CLI::PositiveNumber);
  gen_cmd->add_option("--eigs", gen.eigs, "spectrum: v1,v2,... | log:lo:hi | uni:lo:hi")
      ->required();
  gen_cmd->add_option("--neg", gen.neg, "fraction of negative eigenvalues (range modes)");
  gen_cmd->add_option("--seed", gen.seed, "random seed");
  gen_cmd->add_option("--out", gen.out, "output matrix file")->required();
  gen_cmd->add_flag("--complex", gen.complex, "generate a complex Hermitian matrix");
  gen_cmd->add_flag("--text", gen.text, "write the text format instead of binary");
  gen_cmd->add_option("--eval-out", gen.eval_out, "write the drawn spectrum, descending");

  SolveArgs solve;
  auto* solve_cmd = app.add_subcommand("solve", "compute eigenpairs of H = G J G^*");
  solve_cmd->add_option("--in", solve.in, "Hermitian matrix file");
  solve_cmd->add_option("--factor-in", solve.factor_in, "factor G and sign file J")
      ->expected(2);
  solve_cmd->add_option("--variant", solve.variant, "seq|seqF|seqB|2F|2B|3F|3B")
      ->capture_default_str();
  solve_cmd->add_option("--strategy", solve.strategy, "modulus|rr")->capture_default_str();
  solve_cmd->add_option("--p", solve.p, "worker count")->capture_default_str();
  solve_cmd->add_option("--inner-nt", solve.inner_nt, "inner block size (3F, 3B)")
      ->capture_default_str();
  solve_cmd->add_option("--outer-nt", solve.outer_nt, "block size (seqF, seqB)")
      ->capture_default_str();
  solve_cmd->add_option("--tol", solve.tol, "orthogonality tolerance (default sqrt(m) eps)");
  solve_cmd->add_option("--max-sweeps", solve.max_sweeps, "sweep limit")->capture_default_str();
  solve_cmd->add_option("--evec-out", solve.evec_out, "eigenvector matrix file");
  solve_cmd->add_option("--eval-out", solve.eval_out, "eigenvalue file (default stdout)");
  solve_cmd->add_option("--summary", solve.summary, "JSON-lines run summary");
  solve_cmd->add_option("--order", solve.order, "eigenvalue order: desc|index")
      ->check(CLI::IsMember({"desc", "index"}))
      ->capture_default_str();
  solve_cmd->add_option("--timeout", solve.timeout_s, "worker receive timeout, seconds");
  solve_cmd->add_option("--n", solve.n, "generate an input of this order when --in is absent");
  solve_cmd->add_option("--eigs", solve.eigs, "spectrum of the generated input")
      ->capture_default_str();
  solve_cmd->add_option("--neg", solve.neg, "negative fraction of the generated input")
      ->capture_default_str();
  solve_cmd->add_option("--seed", solve.seed, "seed of the generated input");
  solve_cmd->add_flag("--complex", solve.complex, "generate a complex input");

  BenchArgs bench;
  auto* bench_cmd = app.add_subcommand("bench", "run a timing grid and write CSV");
  bench_cmd->add_option("--grid", bench.grid, "JSON grid file")->required();
  bench_cmd->add_option("--out", bench.out, "CSV output")->required();

  ScheduleArgs sched;
  auto* sched_cmd = app.add_subcommand("schedule", "print and validate one sweep's layouts");
  sched_cmd->add_option("--strategy", sched.strategy, "modulus|rr")->capture_default_str();
  sched_cmd->add_option("--p", sched.p, "worker count")->required()->check(CLI::PositiveNumber);
  sched_cmd->add_option("--sweep", sched.sweep, "sweep number, from 1")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  }

  std::string summary_path = solve_cmd->parsed() ? solve.summary : std::string();
  auto fail = [&](int code, const char* kind, const std::exception& e) {
    std::fprintf(stderr, "hjac: %s\n", e.what());
    try {
      write_summary(summary_path,
                    {{"event", "error"}, {"kind", kind}, {"message", e.what()},
                     {"exit_code", code}});
    } catch (const std::exception&) {
    }
    return code;
  };

  try {
    if (gen_cmd->parsed()) {
      return run_gen(gen);
    }
    if (solve_cmd->parsed()) {
      return run_solve(solve);
    }
    if (bench_cmd->parsed()) {
      return run_bench(bench);
    }
    return run_schedule(sched);
  } catch (const hjac::InputError& e) {
    return fail(kInput, "input", e);
  } catch (const hjac::NumericalError& e) {
    return fail(kStructural, "numerical", e);
  } catch (const std::exception& e) {
    return fail(kStructural, "internal", e);
  }
}
