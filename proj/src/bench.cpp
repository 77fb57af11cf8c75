#include "hjac/bench.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "hjac/solver.hpp"
#include "hjac/testmatrix.hpp"

namespace hjac {

namespace {

template <typename U>
void read_list(const nlohmann::json& j, const char* key, std::vector<U>& out) {
  if (!j.contains(key)) {
    return;
  }
  const auto& v = j.at(key);
  out.clear();
  if (v.is_array()) {
    for (const auto& item : v) {
      out.push_back(item.get<U>());
    }
  } else {
    out.push_back(v.get<U>());
  }
  if (out.empty()) {
    throw InputError(std::string("bench grid: '") + key + "' is empty");
  }
}

template <Scalar T>
void run_once(const DenseMatrix<T>& h, const SolverConfig& cfg, int& sweeps,
              std::size_t& rotations, double& seconds, bool& converged) {
  const SolveOutcome<T> out = solve_hermitian(h, cfg);
  sweeps = out.eig.sweeps;
  rotations = out.eig.rotations;
  seconds = out.solve_seconds;
  converged = out.eig.converged;
}

template <Scalar T>
void run_cell(BenchRecord& rec, const BenchGrid& grid, const SolverConfig& cfg) {
  const EigSpec spec = EigSpec::parse(grid.eigs, grid.neg, grid.seed);
  const TestMatrix<T> tm = generate_test_matrix<T>(rec.n, spec);
  int sweeps = 0;
  std::size_t rotations = 0;
  double seconds = 0.0;
  bool converged = false;
  for (int w = 0; w < grid.warmup; ++w) {
    run_once(tm.h, cfg, sweeps, rotations, seconds, converged);
  }
  std::vector<double> times;
  bool deterministic = true;
  for (int r = 0; r < grid.reps; ++r) {
    int s = 0;
    std::size_t rot = 0;
    run_once(tm.h, cfg, s, rot, seconds, converged);
    if (!times.empty() || grid.warmup > 0) {
      deterministic = deterministic && s == sweeps && rot == rotations;
    }
    sweeps = s;
    rotations = rot;
    times.push_back(seconds);
  }
  std::sort(times.begin(), times.end());
  const std::size_t mid = times.size() / 2;
  rec.time_s = times.size() % 2 == 1 ? times[mid]
                                     : 0.5 * (times[mid - 1] + times[mid]);
  rec.sweeps = sweeps;
  rec.rotations = rotations;
  rec.c = scaling_constant(rec.time_s, rec.n, rec.p);
  rec.status = !deterministic ? "nondeterministic"
               : converged    ? "ok"
                              : "nonconverged";
}

}  // namespace

BenchGrid BenchGrid::from_json(const std::string& text) {
  BenchGrid g;
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("bench grid is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) {
    throw InputError("bench grid must be a JSON object");
  }
  try {
    read_list(j, "n", g.sizes);
    read_list(j, "p", g.workers);
    read_list(j, "inner_nt", g.inner_nt);
    read_list(j, "scalars", g.scalars);
    std::vector<std::string> names;
    read_list(j, "variants", names);
    if (!names.empty()) {
      g.variants.clear();
      for (const auto& s : names) {
        g.variants.push_back(parse_variant(s));
      }
    }
    names.clear();
    read_list(j, "strategies", names);
    if (!names.empty()) {
      g.strategies.clear();
      for (const auto& s : names) {
        g.strategies.push_back(parse_strategy(s));
      }
    }
    g.reps = j.value("reps", g.reps);
    g.warmup = j.value("warmup", g.warmup);
    g.seed = j.value("seed", g.seed);
    g.eigs = j.value("eigs", g.eigs);
    g.neg = j.value("neg", g.neg);
    g.outer_nt = j.value("outer_nt", g.outer_nt);
    g.max_sweeps = j.value("max_sweeps", g.max_sweeps);
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("bench grid: ") + e.what());
  }
  if (g.reps < 1 || g.warmup < 0) {
    throw InputError("bench grid: reps must be >= 1 and warmup >= 0");
  }
  for (const auto& s : g.scalars) {
    if (s != "real" && s != "complex") {
      throw InputError("bench grid: scalar must be real or complex, got '" + s +
                       "'");
    }
  }
  return g;
}

BenchGrid BenchGrid::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw InputError("cannot open bench grid '" + path + "'");
  }
  std::stringstream buf;
  buf << in.rdbuf();
  return from_json(buf.str());
}

std::string bench_csv_header() {
  return "variant,strategy,scalar,n,p,nt_outer,nt_inner,sweeps,rotations,time_s,"
         "c,status";
}

std::string BenchRecord::csv_row() const {
  std::string clean = status;
  std::replace(clean.begin(), clean.end(), ',', ';');
  std::replace(clean.begin(), clean.end(), '\n', ' ');
  char nums[96];
  std::snprintf(nums, sizeof nums, "%.6g,%.6g", time_s, c);
  std::ostringstream out;
  out << variant << ',' << strategy << ',' << scalar << ',' << n << ',' << p
      << ',' << nt_outer << ',' << nt_inner << ',' << sweeps << ','
      << rotations << ',' << nums << ',' << clean;
  return out.str();
}

double scaling_constant(double time_s, std::size_t n, std::size_t p) {
  const double nd = static_cast<double>(n);
  return time_s * static_cast<double>(p) / (nd * nd * nd);
}

std::vector<BenchRecord> run_bench(
    const BenchGrid& grid,
    const std::function<void(const BenchRecord&)>& on_record) {
  std::vector<BenchRecord> records;
  for (const std::string& scalar : grid.scalars) {
    for (Variant v : grid.variants) {
      for (Strategy s : grid.strategies) {
        for (std::size_t nt_in : grid.inner_nt) {
          for (std::size_t n : grid.sizes) {
            for (std::size_t p : grid.workers) {
              if (!is_parallel(v) && p != 1) {
                continue;
              }
              BenchRecord rec;
              rec.variant = to_string(v);
              rec.strategy = to_string(s);
              rec.scalar = scalar;
              rec.n = n;
              rec.p = p;
              rec.nt_inner = nt_in;
              rec.nt_outer = is_parallel(v) ? (n + 2 * p - 1) / (2 * p)
                                            : std::min(grid.outer_nt, n);
              SolverConfig cfg;
              cfg.variant = v;
              cfg.strategy = s;
              cfg.p = p;
              cfg.inner_nt = nt_in;
              cfg.outer_nt = grid.outer_nt;
              cfg.tol.max_sweeps = grid.max_sweeps;
              try {
                if (scalar == "complex") {
                  run_cell<complex128>(rec, grid, cfg);
                } else {
                  run_cell<double>(rec, grid, cfg);
                }
              } catch (const std::exception& e) {
                rec.status = std::string("error: ") + e.what();
              }
              if (on_record) {
                on_record(rec);
              }
              records.push_back(std::move(rec));
            }
          }
        }
      }
    }
  }
  return records;
}

}  // namespace hjac
