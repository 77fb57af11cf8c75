#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "hjac/config.hpp"

namespace hjac {

// Benchmark grid, read from JSON. Every key is optional:
//
//   {"n": [512], "p": [1, 2], "variants": ["3B"], "strategies": ["modulus"],
//    "inner_nt": [32], "scalars": ["real"], "reps": 3, "warmup": 1,
//    "seed": 42, "eigs": "log:1e-3:1", "neg": 0.5, "outer_nt": 32,
//    "max_sweeps": 30}
//
// Sequential variants are run only in cells with p = 1.
struct BenchGrid {
  std::vector<std::size_t> sizes{256};
  std::vector<std::size_t> workers{1};
  std::vector<Variant> variants{Variant::p3B};
  std::vector<Strategy> strategies{Strategy::modulus};
  std::vector<std::size_t> inner_nt{32};
  std::vector<std::string> scalars{"real"};
  int reps = 3;
  int warmup = 1;
  std::uint64_t seed = 42;
  std::string eigs = "log:1e-3:1";
  double neg = 0.5;
  std::size_t outer_nt = 32;
  int max_sweeps = 30;

  static BenchGrid from_json(const std::string& text);
  static BenchGrid load(const std::string& path);
};

struct BenchRecord {
  std::string variant;
  std::string strategy;
  std::string scalar;
  std::size_t n = 0;
  std::size_t p = 0;
  std::size_t nt_outer = 0;
  std::size_t nt_inner = 0;
  int sweeps = 0;
  std::size_t rotations = 0;
  double time_s = 0.0;  // median over the timed repetitions
  double c = 0.0;
  std::string status;  // ok, nonconverged, nondeterministic, or error: ...

  std::string csv_row() const;
};

std::string bench_csv_header();

// c = time * p / n^3
double scaling_constant(double time_s, std::size_t n, std::size_t p);

// Runs every cell; failures are recorded in the status column.
std::vector<BenchRecord> run_bench(
    const BenchGrid& grid,
    const std::function<void(const BenchRecord&)>& on_record = {});

}  // namespace hjac
