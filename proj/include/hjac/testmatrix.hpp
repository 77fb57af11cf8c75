#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "hjac/core.hpp"

namespace hjac {

struct EigSpec {
  enum class Mode { list, log_uniform, uniform };

  Mode mode = Mode::log_uniform;
  std::vector<double> values;  // list mode
  double lo = 1e-3;            // range modes, 0 < lo <= hi
  double hi = 1.0;
  double neg_fraction = 0.0;   // range modes: share of negated eigenvalues
  std::uint64_t seed = 0;

  // "1,2,-3" | "log:lo:hi" | "uni:lo:hi"
  static EigSpec parse(const std::string& text, double neg_fraction,
                       std::uint64_t seed);
  void validate() const;
};

// Exactly n eigenvalues drawn per spec.
std::vector<double> draw_eigenvalues(std::size_t n, const EigSpec& spec);

template <Scalar T>
struct TestMatrix {
  DenseMatrix<T> h;
  std::vector<double> eigenvalues;  // as drawn, unsorted
};

// H = Q diag(lambda) Q^* with Q a product of min(n, 8) random Householder
// reflectors, symmetrized so H is exactly Hermitian.
template <Scalar T>
TestMatrix<T> generate_test_matrix(std::size_t n, const EigSpec& spec);

}  // namespace hjac
