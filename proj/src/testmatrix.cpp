#include "hjac/testmatrix.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

namespace hjac {

namespace {

double parse_double(const std::string& s, const std::string& what) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) {
      throw InputError("");
    }
    return v;
  } catch (const std::exception&) {
    throw InputError("bad number '" + s + "' in " + what);
  }
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::stringstream in(s);
  std::string item;
  while (std::getline(in, item, sep)) {
    parts.push_back(item);
  }
  return parts;
}

template <Scalar T>
T random_entry(std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  if constexpr (is_complex_v<T>) {
    const double re = normal(rng);
    return T(re, normal(rng));
  } else {
    return normal(rng);
  }
}

}  // namespace

EigSpec EigSpec::parse(const std::string& text, double neg_fraction,
                       std::uint64_t seed) {
  EigSpec spec;
  spec.neg_fraction = neg_fraction;
  spec.seed = seed;
  const auto colon = text.find(':');
  if (colon != std::string::npos) {
    const auto parts = split(text, ':');
    if (parts.size() != 3 || (parts[0] != "log" && parts[0] != "uni")) {
      throw InputError("eigenvalue range must be log:lo:hi or uni:lo:hi, got '" +
                       text + "'");
    }
    spec.mode = parts[0] == "log" ? Mode::log_uniform : Mode::uniform;
    spec.lo = parse_double(parts[1], "eigenvalue range");
    spec.hi = parse_double(parts[2], "eigenvalue range");
  } else {
    spec.mode = Mode::list;
    for (const auto& item : split(text, ',')) {
      spec.values.push_back(parse_double(item, "eigenvalue list"));
    }
  }
  spec.validate();
  return spec;
}

void EigSpec::validate() const {
  if (!(neg_fraction >= 0.0 && neg_fraction <= 1.0)) {
    throw InputError("negative fraction must lie in [0, 1]");
  }
  if (mode == Mode::list) {
    if (values.empty()) {
      throw InputError("eigenvalue list is empty");
    }
    for (double v : values) {
      if (v == 0.0 || !std::isfinite(v)) {
        throw InputError("eigenvalue list entries must be finite and nonzero");
      }
    }
  } else if (!(lo > 0.0 && hi >= lo && std::isfinite(hi))) {
    throw InputError("eigenvalue range needs 0 < lo <= hi");
  }
}

std::vector<double> draw_eigenvalues(std::size_t n, const EigSpec& spec) {
  spec.validate();
  if (spec.mode == EigSpec::Mode::list) {
    if (spec.values.size() != n) {
      throw InputError("eigenvalue list has " +
                       std::to_string(spec.values.size()) +
                       " entries, expected " + std::to_string(n));
    }
    return spec.values;
  }
  std::mt19937_64 rng(spec.seed);
  std::vector<double> out(n);
  if (spec.mode == EigSpec::Mode::log_uniform) {
    std::uniform_real_distribution<double> u(std::log(spec.lo), std::log(spec.hi));
    for (double& v : out) {
      v = std::exp(u(rng));
    }
  } else {
    std::uniform_real_distribution<double> u(spec.lo, spec.hi);
    for (double& v : out) {
      v = u(rng);
    }
  }
  const auto negatives = static_cast<std::size_t>(
      std::llround(spec.neg_fraction * static_cast<double>(n)));
  std::vector<std::size_t> idx(n);
  for (std::size_t i = 0; i < n; ++i) {
    idx[i] = i;
  }
  std::shuffle(idx.begin(), idx.end(), rng);
  for (std::size_t k = 0; k < std::min(negatives, n); ++k) {
    out[idx[k]] = -out[idx[k]];
  }
  return out;
}

template <Scalar T>
TestMatrix<T> generate_test_matrix(std::size_t n, const EigSpec& spec) {
  if (n == 0) {
    throw InputError("test matrix order must be positive");
  }
  TestMatrix<T> tm;
  tm.eigenvalues = draw_eigenvalues(n, spec);
  tm.h = DenseMatrix<T>(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    tm.h(i, i) = T(tm.eigenvalues[i]);
  }
  // Separate stream so the spectrum does not depend on the reflectors.
  std::mt19937_64 rng(spec.seed ^ 0x9e3779b97f4a7c15ULL);
  using Vec = Eigen::Matrix<T, Eigen::Dynamic, 1>;
  auto h = tm.h.eigen();
  const std::size_t reflectors = std::min<std::size_t>(n, 8);
  for (std::size_t k = 0; k < reflectors && n > 1; ++k) {
    Vec v(static_cast<Eigen::Index>(n));
    for (Eigen::Index i = 0; i < v.size(); ++i) {
      v(i) = random_entry<T>(rng);
    }
    v /= v.norm();
    // H <- (I - 2 v v^*) H (I - 2 v v^*)
    const Vec hv = h * v;
    const T vhv = v.dot(hv);  // v^* H v
    const Vec w = hv - vhv * v;
    h.noalias() -= T(2) * (v * w.adjoint() + w * v.adjoint());
  }
  symmetrize(tm.h);
  return tm;
}

template TestMatrix<double> generate_test_matrix(std::size_t, const EigSpec&);
template TestMatrix<complex128> generate_test_matrix(std::size_t, const EigSpec&);

}  // namespace hjac
