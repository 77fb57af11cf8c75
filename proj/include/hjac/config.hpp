#pragma once

#include <chrono>
#include <cstddef>
#include <string>

#include "hjac/rotation.hpp"
#include "hjac/schedule.hpp"

namespace hjac {

// seq is the non-blocked one-sided method; seqF/seqB the sequential full
// block and block-oriented algorithms; the rest run on the worker ring.
enum class Variant { seq, seqF, seqB, p2F, p2B, p3F, p3B };

std::string to_string(Variant v);
// Accepts the CLI spellings: seq, seqF, seqB, 2F, 2B, 3F, 3B.
Variant parse_variant(const std::string& name);
bool is_parallel(Variant v);

struct SolverConfig {
  Variant variant = Variant::p2F;
  Strategy strategy = Strategy::modulus;
  std::size_t p = 1;
  std::size_t outer_nt = 32;  // block size target of seqF and seqB
  std::size_t inner_nt = 32;  // inner block size target of 3F and 3B
  // orth_tol or quad_tol left at zero are replaced by the defaults for the
  // factor's shape.
  Tolerances tol{0.0, 0.0, 30};
  std::chrono::milliseconds recv_timeout{std::chrono::hours(1)};

  void validate() const;
};

}  // namespace hjac
