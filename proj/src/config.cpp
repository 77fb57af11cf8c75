#include "hjac/config.hpp"

#include "hjac/core.hpp"

namespace hjac {

std::string to_string(Variant v) {
  switch (v) {
    case Variant::seq:
      return "seq";
    case Variant::seqF:
      return "seqF";
    case Variant::seqB:
      return "seqB";
    case Variant::p2F:
      return "2F";
    case Variant::p2B:
      return "2B";
    case Variant::p3F:
      return "3F";
    case Variant::p3B:
      return "3B";
  }
  return "?";
}

Variant parse_variant(const std::string& name) {
  for (Variant v : {Variant::seq, Variant::seqF, Variant::seqB, Variant::p2F,
                    Variant::p2B, Variant::p3F, Variant::p3B}) {
    if (to_string(v) == name) {
      return v;
    }
  }
  throw InputError("unknown variant '" + name +
                   "' (expected seq, seqF, seqB, 2F, 2B, 3F or 3B)");
}

bool is_parallel(Variant v) {
  return v != Variant::seq && v != Variant::seqF && v != Variant::seqB;
}

void SolverConfig::validate() const {
  if (p < 1) {
    throw InputError("p must be at least 1");
  }
  if (inner_nt < 1 || outer_nt < 1) {
    throw InputError("block size targets must be at least 1");
  }
  if (tol.max_sweeps < 1) {
    throw InputError("max_sweeps must be at least 1");
  }
  if (tol.orth_tol < 0.0 || tol.quad_tol < 0.0) {
    throw InputError("tolerances must not be negative");
  }
  if (recv_timeout.count() <= 0) {
    throw InputError("receive timeout must be positive");
  }
}

}  // namespace hjac
