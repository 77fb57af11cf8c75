#include "hjac/schedule.hpp"

#include <algorithm>

#include "hjac/core.hpp"

namespace hjac {

std::string to_string(Strategy s) {
  return s == Strategy::modulus ? "modulus" : "rr";
}

Strategy parse_strategy(const std::string& name) {
  if (name == "modulus") {
    return Strategy::modulus;
  }
  if (name == "rr" || name == "round_robin") {
    return Strategy::round_robin;
  }
  throw InputError("unknown strategy '" + name + "' (expected modulus or rr)");
}

std::size_t steps_per_sweep(Strategy s, std::size_t p) {
  if (p == 0) {
    throw InputError("worker count must be positive");
  }
  if (s == Strategy::modulus) {
    return 2 * p;
  }
  return std::max<std::size_t>(2 * p - 1, 1);
}

StrategyState init_strategy(std::size_t rank, std::size_t nbl) {
  if (nbl < 2 || nbl % 2 != 0 || rank >= nbl / 2) {
    throw InputError("init_strategy: rank " + std::to_string(rank) +
                     " out of range for " + std::to_string(nbl) + " blocks");
  }
  StrategyState st;
  st.rank = rank;
  st.nbl = nbl;
  st.ip = rank + 1;
  st.i_blk = st.ip;
  st.jp = nbl - rank;
  st.j_blk = st.jp;
  return st;
}

namespace {

void set_neighbors(StepPlan& plan, const StrategyState& st, std::size_t p) {
  const std::size_t left = (p + st.rank - 1) % p;
  const std::size_t right = (st.rank + 1) % p;
  if (st.nsweep % 2 != 0) {
    plan.snd_rnk = left;
    plan.rcv_rnk = right;
  } else {
    plan.snd_rnk = right;
    plan.rcv_rnk = left;
  }
}

void finish(StepPlan& plan, const StrategyState& st) {
  plan.i_blk = std::min(st.i_blk, st.j_blk);
  plan.j_blk = std::max(st.i_blk, st.j_blk);
}

}  // namespace

StepPlan modulus_step(StrategyState& st, std::size_t p) {
  StepPlan plan;
  const std::size_t nbl = st.nbl;
  if (st.ip + st.jp > nbl) {
    plan.snd_blk = st.i_blk;
    ++st.ip;
    if (st.ip == st.jp) {
      st.ip -= nbl / 2;
      st.jp = st.ip;
    }
    st.i_blk = st.ip;
    plan.rcv_blk = st.i_blk;
  } else {
    plan.snd_blk = st.j_blk;
    ++st.jp;
    st.j_blk = st.jp;
    plan.rcv_blk = st.j_blk;
  }
  set_neighbors(plan, st, p);
  finish(plan, st);
  return plan;
}

StepPlan round_robin_step(StrategyState& st, std::size_t p) {
  StepPlan plan;
  const std::size_t nbl = st.nbl;
  const std::size_t ip = st.ip;
  if (st.ip + st.jp > nbl) {
    if (st.jp < nbl) {
      plan.snd_blk = st.i_blk;
      ++st.ip;
      if (st.ip < st.jp) {
        st.i_blk = st.ip;
        plan.rcv_blk = st.i_blk;
      } else {
        st.ip = st.jp;
        st.i_blk = st.j_blk;
        plan.swapped = true;
        st.jp = nbl;
        st.j_blk = st.jp;
        plan.rcv_blk = st.j_blk;
      }
    } else if (ip > nbl / 2) {
      plan.snd_blk = st.i_blk;
      st.ip = ip - nbl / 2 + 1;
      st.i_blk = st.ip;
      plan.rcv_blk = st.i_blk;
    } else {
      plan.snd_blk = st.j_blk;
      st.jp = ip + 1;
      st.j_blk = st.jp;
      plan.rcv_blk = st.j_blk;
    }
  } else {
    plan.snd_blk = st.j_blk;
    ++st.jp;
    st.j_blk = st.jp;
    plan.rcv_blk = st.j_blk;
  }
  set_neighbors(plan, st, p);
  finish(plan, st);
  return plan;
}

StepPlan strategy_step(Strategy s, StrategyState& state, std::size_t p) {
  return s == Strategy::modulus ? modulus_step(state, p)
                                : round_robin_step(state, p);
}

SweepSchedule generate_sweep_schedule(Strategy s, std::size_t p, int sweep) {
  if (p == 0 || sweep < 1) {
    throw InputError("generate_sweep_schedule: p and sweep must be positive");
  }
  const std::size_t nbl = 2 * p;
  const std::size_t steps = steps_per_sweep(s, p);
  std::vector<StrategyState> states;
  for (std::size_t q = 0; q < p; ++q) {
    states.push_back(init_strategy(q, nbl));
  }

  auto check_layout = [&](std::size_t step) {
    std::vector<bool> held(nbl + 1, false);
    std::vector<std::pair<std::size_t, std::size_t>> layout;
    for (const StrategyState& st : states) {
      for (std::size_t b : {st.i_blk, st.j_blk}) {
        if (b < 1 || b > nbl || held[b]) {
          throw NumericalError("schedule collision: block " + std::to_string(b) +
                               " held twice at step " + std::to_string(step));
        }
        held[b] = true;
      }
      layout.emplace_back(std::min(st.i_blk, st.j_blk),
                          std::max(st.i_blk, st.j_blk));
    }
    return layout;
  };

  auto advance = [&](std::size_t step) {
    std::vector<StepPlan> plans;
    for (std::size_t q = 0; q < p; ++q) {
      plans.push_back(strategy_step(s, states[q], p));
    }
    std::vector<std::pair<std::pair<std::size_t, std::size_t>, std::size_t>> msgs;
    for (std::size_t q = 0; q < p; ++q) {
      const StepPlan& out = plans[q];
      const StepPlan& in = plans[out.snd_rnk];
      if (in.rcv_rnk != q || in.rcv_blk != out.snd_blk) {
        throw NumericalError("schedule message mismatch at step " +
                             std::to_string(step) + ": worker " +
                             std::to_string(q) + " sends block " +
                             std::to_string(out.snd_blk));
      }
      msgs.push_back({{q, out.snd_rnk}, out.snd_blk});
    }
    return msgs;
  };

  SweepSchedule result;
  // The exchange after the last step of a sweep produces the first layout
  // of the next one and still uses the ending sweep's parity.
  for (int sw = 1; sw <= sweep; ++sw) {
    for (std::size_t k = 0; k < steps; ++k) {
      auto layout = check_layout(k);
      auto msgs = advance(k);
      if (sw == sweep) {
        result.layouts.push_back(std::move(layout));
        result.messages.push_back(std::move(msgs));
      }
    }
    for (StrategyState& st : states) {
      ++st.nsweep;
    }
  }
  return result;
}

PairCoverage pair_coverage(const SweepSchedule& schedule, std::size_t p) {
  const std::size_t nbl = 2 * p;
  std::vector<std::size_t> count(nbl * nbl, 0);
  PairCoverage cov;
  for (const auto& layout : schedule.layouts) {
    for (const auto& [i, j] : layout) {
      ++count[(i - 1) * nbl + (j - 1)];
      ++cov.slots;
    }
  }
  for (std::size_t i = 1; i <= nbl; ++i) {
    for (std::size_t j = i + 1; j <= nbl; ++j) {
      const std::size_t c = count[(i - 1) * nbl + (j - 1)];
      if (c == 0) {
        cov.missing.emplace_back(i, j);
      } else if (c > 1) {
        cov.repeated.emplace_back(i, j);
      }
    }
  }
  return cov;
}

}  // namespace hjac
