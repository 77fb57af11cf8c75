#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

namespace hjac {

enum class Strategy { modulus, round_robin };

std::string to_string(Strategy s);
// Accepts "modulus" and "rr" (or "round_robin").
Strategy parse_strategy(const std::string& name);

// Steps per sweep: 2p for modulus, 2p - 1 for round-robin (1 when p = 1).
std::size_t steps_per_sweep(Strategy s, std::size_t p);

// Per-worker pivot state. Block indices are 1-based.
struct StrategyState {
  std::size_t rank = 0;
  std::size_t nbl = 0;
  std::size_t ip = 0;
  std::size_t jp = 0;
  std::size_t i_blk = 0;
  std::size_t j_blk = 0;
  int nsweep = 1;
};

// What one worker does at a step boundary.
struct StepPlan {
  std::size_t snd_rnk = 0;
  std::size_t rcv_rnk = 0;
  std::size_t snd_blk = 0;
  std::size_t rcv_blk = 0;
  std::size_t i_blk = 0;  // the pair held after the exchange, i_blk < j_blk
  std::size_t j_blk = 0;
  bool swapped = false;  // the surviving block moved to the j side
};

// Antidiagonal start: worker q holds blocks (q + 1, nbl - q).
StrategyState init_strategy(std::size_t rank, std::size_t nbl);

// Advance a worker's state by one step. The ring direction follows the
// parity of state.nsweep, which must be the sweep that is ending or in
// progress, so call this before incrementing nsweep.
StepPlan modulus_step(StrategyState& state, std::size_t p);
StepPlan round_robin_step(StrategyState& state, std::size_t p);
StepPlan strategy_step(Strategy s, StrategyState& state, std::size_t p);

// Global block layout of each step of one sweep: layouts[k][q] is the pair
// held by worker q at step k.
struct SweepSchedule {
  std::vector<std::vector<std::pair<std::size_t, std::size_t>>> layouts;
  // Messages sent at the end of each step: ((from, to), block).
  std::vector<std::vector<std::pair<std::pair<std::size_t, std::size_t>, std::size_t>>>
      messages;
};

// Replays all p workers through sweep number `sweep` (1-based), starting
// from the initial layout and running every earlier sweep first. Throws
// NumericalError on any inconsistency: a block held twice, or a message
// whose receiver does not expect it.
SweepSchedule generate_sweep_schedule(Strategy s, std::size_t p, int sweep = 1);

// Which of the unordered pairs of {1..2p} a sweep never visits, and which it
// visits more than once.
struct PairCoverage {
  std::size_t slots = 0;
  std::vector<std::pair<std::size_t, std::size_t>> missing;
  std::vector<std::pair<std::size_t, std::size_t>> repeated;
};
PairCoverage pair_coverage(const SweepSchedule& schedule, std::size_t p);

}  // namespace hjac
