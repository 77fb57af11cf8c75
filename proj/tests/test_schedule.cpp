#include <gtest/gtest.h>

#include <algorithm>
#include <map>
#include <set>

#include "hjac/core.hpp"
#include "hjac/schedule.hpp"

namespace hjac {
namespace {

using Pair = std::pair<std::size_t, std::size_t>;

TEST(Strategy, ParseAndPrint) {
  EXPECT_EQ(parse_strategy("modulus"), Strategy::modulus);
  EXPECT_EQ(parse_strategy("rr"), Strategy::round_robin);
  EXPECT_EQ(parse_strategy("round_robin"), Strategy::round_robin);
  EXPECT_EQ(to_string(Strategy::round_robin), "rr");
  EXPECT_THROW(parse_strategy("cyclic"), InputError);
}

TEST(Strategy, StepsPerSweep) {
  EXPECT_EQ(steps_per_sweep(Strategy::modulus, 3), 6u);
  EXPECT_EQ(steps_per_sweep(Strategy::round_robin, 3), 5u);
  EXPECT_EQ(steps_per_sweep(Strategy::round_robin, 1), 1u);
}

TEST(InitStrategy, AntidiagonalLayout) {
  auto a = init_strategy(0, 6);
  EXPECT_EQ(a.i_blk, 1u);
  EXPECT_EQ(a.j_blk, 6u);
  auto b = init_strategy(2, 6);
  EXPECT_EQ(b.i_blk, 3u);
  EXPECT_EQ(b.j_blk, 4u);
  auto c = init_strategy(0, 2);
  EXPECT_EQ(c.i_blk, 1u);
  EXPECT_EQ(c.j_blk, 2u);
  EXPECT_THROW(init_strategy(3, 6), InputError);
  EXPECT_THROW(init_strategy(0, 5), InputError);
}

TEST(ModulusStep, FirstStepOfRankZero) {
  auto st = init_strategy(0, 6);
  const auto plan = modulus_step(st, 3);
  EXPECT_EQ(plan.snd_blk, 1u);
  EXPECT_EQ(plan.snd_rnk, 2u);
  EXPECT_EQ(plan.rcv_blk, 2u);
  EXPECT_EQ(plan.rcv_rnk, 1u);
  EXPECT_EQ(plan.i_blk, 2u);
  EXPECT_EQ(plan.j_blk, 6u);
}

TEST(ModulusStep, WrapBranch) {
  auto st = init_strategy(2, 6);
  const auto plan = modulus_step(st, 3);
  EXPECT_EQ(plan.snd_blk, 3u);
  EXPECT_EQ(st.ip, 1u);
  EXPECT_EQ(st.jp, 1u);
  EXPECT_EQ(plan.i_blk, 1u);
  EXPECT_EQ(plan.j_blk, 4u);
}

TEST(ModulusStep, EvenSweepReversesDirection) {
  auto odd = init_strategy(1, 6);
  auto even = init_strategy(1, 6);
  even.nsweep = 2;
  const auto a = modulus_step(odd, 3);
  const auto b = modulus_step(even, 3);
  EXPECT_EQ(a.snd_rnk, b.rcv_rnk);
  EXPECT_EQ(a.rcv_rnk, b.snd_rnk);
  EXPECT_EQ(a.snd_blk, b.snd_blk);
}

TEST(RoundRobinStep, SingleWorkerAlwaysHoldsBothBlocks) {
  auto st = init_strategy(0, 2);
  for (int k = 0; k < 6; ++k) {
    const auto plan = round_robin_step(st, 1);
    EXPECT_EQ(plan.i_blk, 1u);
    EXPECT_EQ(plan.j_blk, 2u);
    EXPECT_EQ(plan.snd_rnk, 0u);
    EXPECT_EQ(plan.rcv_rnk, 0u);
    ++st.nsweep;
  }
}

TEST(RoundRobinStep, NeighborsFollowParity) {
  for (std::size_t p = 2; p <= 5; ++p) {
    for (int sweep : {1, 2}) {
      for (std::size_t q = 0; q < p; ++q) {
        auto st = init_strategy(q, 2 * p);
        st.nsweep = sweep;
        const auto plan = round_robin_step(st, p);
        const std::size_t left = (q + p - 1) % p;
        const std::size_t right = (q + 1) % p;
        EXPECT_EQ(plan.snd_rnk, sweep == 1 ? left : right);
        EXPECT_EQ(plan.rcv_rnk, sweep == 1 ? right : left);
      }
    }
  }
}

// Independent tally of a schedule straight from its layouts.
struct PairTally {
  std::map<Pair, int> visits;
  bool blocks_conserved = true;
};

PairTally tally(const SweepSchedule& s, std::size_t p) {
  PairTally t;
  for (const auto& layout : s.layouts) {
    std::vector<std::size_t> held;
    for (const auto& [i, j] : layout) {
      EXPECT_LT(i, j);
      held.push_back(i);
      held.push_back(j);
      ++t.visits[{i, j}];
    }
    std::sort(held.begin(), held.end());
    for (std::size_t k = 0; k < 2 * p; ++k) {
      t.blocks_conserved = t.blocks_conserved && held[k] == k + 1;
    }
  }
  return t;
}

void check_messages(const SweepSchedule& s, std::size_t p) {
  for (const auto& step : s.messages) {
    std::vector<int> sent(p, 0), received(p, 0);
    for (const auto& [route, blk] : step) {
      ++sent[route.first];
      ++received[route.second];
      EXPECT_GE(blk, 1u);
      EXPECT_LE(blk, 2 * p);
    }
    for (std::size_t q = 0; q < p; ++q) {
      EXPECT_EQ(sent[q], 1);
      EXPECT_EQ(received[q], 1);
    }
  }
}

TEST(Schedule, ModulusThreeWorkers) {
  const auto s = generate_sweep_schedule(Strategy::modulus, 3);
  ASSERT_EQ(s.layouts.size(), 6u);
  const auto t = tally(s, 3);
  EXPECT_EQ(t.visits.size(), 15u);
  std::set<Pair> twice;
  for (const auto& [pair, count] : t.visits) {
    if (count == 2) {
      twice.insert(pair);
    }
  }
  EXPECT_EQ(twice, (std::set<Pair>{{1, 4}, {2, 5}, {3, 6}}));
}

TEST(Schedule, RoundRobinThreeWorkers) {
  const auto s = generate_sweep_schedule(Strategy::round_robin, 3);
  ASSERT_EQ(s.layouts.size(), 5u);
  const auto t = tally(s, 3);
  EXPECT_EQ(t.visits.size(), 15u);
  for (const auto& [pair, count] : t.visits) {
    EXPECT_EQ(count, 1) << pair.first << "," << pair.second;
  }
}

TEST(Schedule, EnumerationOverWorkersAndSweeps) {
  for (std::size_t p = 1; p <= 8; ++p) {
    for (int sweep = 1; sweep <= 4; ++sweep) {
      for (Strategy strat : {Strategy::modulus, Strategy::round_robin}) {
        SCOPED_TRACE(to_string(strat) + " p=" + std::to_string(p) +
                     " sweep=" + std::to_string(sweep));
        const auto s = generate_sweep_schedule(strat, p, sweep);
        ASSERT_EQ(s.layouts.size(), steps_per_sweep(strat, p));
        const auto t = tally(s, p);
        EXPECT_TRUE(t.blocks_conserved);
        check_messages(s, p);
        const std::size_t pairs = p * (2 * p - 1);
        EXPECT_EQ(t.visits.size(), pairs);
        for (const auto& [pair, count] : t.visits) {
          const bool doubled =
              strat == Strategy::modulus && pair.second == pair.first + p;
          EXPECT_EQ(count, doubled ? 2 : 1) << pair.first << "," << pair.second;
        }
        const auto cov = pair_coverage(s, p);
        EXPECT_TRUE(cov.missing.empty());
        EXPECT_EQ(cov.slots, p * s.layouts.size());
      }
    }
  }
}

TEST(Schedule, RejectsBadArguments) {
  EXPECT_THROW(generate_sweep_schedule(Strategy::modulus, 0), InputError);
  EXPECT_THROW(generate_sweep_schedule(Strategy::modulus, 2, 0), InputError);
}

}  // namespace
}  // namespace hjac
