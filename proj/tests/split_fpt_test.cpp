#include <gtest/gtest.h>

#include <cmath>

#include "adint/oracle.hpp"
#include "adint/split_fpt.hpp"
#include "support.hpp"

using namespace adint;
using namespace testing_support;

TEST(EnumerateStrategies, Fig2) {
  auto all = enumerate_strategies(fig2());
  ASSERT_EQ(all.size(), 3U);
  EXPECT_EQ(all[0].choice, std::vector<int>{0});
  EXPECT_EQ(all[1].choice, std::vector<int>{1});
  EXPECT_EQ(all[2].choice, std::vector<int>{kNoRoute});
}

TEST(EnumerateStrategies, NoSplittingNodes) {
  auto g = AttackGraph::from_labels({{0, false}, {1, false}, {2, true}},
                                    {{2, 1, true}, {1, 0, false}}, 0);
  auto all = enumerate_strategies(g);
  ASSERT_EQ(all.size(), 1U);
  EXPECT_TRUE(all[0].choice.empty());
}

TEST(EnumerateStrategies, TwoBinarySplitsGiveNine) {
  // 4 -> {3, 2}, 3 -> {1, 2}, 1 -> 0, 2 -> 0.
  auto g = AttackGraph::from_labels(
      {{0, false}, {1, false}, {2, false}, {3, false}, {4, true}},
      {{4, 3, true}, {4, 2, true}, {3, 1, true}, {3, 2, true}, {1, 0, false}, {2, 0, false}}, 0);
  auto all = enumerate_strategies(g);
  ASSERT_EQ(all.size(), 9U);
  EXPECT_EQ(all.front().choice, (std::vector<int>{0, 0}));
  EXPECT_EQ(all[1].choice, (std::vector<int>{0, 1}));
  EXPECT_EQ(all[2].choice, (std::vector<int>{0, kNoRoute}));
  EXPECT_EQ(all.back().choice, (std::vector<int>{kNoRoute, kNoRoute}));
}

TEST(EnumerateStrategies, GuardThrows) {
  auto g = fig2();
  EXPECT_THROW(enumerate_strategies(g, 2), TooLarge);
}

TEST(EvalStrategy, Fig2TakeRouteViaOne) {
  auto g = fig2();
  auto ev = eval_strategy(g, AttackerStrategy{{0}}, 2);
  EXPECT_TRUE(ev.valid);
  EXPECT_TRUE(ev.forced.empty()) << "the route via 2 is not strictly shorter";
  EXPECT_NEAR(ev.solution.rate, f3() / 3, 1e-15);
  // Reference: 3->1 is locked, so blocks come from entries and 3->2.
  const std::vector<EdgeId> free{k10to3, k11to3, k12to3, k3to2};
  double best = 1;
  for (std::uint64_t mask = 0; mask < 16; ++mask)
    if (std::popcount(mask) <= 2) best = std::min(best, naive_rate(g, mask, free));
  EXPECT_NEAR(ev.solution.rate, best, 1e-15);
}

TEST(EvalStrategy, Fig2NoneBudgetTwo) {
  auto ev = eval_strategy(fig2(), AttackerStrategy{{kNoRoute}}, 2);
  EXPECT_TRUE(ev.valid);
  EXPECT_EQ(ev.forced, (BlockSet{k3to1, k3to2}));
  EXPECT_EQ(ev.solution.rate, 0.0);
}

TEST(EvalStrategy, Fig2NoneBudgetOneIsInvalid) {
  auto ev = eval_strategy(fig2(), AttackerStrategy{{kNoRoute}}, 1);
  EXPECT_FALSE(ev.valid);
  EXPECT_TRUE(ev.solution.blocks.empty());
  EXPECT_EQ(ev.solution.rate, 1.0);
}

TEST(EvalStrategy, MalformedThrows) {
  EXPECT_THROW(eval_strategy(fig2(), AttackerStrategy{{2}}, 1), InvalidInput);
  EXPECT_THROW(eval_strategy(fig2(), AttackerStrategy{{}}, 1), InvalidInput);
}

TEST(EvalStrategy, UnblockableShortcutInvalidates) {
  // 3 -> 1 -> 0 (long) vs 3 -> 0 direct and unblockable: choosing the long
  // route cannot be made rational.
  auto g = AttackGraph::from_labels({{0, false}, {1, false}, {3, true}},
                                    {{3, 1, true}, {3, 0, false}, {1, 0, false}}, 0);
  // Successor order: 0 then 1.
  EXPECT_TRUE(eval_strategy(g, AttackerStrategy{{0}}, 1).valid);
  EXPECT_FALSE(eval_strategy(g, AttackerStrategy{{1}}, 1).valid);
}

TEST(SplitFpt, Fig2) {
  auto r2 = split_fpt(fig2(), 2);
  EXPECT_EQ(r2.solution.rate, 0.0);
  EXPECT_EQ(r2.strategy.choice, std::vector<int>{kNoRoute});
  EXPECT_EQ(r2.strategies_evaluated, 3U);
  EXPECT_NEAR(split_fpt(fig2(), 1).solution.rate, 2.0 / 3.0 * f3(), 1e-15);
}

// Every valid strategy yields a defence whose evaluated rate is at least the
// optimum, and the best one reaches it.
TEST(SplitFptProperty, StrategiesBracketTheOptimum) {
  for (const auto& inst : oracle_suite(60, 606)) {
    const double truth = naive_optimum(inst.graph, inst.budget);
    StrategySpace space(inst.graph);
    double best = 2.0;
    space.for_each([&](const AttackerStrategy& s) {
      auto ev = eval_strategy(space, s, inst.budget);
      if (!ev.valid) return;
      EXPECT_LE(ev.solution.blocks.size(), inst.budget);
      EXPECT_GE(ev.solution.rate, truth - 1e-12);
      EXPECT_EQ(ev.solution.rate, evaluate_rate(inst.graph, ev.solution.blocks));
      best = std::min(best, ev.solution.rate);
    });
    EXPECT_NEAR(best, truth, 1e-9) << "seed " << inst.seed;
  }
}

TEST(SplitFptProperty, CountsStrategiesWithinThreeToTheH) {
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    GenParams p;
    p.n = 8 + seed % 14;
    p.h = seed % 7;
    p.max_depth = 4;
    p.s = 1 + seed % 4;
    p.p_b = 0.5;
    p.dag = seed % 3 != 0;
    p.seed = seed;
    auto g = gen_tree_like(p);
    auto r = split_fpt(g, 2);
    EXPECT_EQ(r.strategies_evaluated, strategy_space_size(g));
    EXPECT_LE(static_cast<double>(r.strategies_evaluated),
              std::pow(3.0, static_cast<double>(feedback_edge_count(g))));
  }
}

TEST(SplitFptProperty, Deterministic) {
  for (const auto& inst : oracle_suite(30, 99)) {
    StrategySpace space(inst.graph);
    space.for_each([&](const AttackerStrategy& s) {
      auto a = eval_strategy(space, s, inst.budget);
      auto b = eval_strategy(space, s, inst.budget);
      EXPECT_EQ(a.valid, b.valid);
      EXPECT_EQ(a.solution.blocks, b.solution.blocks);
    });
  }
}
