#include <gtest/gtest.h>

#include "adint/greedy.hpp"
#include "adint/oracle.hpp"
#include "support.hpp"

using namespace adint;
using namespace testing_support;

TEST(Greedy, Fig2BudgetTwo) {
  auto r = greedy(fig2(), 2);
  EXPECT_NEAR(r.rate, 0.285792, 1e-6);
  EXPECT_EQ(r.blocks, (BlockSet{k10to3, k11to3}));
}

TEST(Greedy, Fig2BudgetFive) { EXPECT_EQ(greedy(fig2(), 5).rate, 0.0); }

TEST(Greedy, SpendLeftoverFlag) {
  // Path 2 -> 1 -> 0 with both edges blockable: after one block nothing helps.
  auto g = AttackGraph::from_labels({{0, false}, {1, false}, {2, true}},
                                    {{2, 1, true}, {1, 0, true}}, 0);
  EXPECT_EQ(greedy(g, 2).blocks.size(), 2U);
  EXPECT_EQ(greedy(g, 2, {}, {false}).blocks.size(), 1U);
  EXPECT_EQ(greedy(g, 2, {}, {false}).rate, 0.0);
}

TEST(Greedy, ExactTreesMatchOracle) {
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    GenParams p;
    p.n = 5 + seed % 16;
    p.max_depth = 2 + seed % 4;
    p.s = 1 + seed % 4;
    p.p_b = 0.5;
    p.seed = seed;
    auto g = gen_tree_like(p);
    for (std::size_t b = 0; b <= 3; ++b)
      EXPECT_NEAR(greedy(g, b).rate, brute_force(g, b).rate, 1e-12) << "seed " << seed << " b " << b;
  }
}

TEST(GreedyProperty, NonIncreasingInBudget) {
  for (const auto& inst : oracle_suite(60, 77)) {
    double previous = 2.0;
    for (std::size_t b = 0; b <= 4; ++b) {
      const double rate = greedy(inst.graph, b).rate;
      EXPECT_LE(rate, previous + 1e-15);
      EXPECT_GE(rate, naive_optimum(inst.graph, b) - 1e-12);
      previous = rate;
    }
  }
}

TEST(TreeGreedy, RejectsNonTree) { EXPECT_THROW(tree_greedy(fig2(), 1), NotATree); }

TEST(TreeGreedy, Fig2ResidualFrontier) {
  // Route 3 -> 1 taken (3 -> 1 unblockable), 3 -> 2 blocked and dropped.
  auto g = AttackGraph::from_labels(
      {{0, false}, {1, false}, {2, false}, {3, false}, {10, true}, {11, true}, {12, true}},
      {{10, 3, true}, {11, 3, true}, {12, 3, true}, {3, 1, false}, {1, 0, false}, {2, 0, false}},
      0);
  auto benefit = frontier_benefits(g);
  ASSERT_EQ(benefit.size(), 3U);
  for (EdgeId e : {k10to3, k11to3, k12to3}) EXPECT_NEAR(benefit.at(e), f3() / 3, 1e-15);
  EXPECT_EQ(tree_greedy(g, 2).blocks, (BlockSet{k10to3, k11to3}));
}

TEST(TreeGreedy, SinglePath) {
  auto g = AttackGraph::from_labels({{0, false}, {1, false}, {2, true}},
                                    {{2, 1, true}, {1, 0, false}}, 0);
  auto r = tree_greedy(g, 1);
  EXPECT_EQ(r.blocks, (BlockSet{0}));
  EXPECT_EQ(r.rate, 0.0);
  EXPECT_TRUE(tree_greedy(g, 0).blocks.empty());
  EXPECT_EQ(tree_greedy(g, 0).rate, 0.95 * 0.95);
}

TEST(TreeGreedy, OnlyFrontierEdgesCount) {
  // 3 -> 2 -> 1 -> 0, all blockable, entry 3: only 1 -> 0 is frontier.
  auto g = AttackGraph::from_labels({{0, false}, {1, false}, {2, false}, {3, true}},
                                    {{3, 2, true}, {2, 1, true}, {1, 0, true}}, 0);
  auto benefit = frontier_benefits(g);
  ASSERT_EQ(benefit.size(), 1U);
  EXPECT_EQ(benefit.begin()->first, 2U);
}

// Frontier edges sever disjoint entry sets and tree greedy is optimal.
TEST(TreeGreedyProperty, DisjointSeveringAndOptimal) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    GenParams p;
    p.n = 6 + seed % 15;
    p.max_depth = 3 + seed % 3;
    p.s = 1 + seed % 4;
    p.p_b = 0.5;
    p.seed = seed + 500;
    auto g = gen_tree_like(p);
    auto benefit = frontier_benefits(g);
    std::vector<int> severed_by(g.node_count(), 0);
    for (const auto& [e, gain] : benefit) {
      auto d = shortest_distances(g, BlockSet{e});
      for (NodeId s : g.entries())
        if (d[s] == kUnreachable) ++severed_by[s];
    }
    for (NodeId s : g.entries()) EXPECT_LE(severed_by[s], 1);
    for (std::size_t b = 0; b <= 3; ++b)
      EXPECT_NEAR(tree_greedy(g, b).rate, naive_optimum(g, b), 1e-12) << "seed " << seed;
  }
}
