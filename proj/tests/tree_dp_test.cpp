#include <gtest/gtest.h>

#include <cmath>

#include "adint/tree_dp.hpp"
#include "support.hpp"

using namespace adint;
using namespace testing_support;

namespace {

std::vector<Label> labels_of(const AttackGraph& g, const std::vector<NodeId>& vs) {
  std::vector<Label> out;
  for (NodeId v : vs) out.push_back(g.label(v));
  return out;
}

std::vector<std::vector<Label>> bag_labels(const AttackGraph& g, const TreeDecomposition& td) {
  std::vector<std::vector<Label>> out;
  for (const Bag& b : td.bags)
    if (!b.auxiliary) out.push_back(labels_of(g, b.vertices));
  return out;
}

}  // namespace

TEST(EliminateDecompose, Fig2Bags) {
  auto g = fig2();
  auto td = eliminate_decompose(g);
  auto bags = bag_labels(g, td);
  std::sort(bags.begin(), bags.end());
  std::vector<std::vector<Label>> expected{{0},     {1, 0, 2}, {2, 0},  {3, 1, 2},
                                           {10, 3}, {11, 3},   {12, 3}};
  std::sort(expected.begin(), expected.end());
  EXPECT_EQ(bags, expected);
  EXPECT_EQ(td.width, 2U);
  EXPECT_TRUE(decomposition_problems(g, td).empty());
}

TEST(EliminateDecompose, Fig2TreeShape) {
  auto g = fig2();
  auto td = eliminate_decompose(g);
  auto bag_of = [&](Label l) {
    for (std::size_t i = 0; i < td.bags.size(); ++i)
      if (g.label(td.bags[i].vertices[0]) == l) return i;
    return kNoBag;
  };
  EXPECT_EQ(td.root, bag_of(0));
  EXPECT_EQ(td.bags[bag_of(2)].parent, bag_of(0));
  EXPECT_EQ(td.bags[bag_of(1)].parent, bag_of(2));
  EXPECT_EQ(td.bags[bag_of(3)].parent, bag_of(1));
  for (Label entry : {10, 11, 12}) EXPECT_EQ(td.bags[bag_of(entry)].parent, bag_of(3));
}

TEST(EliminateDecompose, PathGraph) {
  auto g = AttackGraph::from_labels({{0, false}, {1, false}, {2, true}},
                                    {{2, 1, true}, {1, 0, false}}, 0);
  auto td = eliminate_decompose(g);
  auto bags = bag_labels(g, td);
  std::sort(bags.begin(), bags.end());
  EXPECT_EQ(bags, (std::vector<std::vector<Label>>{{0}, {1, 0}, {2, 1}}));
  EXPECT_EQ(td.width, 1U);
}

TEST(EliminateDecompose, CyclicThrows) {
  auto g = AttackGraph::from_labels({{0, false}, {1, true}, {2, false}},
                                    {{1, 2, false}, {2, 1, false}, {2, 0, false}}, 0);
  EXPECT_THROW(eliminate_decompose(g), CyclicGraph);
  EXPECT_THROW(dp_solve(g, 1), CyclicGraph);
}

TEST(Nicify, Fig2SplitsThreeChildren) {
  auto g = fig2();
  auto td = nicify(eliminate_decompose(g));
  EXPECT_LE(td.max_children(), 2U);
  EXPECT_TRUE(decomposition_problems(g, td).empty());
  // (3,1,2) gets one clone below it and a second clone for the next split.
  std::size_t three = kNoBag;
  for (std::size_t i = 0; i < td.bags.size(); ++i)
    if (!td.bags[i].auxiliary && g.label(td.bags[i].vertices[0]) == 3) three = i;
  ASSERT_NE(three, kNoBag);
  ASSERT_EQ(td.bags[three].children.size(), 1U);
  const Bag& first = td.bags[td.bags[three].children[0]];
  EXPECT_TRUE(first.auxiliary);
  ASSERT_EQ(first.children.size(), 2U);
  EXPECT_FALSE(td.bags[first.children[0]].auxiliary);
  const Bag& second = td.bags[first.children[1]];
  EXPECT_TRUE(second.auxiliary);
  EXPECT_EQ(second.children.size(), 2U);
  EXPECT_EQ(first.vertices, td.bags[three].vertices);
}

TEST(Nicify, LeafBagsGetNoClone) {
  auto g = AttackGraph::from_labels({{0, false}, {1, false}, {2, true}},
                                    {{2, 1, true}, {1, 0, false}}, 0);
  auto plain = eliminate_decompose(g);
  auto nice = nicify(plain);
  // Two non-leaf bags, one clone each.
  EXPECT_EQ(nice.auxiliary_count(), 2U);
  EXPECT_EQ(nice.max_children(), 1U);
}

TEST(DpSolve, Fig2BudgetTwo) {
  auto g = fig2();
  auto r = dp_solve(g, 2);
  EXPECT_EQ(r.solution.rate, 0.0);
  EXPECT_EQ(r.dp_value, 0.0);
  EXPECT_EQ(r.solution.blocks, (BlockSet{k3to1, k3to2}));
  EXPECT_EQ(r.width, 2U);
  EXPECT_EQ(r.spend.size(), 1U);
  EXPECT_EQ(r.spend.at(g.find(3).value()), 2U);
  EXPECT_LE(static_cast<double>(r.subproblems), r.subproblem_bound);
}

TEST(DpSolve, Fig2BudgetOneAndZero) {
  auto g = fig2();
  EXPECT_NEAR(dp_solve(g, 1).solution.rate, 2.0 / 3.0 * f3(), 1e-15);
  EXPECT_NEAR(dp_solve(g, 0).solution.rate, f3(), 1e-15);
  EXPECT_TRUE(dp_solve(g, 0).solution.blocks.empty());
}

TEST(DpSolve, NodeWithoutBlockableEdgesSpendsNothing) {
  auto g = fig2();
  auto r = dp_solve(g, 2);
  EXPECT_EQ(r.spend.count(g.find(2).value()), 0U);
  EXPECT_EQ(r.spend.count(g.find(1).value()), 0U);
}

// Decomposition axioms and the desired form hold on random DAGs.
TEST(TreeDpProperty, DecompositionValid) {
  for (std::uint64_t seed = 0; seed < 80; ++seed) {
    RandomSpec spec;
    spec.n = 5 + seed % 30;
    spec.extra = seed % 12;
    auto g = random_instance(spec, seed);
    auto td = eliminate_decompose(g);
    EXPECT_TRUE(decomposition_problems(g, td).empty()) << "seed " << seed;
    auto nice = nicify(td);
    auto problems = decomposition_problems(g, nice);
    EXPECT_TRUE(problems.empty()) << "seed " << seed << ": " << (problems.empty() ? "" : problems[0]);
    EXPECT_LE(nice.max_children(), 2U);
    for (const Bag& b : nice.bags) {
      if (b.auxiliary) continue;
      EXPECT_LE(b.children.size(), 1U);
    }
  }
}

TEST(TreeDpProperty, MatchesReferenceOnDags) {
  for (const auto& inst : oracle_suite(150, 4242)) {
    if (!inst.dag) continue;
    for (std::size_t b = 0; b <= 3; ++b) {
      auto r = dp_solve(inst.graph, b);
      const double truth = naive_optimum(inst.graph, b);
      EXPECT_NEAR(r.solution.rate, truth, 1e-9) << "seed " << inst.seed << " b " << b;
      EXPECT_NEAR(r.dp_value, r.solution.rate, 1e-9);
      EXPECT_LE(r.solution.blocks.size(), b);
      const double l = static_cast<double>(max_attack_path_length(inst.graph));
      EXPECT_LE(static_cast<double>(r.subproblems),
                std::pow(l + 2, static_cast<double>(r.width + 1)) *
                    static_cast<double>(2 * inst.graph.node_count() + inst.graph.node_count()) *
                    static_cast<double>(b + 1));
    }
  }
}

TEST(TreeDpProperty, BudgetZeroIsUnblocked) {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    auto g = random_instance({}, seed);
    EXPECT_NEAR(dp_solve(g, 0).solution.rate, evaluate_rate(g, {}), 1e-15);
  }
}
