#pragma once

// Fixtures and an independent reference evaluator for the test binaries.
// Nothing here calls into the solver headers except to build graphs, so the
// naive optimum can serve as ground truth for the library oracle too.

#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <vector>

#include "adint/attack_graph.hpp"
#include "adint/generator.hpp"

namespace testing_support {

using namespace adint;

// Node labels {0=da, 1, 2, 3, 10, 11, 12}; edge ids in listed order:
// 0:10->3 1:11->3 2:12->3 3:3->1 4:3->2 5:1->0 6:2->0.
inline AttackGraph fig2() {
  return AttackGraph::from_labels(
      {{0, false}, {1, false}, {2, false}, {3, false}, {10, true}, {11, true}, {12, true}},
      {{10, 3, true}, {11, 3, true}, {12, 3, true}, {3, 1, true}, {3, 2, true}, {1, 0, false},
       {2, 0, false}},
      0);
}

inline constexpr EdgeId k10to3 = 0, k11to3 = 1, k12to3 = 2, k3to1 = 3, k3to2 = 4;

inline double f3() { return 0.95 * 0.95 * 0.95; }

// Hop distances by repeated relaxation over the edge list (Bellman-Ford
// style) instead of breadth-first search.
inline std::vector<long> naive_distances(const AttackGraph& g, std::uint64_t blocked_mask,
                                         const std::vector<EdgeId>& pool) {
  std::vector<char> off(g.edge_count(), 0);
  for (std::size_t i = 0; i < pool.size(); ++i)
    if (blocked_mask >> i & 1U) off[pool[i]] = 1;
  const long inf = std::numeric_limits<long>::max();
  std::vector<long> d(g.node_count(), inf);
  d[g.da()] = 0;
  for (std::size_t round = 0; round < g.node_count(); ++round) {
    bool changed = false;
    for (EdgeId e = 0; e < g.edge_count(); ++e) {
      if (off[e]) continue;
      const Edge& x = g.edge(e);
      if (d[x.dst] != inf && d[x.dst] + 1 < d[x.src]) {
        d[x.src] = d[x.dst] + 1;
        changed = true;
      }
    }
    if (!changed) break;
  }
  return d;
}

inline double naive_rate(const AttackGraph& g, std::uint64_t mask, const std::vector<EdgeId>& pool,
                         double base = 0.95) {
  const auto d = naive_distances(g, mask, pool);
  double sum = 0;
  std::size_t s = 0;
  for (NodeId v = 0; v < g.node_count(); ++v) {
    if (!g.is_entry(v)) continue;
    ++s;
    if (d[v] != std::numeric_limits<long>::max()) sum += std::pow(base, static_cast<double>(d[v]));
  }
  return s == 0 ? 0.0 : sum / static_cast<double>(s);
}

// Minimum objective over every subset of at most b blockable edges, by
// bitmask enumeration.
inline double naive_optimum(const AttackGraph& g, std::size_t b, double base = 0.95) {
  std::vector<EdgeId> pool;
  for (EdgeId e = 0; e < g.edge_count(); ++e)
    if (g.edge(e).blockable) pool.push_back(e);
  double best = std::numeric_limits<double>::infinity();
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << pool.size()); ++mask) {
    if (static_cast<std::size_t>(std::popcount(mask)) > b) continue;
    best = std::min(best, naive_rate(g, mask, pool, base));
  }
  return best;
}

// Random instance where every node reaches da: node v > 0 gets one edge to a
// node of smaller index, plus `extra` random additional edges. With dag=true
// extra edges also point to smaller indices, otherwise they may close
// cycles. At most `max_blockable` edges are blockable.
struct RandomSpec {
  std::size_t n = 10;
  std::size_t extra = 3;
  std::size_t entries = 3;
  std::size_t max_blockable = 12;
  double p_block = 0.5;
  bool dag = true;
};

inline AttackGraph random_instance(const RandomSpec& spec, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  auto below = [&](std::size_t k) { return static_cast<std::size_t>(rng() % k); };
  const std::size_t n = spec.n;
  std::vector<std::vector<char>> has(n, std::vector<char>(n, 0));
  std::vector<Edge> edges;
  for (NodeId v = 1; v < n; ++v) {
    const auto p = static_cast<NodeId>(below(v));
    edges.push_back({v, p, false});
    has[v][p] = 1;
  }
  for (std::size_t k = 0, tries = 0; k < spec.extra && tries < 50 * (spec.extra + 1); ++tries) {
    auto a = static_cast<NodeId>(1 + below(n - 1));
    auto b = static_cast<NodeId>(below(n));
    if (a == b || has[a][b]) continue;
    if (spec.dag && b > a) continue;
    has[a][b] = 1;
    edges.push_back({a, b, false});
    ++k;
  }
  std::size_t blockable = 0;
  for (Edge& e : edges)
    if (blockable < spec.max_blockable && (rng() % 1000) < spec.p_block * 1000) {
      e.blockable = true;
      ++blockable;
    }
  std::vector<NodeId> pool;
  for (NodeId v = 1; v < n; ++v) pool.push_back(v);
  std::shuffle(pool.begin(), pool.end(), rng);
  std::vector<char> entry(n, 0);
  for (std::size_t i = 0; i < std::min(spec.entries, pool.size()); ++i) entry[pool[i]] = 1;
  return AttackGraph(std::move(entry), std::move(edges), 0);
}

// Mix of small instances for the oracle suites: hand-rolled random graphs
// (DAG and cyclic) and generator output, all with |E_b| <= 12.
struct Instance {
  AttackGraph graph;
  std::size_t budget;
  bool dag;
  std::uint64_t seed;
};

inline std::vector<Instance> oracle_suite(std::size_t count, std::uint64_t base_seed = 1000) {
  std::vector<Instance> out;
  std::mt19937_64 rng(base_seed);
  for (std::size_t i = 0; out.size() < count; ++i) {
    const std::uint64_t seed = base_seed + i;
    const std::size_t budget = rng() % 4;
    if (i % 3 == 2) {
      GenParams p;
      p.n = 6 + rng() % 20;
      p.h = rng() % 5;
      p.max_depth = 2 + rng() % 4;
      p.s = 1 + rng() % 4;
      p.p_b = 0.3 + 0.1 * static_cast<double>(rng() % 4);
      p.dag = rng() % 4 != 0;
      p.seed = seed;
      AttackGraph g;
      try {
        g = gen_tree_like(p);
      } catch (const Infeasible&) {
        continue;
      }
      if (g.blockable_count() > 12) continue;
      out.push_back({g, budget, is_acyclic(g), seed});
    } else {
      RandomSpec spec;
      spec.n = 4 + rng() % 22;
      spec.extra = rng() % 8;
      spec.entries = 1 + rng() % 4;
      spec.p_block = 0.3 + 0.1 * static_cast<double>(rng() % 5);
      spec.dag = i % 3 == 0;
      AttackGraph g = random_instance(spec, seed);
      out.push_back({g, budget, is_acyclic(g), seed});
    }
  }
  return out;
}

}  // namespace testing_support
