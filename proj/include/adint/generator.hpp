#pragma once

#include <cstdint>
#include <random>
#include <set>
#include <utility>
#include <vector>

#include "adint/attack_graph.hpp"

namespace adint {

// mt19937_64 with hand-rolled draws. The standard distributions are
// implementation-defined, which would break byte-identical regeneration.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // Uniform in [0, bound); bound > 0.
  std::uint64_t below(std::uint64_t bound) {
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                std::numeric_limits<std::uint64_t>::max() % bound;
    std::uint64_t x;
    do {
      x = engine_();
    } while (x >= limit);
    return x % bound;
  }
  double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  bool chance(double p) { return unit() < p; }

  template <typename T>
  void shuffle(std::vector<T>& items) {
    for (std::size_t i = items.size(); i > 1; --i) std::swap(items[i - 1], items[below(i)]);
  }

 private:
  std::mt19937_64 engine_;
};

struct GenParams {
  std::size_t n = 7;
  std::size_t h = 0;
  std::size_t max_depth = 3;
  std::size_t s = 1;
  double p_b = 0.2;
  bool dag = true;
  std::uint64_t seed = 0;
  // Sample entries among all non-da nodes instead of the two deepest levels.
  bool uniform_entries = false;
};

inline void check_params(const GenParams& p) {
  if (p.n < 2) throw InvalidInput("n must be at least 2");
  if (p.max_depth < 1) throw InvalidInput("max_depth must be at least 1");
  if (p.s > p.n - 1) throw InvalidInput("s must not exceed n-1");
  if (p.p_b < 0.0 || p.p_b > 1.0) throw InvalidInput("p_b must lie in [0,1]");
  const std::size_t max_extra = p.n * (p.n - 1) / 2 - (p.n - 1);
  if (p.h > max_extra) throw InvalidInput("h exceeds n(n-1)/2 - (n-1)");
}

// Splitting nodes get one draw for all their out-edges, other nodes one draw
// for their single out-edge. da's out-edges (if any) are never blockable.
inline AttackGraph mark_blockable(const AttackGraph& g, double p_b, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<Edge> edges(g.edges().begin(), g.edges().end());
  for (NodeId v = 0; v < g.node_count(); ++v) {
    if (g.out_degree(v) == 0) continue;
    const bool blockable = rng.chance(p_b) && v != g.da();
    for (EdgeId e : g.out_edges(v)) edges[e].blockable = blockable;
  }
  std::vector<char> entry(g.node_count());
  for (NodeId v = 0; v < g.node_count(); ++v) entry[v] = g.is_entry(v) ? 1 : 0;
  return AttackGraph(std::move(entry), std::move(edges), g.da(), g.labels());
}

// Picks `count` distinct entries. Unless `uniform`, candidates are the nodes
// on the two deepest levels, widened one level at a time when short.
inline std::vector<NodeId> sample_entries(const std::vector<std::size_t>& depth, NodeId da,
                                          std::size_t count, bool uniform, Rng& rng) {
  std::size_t deepest = 0;
  for (std::size_t d : depth) deepest = std::max(deepest, d);
  std::vector<NodeId> pool;
  std::size_t floor = uniform ? 1 : (deepest >= 2 ? deepest - 1 : 1);
  while (true) {
    pool.clear();
    for (NodeId v = 0; v < depth.size(); ++v)
      if (v != da && depth[v] >= floor) pool.push_back(v);
    if (pool.size() >= count || floor <= 1) break;
    --floor;
  }
  if (pool.size() < count) throw Infeasible("not enough candidate entry nodes");
  for (std::size_t i = 0; i < count; ++i) std::swap(pool[i], pool[i + rng.below(pool.size() - i)]);
  pool.resize(count);
  std::sort(pool.begin(), pool.end());
  return pool;
}

// Random tree oriented toward da (node 0) with depth <= max_depth, plus h
// extra edges, s entries and p_b blockable marking. With dag=true every extra
// edge goes from a strictly deeper node to a shallower one.
inline AttackGraph gen_tree_like(const GenParams& p) {
  check_params(p);
  Rng rng(p.seed);
  const std::size_t n = p.n;
  std::vector<std::size_t> depth(n, 0);
  std::vector<Edge> edges;
  std::set<std::pair<NodeId, NodeId>> present;
  std::vector<NodeId> open{0};  // nodes that may still take children
  const std::size_t spine = std::min(p.max_depth, n - 1);
  for (NodeId v = 1; v < n; ++v) {
    NodeId parent = v <= spine ? v - 1 : open[rng.below(open.size())];
    depth[v] = depth[parent] + 1;
    edges.push_back({v, parent, false});
    present.emplace(v, parent);
    if (depth[v] < p.max_depth) open.push_back(v);
  }

  auto eligible = [&](NodeId u, NodeId v) {
    if (u == v || u == 0) return false;
    if (present.count({u, v})) return false;
    if (p.dag) return depth[u] > depth[v];
    return true;
  };
  std::size_t candidates = 0;
  if (p.dag) {
    std::vector<std::size_t> per_depth(p.max_depth + 1, 0);
    for (std::size_t d : depth) ++per_depth[d];
    for (std::size_t a = 0; a < per_depth.size(); ++a)
      for (std::size_t b = 0; b < a; ++b) candidates += per_depth[a] * per_depth[b];
    candidates -= n - 1;
  } else {
    candidates = (n - 1) * (n - 1) - (n - 1);
  }
  if (p.h > candidates) throw Infeasible("cannot place " + std::to_string(p.h) + " extra edges");

  if (p.h * 4 <= candidates) {
    std::size_t added = 0;
    while (added < p.h) {
      NodeId u = static_cast<NodeId>(rng.below(n));
      NodeId v = static_cast<NodeId>(rng.below(n));
      if (!eligible(u, v)) continue;
      edges.push_back({u, v, false});
      present.emplace(u, v);
      ++added;
    }
  } else {
    std::vector<std::pair<NodeId, NodeId>> pool;
    for (NodeId u = 1; u < n; ++u)
      for (NodeId v = 0; v < n; ++v)
        if (eligible(u, v)) pool.emplace_back(u, v);
    for (std::size_t i = 0; i < p.h; ++i) {
      std::swap(pool[i], pool[i + rng.below(pool.size() - i)]);
      edges.push_back({pool[i].first, pool[i].second, false});
    }
  }

  std::vector<char> entry(n, 0);
  for (NodeId v : sample_entries(depth, 0, p.s, p.uniform_entries, rng)) entry[v] = 1;
  AttackGraph tree(std::move(entry), std::move(edges), 0);
  return mark_blockable(tree, p.p_b, p.seed ^ 0x9E3779B97F4A7C15ULL);
}

// For selected blockable edges a->b (b != da, b has a successor), adds a copy
// b' of b with a->b' blockable and b'->c mirroring b->c, where c is b's
// smallest successor. Each eligible edge is selected with probability `share`.
inline AttackGraph add_substitutable(const AttackGraph& g, std::uint64_t seed, double share = 0.5) {
  if (!is_acyclic(g)) throw CyclicGraph("add_substitutable needs an acyclic graph");
  Rng rng(seed);
  std::vector<char> entry(g.node_count());
  for (NodeId v = 0; v < g.node_count(); ++v) entry[v] = g.is_entry(v) ? 1 : 0;
  std::vector<Edge> edges(g.edges().begin(), g.edges().end());
  std::vector<Label> labels = g.labels();
  Label next_label = 0;
  for (Label l : labels) next_label = std::max(next_label, l + 1);

  for (EdgeId e = 0; e < g.edge_count(); ++e) {
    const Edge& ab = g.edge(e);
    if (!ab.blockable || ab.dst == g.da() || g.out_degree(ab.dst) == 0) continue;
    if (!rng.chance(share)) continue;
    const Edge& bc = g.edge(g.out_edges(ab.dst)[0]);
    const NodeId copy = static_cast<NodeId>(entry.size());
    entry.push_back(0);
    labels.push_back(next_label++);
    edges.push_back({ab.src, copy, true});
    edges.push_back({copy, bc.dst, bc.blockable});
  }
  // Labels stay ascending because copies take fresh labels above the max.
  return AttackGraph(std::move(entry), std::move(edges), g.da(), std::move(labels));
}

// Hardness construction from an undirected graph: per node i, i_in -> i_out
// (blockable) and i_out -> da; per edge e = {i, j}, an entry e_s with
// e_s -> i_in and e_s -> j_in. Labels: da = 0, i_in = 1 + 2i,
// i_out = 2 + 2i, e_s = 1 + 2n' + k.
inline AttackGraph gen_clique_reduction(std::size_t node_count,
                                        const std::vector<std::pair<std::size_t, std::size_t>>& links) {
  std::set<std::pair<std::size_t, std::size_t>> seen;
  for (auto [a, b] : links) {
    if (a >= node_count || b >= node_count) throw InvalidInput("edge endpoint out of range");
    if (a == b) throw InvalidInput("self-loop in undirected graph");
    if (!seen.emplace(std::min(a, b), std::max(a, b)).second)
      throw InvalidInput("duplicate undirected edge");
  }
  const std::size_t total = links.size() + 2 * node_count + 1;
  std::vector<char> entry(total, 0);
  std::vector<Edge> edges;
  auto in_node = [](std::size_t i) { return static_cast<NodeId>(1 + 2 * i); };
  auto out_node = [](std::size_t i) { return static_cast<NodeId>(2 + 2 * i); };
  for (std::size_t i = 0; i < node_count; ++i) {
    edges.push_back({in_node(i), out_node(i), true});
    edges.push_back({out_node(i), 0, false});
  }
  for (std::size_t k = 0; k < links.size(); ++k) {
    const auto es = static_cast<NodeId>(1 + 2 * node_count + k);
    entry[es] = 1;
    edges.push_back({es, in_node(links[k].first), false});
    edges.push_back({es, in_node(links[k].second), false});
  }
  return AttackGraph(std::move(entry), std::move(edges), 0);
}

// Appends `count` nodes that cannot reach da: a random forest among
// themselves plus edges from existing nodes into it. preprocess() strips them
// again; used to mimic raw graphs where most nodes never reach da.
inline AttackGraph add_dead_region(const AttackGraph& g, std::size_t count, std::uint64_t seed) {
  Rng rng(seed);
  const std::size_t base = g.node_count();
  std::vector<char> entry(base + count, 0);
  for (NodeId v = 0; v < base; ++v) entry[v] = g.is_entry(v) ? 1 : 0;
  std::vector<Edge> edges(g.edges().begin(), g.edges().end());
  std::vector<Label> labels = g.labels();
  Label next_label = 0;
  for (Label l : labels) next_label = std::max(next_label, l + 1);
  for (std::size_t i = 0; i < count; ++i) labels.push_back(next_label++);
  for (std::size_t i = 1; i < count; ++i) {
    auto child = static_cast<NodeId>(base + i);
    auto parent = static_cast<NodeId>(base + rng.below(i));
    edges.push_back({child, parent, rng.chance(0.2)});
  }
  if (count > 0) {
    std::set<std::pair<NodeId, NodeId>> present;
    for (const Edge& e : edges) present.emplace(e.src, e.dst);
    for (std::size_t i = 0; i < count / 10; ++i) {
      auto src = static_cast<NodeId>(rng.below(base));
      auto dst = static_cast<NodeId>(base + rng.below(count));
      if (src == g.da() || !present.emplace(src, dst).second) continue;
      edges.push_back({src, dst, false});
    }
  }
  return AttackGraph(std::move(entry), std::move(edges), g.da(), std::move(labels));
}

}  // namespace adint
