#pragma once

#include <algorithm>
#include <limits>
#include <map>

#include "adint/attack_graph.hpp"

namespace adint {

struct GreedyOptions {
  // Keep spending budget on zero-benefit edges (smallest id first) once no
  // block improves the objective.
  bool spend_leftover = true;
};

// b rounds; each round commits the single blockable edge whose removal gives
// the lowest objective. Ties go to the smallest edge id.
inline Solution greedy(const AttackGraph& g, std::size_t budget, const SuccessFunction& f = {},
                       GreedyOptions options = {}) {
  const std::vector<EdgeId> pool = g.blockable_edges();
  std::vector<char> mask(g.edge_count(), 0);
  BlockSet chosen;
  double current = success_rate(g, distances_to_da(g, mask), f);
  for (std::size_t round = 0; round < budget; ++round) {
    EdgeId pick = 0;
    double pick_rate = std::numeric_limits<double>::infinity();
    bool found = false;
    for (EdgeId e : pool) {
      if (mask[e]) continue;
      mask[e] = 1;
      const double rate = success_rate(g, distances_to_da(g, mask), f);
      mask[e] = 0;
      if (rate < pick_rate - kRateTieEps) {
        pick = e;
        pick_rate = rate;
        found = true;
      }
    }
    if (!found) break;
    if (!options.spend_leftover && pick_rate >= current - kRateTieEps) break;
    mask[pick] = 1;
    chosen.insert(pick);
    current = pick_rate;
  }
  return {chosen, evaluate_rate(g, chosen, f)};
}

// Throws NotATree unless every node other than da has at most one out-edge.
inline void require_tree(const AttackGraph& tree) {
  for (NodeId v = 0; v < tree.node_count(); ++v)
    if (v != tree.da() && tree.out_degree(v) > 1)
      throw NotATree("node " + std::to_string(tree.label(v)) + " has " +
                     std::to_string(tree.out_degree(v)) + " live out-edges");
}

// Frontier blockable edges (no blockable edge between them and da) mapped to
// the objective mass f(dist)/s of the entries they sever.
inline std::map<EdgeId, double> frontier_benefits(const AttackGraph& tree,
                                                  const SuccessFunction& f = {}) {
  require_tree(tree);
  const auto dist = distances_to_da(tree);
  std::vector<NodeId> order;
  for (NodeId v = 0; v < tree.node_count(); ++v)
    if (dist[v] != kUnreachable) order.push_back(v);
  std::sort(order.begin(), order.end(), [&](NodeId a, NodeId b) { return dist[a] < dist[b]; });

  // clear[v]: the path from v to da has no blockable edge.
  std::vector<char> clear(tree.node_count(), 0);
  std::map<EdgeId, double> benefit;
  for (NodeId v : order) {
    if (v == tree.da()) {
      clear[v] = 1;
      continue;
    }
    const EdgeId e = tree.out_edges(v)[0];
    const NodeId next = tree.edge(e).dst;
    clear[v] = clear[next] && !tree.edge(e).blockable;
    if (tree.edge(e).blockable && clear[next]) benefit.emplace(e, 0.0);
  }

  const double share = tree.entry_count() == 0 ? 0.0 : 1.0 / static_cast<double>(tree.entry_count());
  for (NodeId s : tree.entries()) {
    if (dist[s] == kUnreachable) continue;
    EdgeId last = std::numeric_limits<EdgeId>::max();
    for (NodeId cur = s; cur != tree.da();) {
      const EdgeId e = tree.out_edges(cur)[0];
      if (tree.edge(e).blockable) last = e;
      cur = tree.edge(e).dst;
    }
    if (last != std::numeric_limits<EdgeId>::max()) benefit[last] += f(dist[s]) * share;
  }
  return benefit;
}

// Optimal blocking on an exact tree: frontier edges sever disjoint entry
// sets, so the best b' of them by benefit are optimal. Ties by edge id.
inline Solution tree_greedy(const AttackGraph& tree, std::size_t budget,
                            const SuccessFunction& f = {}) {
  const auto benefit = frontier_benefits(tree, f);
  std::vector<std::pair<EdgeId, double>> ranked(benefit.begin(), benefit.end());
  std::stable_sort(ranked.begin(), ranked.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
  BlockSet chosen;
  for (const auto& [e, gain] : ranked) {
    if (chosen.size() >= budget || gain <= 0.0) break;
    chosen.insert(e);
  }
  return {chosen, evaluate_rate(tree, chosen, f)};
}

}  // namespace adint
