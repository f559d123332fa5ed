#pragma once

#include <cstdint>
#include <limits>

#include "adint/attack_graph.hpp"

namespace adint {

struct BranchStats {
  // Leaves reached with the budget exhausted (one objective evaluation each).
  std::uint64_t combinations_explored = 0;
  // l^b * C(b+s-1, b).
  std::uint64_t bound = 0;
};

struct BudgetFptOptions {
  // Cut branches whose already-recorded mass cannot beat the incumbent.
  // Disable to count the full branching tree.
  bool prune = true;
};

struct BudgetFptResult {
  Solution solution;
  BranchStats stats;
};

// l^b * C(b+s-1, b), saturating at the uint64 maximum.
inline std::uint64_t combination_bound(std::uint64_t l, std::uint64_t b, std::uint64_t s) {
  using Wide = unsigned __int128;
  constexpr std::uint64_t kMax = std::numeric_limits<std::uint64_t>::max();
  if (s == 0) return b == 0 ? 1 : 0;
  Wide binom = 1;
  for (std::uint64_t i = 1; i <= b; ++i) {
    binom = binom * (s - 1 + i) / i;
    if (binom > kMax) return kMax;
  }
  Wide total = binom;
  for (std::uint64_t i = 0; i < b; ++i) {
    total *= l;
    if (total > kMax) return kMax;
  }
  return static_cast<std::uint64_t>(total);
}

namespace detail {

class BudgetBrancher {
 public:
  BudgetBrancher(const AttackGraph& g, const SuccessFunction& f, bool prune)
      : g_(g), f_(f), prune_(prune), mask_(g.edge_count(), 0), active_(g.node_count(), 0) {
    for (NodeId s : g.entries()) active_[s] = 1;
  }

  void run(std::size_t budget) { branch(budget, 0.0); }

  const std::vector<EdgeId>& witness() const { return witness_; }
  std::uint64_t leaves() const { return leaves_; }

 private:
  void record(double mass) {
    if (mass < best_ - kRateTieEps) {
      best_ = mass;
      witness_ = chosen_;
    }
  }

  void branch(std::size_t budget, double recorded) {
    if (budget == 0) {
      ++leaves_;
      const auto dist = distances_to_da(g_, mask_);
      double mass = recorded;
      for (NodeId s : g_.entries())
        if (active_[s]) mass += f_(dist[s]);
      record(mass);
      return;
    }
    NodeId first = kNoNode;
    for (NodeId s : g_.entries())
      if (active_[s]) {
        first = s;
        break;
      }
    if (first == kNoNode) {
      record(recorded);
      return;
    }
    if (prune_ && recorded >= best_ - kRateTieEps) return;

    const auto dist = distances_to_da(g_, mask_);
    const auto path = shortest_path(first, dist);

    active_[first] = 0;
    branch(budget, recorded + f_(dist[first]));
    active_[first] = 1;

    for (EdgeId e : path) {
      if (!g_.edge(e).blockable) continue;
      mask_[e] = 1;
      chosen_.push_back(e);
      branch(budget - 1, recorded);
      chosen_.pop_back();
      mask_[e] = 0;
    }
  }

  // Shortest path from `from` to da on the current graph, stepping to the
  // smallest-id successor that keeps the path shortest. Empty if unreachable.
  std::vector<EdgeId> shortest_path(NodeId from, const std::vector<Distance>& dist) const {
    std::vector<EdgeId> path;
    if (dist[from] == kUnreachable) return path;
    for (NodeId cur = from; cur != g_.da();) {
      for (EdgeId e : g_.out_edges(cur)) {
        if (mask_[e]) continue;
        const NodeId next = g_.edge(e).dst;
        if (dist[next] != kUnreachable && dist[next] + 1 == dist[cur]) {
          path.push_back(e);
          cur = next;
          break;
        }
      }
    }
    return path;
  }

  const AttackGraph& g_;
  const SuccessFunction& f_;
  bool prune_;
  std::vector<char> mask_;
  std::vector<char> active_;
  std::vector<EdgeId> chosen_;
  std::vector<EdgeId> witness_;
  double best_ = std::numeric_limits<double>::infinity();
  std::uint64_t leaves_ = 0;
};

}  // namespace detail

// Exact branching solver: take the smallest-id remaining entry and one of its
// shortest paths; either some blockable edge on that path gets blocked
// (branch per edge, nearest to the entry first) or the entry keeps its
// current distance and leaves the problem (tried first).
inline BudgetFptResult budget_fpt(const AttackGraph& g, std::size_t budget,
                                  const SuccessFunction& f = {}, BudgetFptOptions options = {}) {
  detail::BudgetBrancher brancher(g, f, options.prune);
  brancher.run(budget);
  BudgetFptResult result;
  result.solution.blocks = BlockSet(brancher.witness());
  result.solution.rate = evaluate_rate(g, result.solution.blocks, f);
  result.stats.combinations_explored = brancher.leaves();
  result.stats.bound = combination_bound(max_attack_path_length(g), budget, g.entry_count());
  return result;
}

}  // namespace adint
