#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <stdexcept>
#include <vector>

#include "adint/attack_graph.hpp"
#include "adint/condense.hpp"
#include "adint/greedy.hpp"

namespace adint {

inline constexpr int kNoRoute = -1;
inline constexpr std::uint64_t kStrategyGuard = 10'000'000;

// Route index per splitting node (ascending node order), or kNoRoute.
struct AttackerStrategy {
  std::vector<int> choice;

  friend bool operator==(const AttackerStrategy&, const AttackerStrategy&) = default;
};

struct StrategyEvaluation {
  bool valid = false;
  Solution solution{BlockSet{}, 1.0};
  // Blocks implied by the strategy itself, before the residual tree greedy.
  BlockSet forced;
};

struct SplitFptResult {
  Solution solution;
  AttackerStrategy strategy;
  std::uint64_t strategies_evaluated = 0;
};

// Splitting nodes and their simple routes, shared by every strategy
// evaluation on one graph.
class StrategySpace {
 public:
  explicit StrategySpace(const AttackGraph& g)
      : g_(g), splits_(splitting_nodes(g)), routes_(simple_routes(g)), index_(g.node_count(), -1) {
    for (std::size_t i = 0; i < splits_.size(); ++i) index_[splits_[i]] = static_cast<long>(i);
  }

  const AttackGraph& graph() const { return g_; }
  const std::vector<NodeId>& splitting() const { return splits_; }
  const std::vector<std::vector<Route>>& routes() const { return routes_; }
  long index_of(NodeId v) const { return index_[v]; }

  std::uint64_t size() const { return strategy_space_size(g_); }

  bool well_formed(const AttackerStrategy& s) const {
    if (s.choice.size() != splits_.size()) return false;
    for (std::size_t i = 0; i < splits_.size(); ++i)
      if (s.choice[i] < kNoRoute || s.choice[i] >= static_cast<int>(routes_[i].size())) return false;
    return true;
  }

  // Lexicographic over splitting nodes sorted by id; per coordinate the
  // routes come in successor order with kNoRoute last.
  void for_each(const std::function<void(const AttackerStrategy&)>& visit,
                std::uint64_t guard = kStrategyGuard) const {
    if (size() > guard)
      throw TooLarge("attacker strategy space exceeds " + std::to_string(guard));
    const std::size_t t = splits_.size();
    std::vector<std::size_t> digit(t, 0);  // 0..d_i-1 routes, d_i = none
    AttackerStrategy s{std::vector<int>(t, 0)};
    while (true) {
      for (std::size_t i = 0; i < t; ++i)
        s.choice[i] = digit[i] == routes_[i].size() ? kNoRoute : static_cast<int>(digit[i]);
      visit(s);
      std::size_t pos = t;
      while (pos > 0) {
        --pos;
        if (++digit[pos] <= routes_[pos].size()) break;
        digit[pos] = 0;
        if (pos == 0) return;
      }
      if (t == 0) return;
    }
  }

 private:
  const AttackGraph& g_;
  std::vector<NodeId> splits_;
  std::vector<std::vector<Route>> routes_;
  std::vector<long> index_;
};

inline std::vector<AttackerStrategy> enumerate_strategies(const AttackGraph& g,
                                                          std::uint64_t guard = kStrategyGuard) {
  StrategySpace space(g);
  std::vector<AttackerStrategy> all;
  space.for_each([&](const AttackerStrategy& s) { all.push_back(s); }, guard);
  return all;
}

// Builds the cheapest defence under which `strategy` is the attacker's best
// response: taken routes become unblockable, strictly shorter untaken routes
// are cut at their blockable edge closest to da, and the leftover budget goes
// to tree greedy on the residual tree of rational choices. The reported rate
// is re-evaluated on the original graph.
inline StrategyEvaluation eval_strategy(const StrategySpace& space, const AttackerStrategy& strategy,
                                        std::size_t budget, const SuccessFunction& f = {}) {
  const AttackGraph& g = space.graph();
  if (!space.well_formed(strategy)) throw InvalidInput("malformed attacker strategy");
  const auto& routes = space.routes();
  const auto& splits = space.splitting();
  const std::size_t t = splits.size();

  std::vector<char> locked(g.edge_count(), 0);
  for (std::size_t i = 0; i < t; ++i)
    if (strategy.choice[i] != kNoRoute)
      for (EdgeId e : routes[i][strategy.choice[i]].path) locked[e] = 1;

  // Splitting-node distances along chosen routes; none, dead ends and cycles
  // give infinity.
  constexpr std::uint64_t kInf = std::numeric_limits<std::uint64_t>::max();
  std::vector<std::uint64_t> dist(t, kInf);
  std::vector<char> state(t, 0);  // 0 new, 1 in progress, 2 done
  auto terminal_distance = [&](auto&& self, NodeId v) -> std::uint64_t {
    if (v == g.da()) return 0;
    const long i = space.index_of(v);
    if (i < 0) return kInf;
    if (state[i] == 2) return dist[i];
    if (state[i] == 1) return kInf;
    state[i] = 1;
    std::uint64_t d = kInf;
    if (strategy.choice[i] != kNoRoute) {
      const Route& r = routes[i][strategy.choice[i]];
      if (r.ends_at_terminal) {
        const std::uint64_t rest = self(self, r.to);
        if (rest != kInf) d = rest + r.path.size();
      }
    }
    dist[i] = d;
    state[i] = 2;
    return d;
  };
  for (std::size_t i = 0; i < t; ++i) terminal_distance(terminal_distance, splits[i]);

  StrategyEvaluation out;
  std::vector<char> blocked(g.edge_count(), 0);
  for (std::size_t i = 0; i < t; ++i) {
    for (std::size_t k = 0; k < routes[i].size(); ++k) {
      if (static_cast<int>(k) == strategy.choice[i]) continue;
      const Route& r = routes[i][k];
      if (!r.ends_at_terminal) continue;
      const std::uint64_t rest = terminal_distance(terminal_distance, r.to);
      if (rest == kInf) continue;
      if (std::any_of(r.path.begin(), r.path.end(), [&](EdgeId e) { return blocked[e] != 0; }))
        continue;
      if (rest + r.path.size() >= dist[i]) continue;
      auto cut = std::find_if(r.path.rbegin(), r.path.rend(),
                              [&](EdgeId e) { return g.edge(e).blockable && !locked[e]; });
      if (cut == r.path.rend()) return {};
      blocked[*cut] = 1;
      out.forced.insert(*cut);
    }
  }
  if (out.forced.size() > budget) return {};

  // Residual tree: drop forced blocks and every untaken first edge at
  // splitting nodes; locked edges lose their blockable flag.
  std::vector<char> dropped = blocked;
  for (std::size_t i = 0; i < t; ++i)
    for (std::size_t k = 0; k < routes[i].size(); ++k)
      if (static_cast<int>(k) != strategy.choice[i]) dropped[routes[i][k].path.front()] = 1;
  std::vector<Edge> kept;
  std::vector<EdgeId> origin;
  for (EdgeId e = 0; e < g.edge_count(); ++e) {
    if (dropped[e]) continue;
    Edge copy = g.edge(e);
    copy.blockable = copy.blockable && !locked[e];
    kept.push_back(copy);
    origin.push_back(e);
  }
  std::vector<char> entry(g.node_count());
  for (NodeId v = 0; v < g.node_count(); ++v) entry[v] = g.is_entry(v) ? 1 : 0;
  const AttackGraph residual(std::move(entry), std::move(kept), g.da(), g.labels());
  const Solution rest = tree_greedy(residual, budget - out.forced.size(), f);

  BlockSet all = out.forced;
  for (EdgeId e : rest.blocks) all.insert(origin[e]);
  out.valid = true;
  out.solution = {all, evaluate_rate(g, all, f)};
  return out;
}

inline StrategyEvaluation eval_strategy(const AttackGraph& g, const AttackerStrategy& strategy,
                                        std::size_t budget, const SuccessFunction& f = {}) {
  return eval_strategy(StrategySpace(g), strategy, budget, f);
}

// Exact solver over the attacker's route classifications. Ties on the rate
// resolve to the lexicographically smallest block set.
inline SplitFptResult split_fpt(const AttackGraph& g, std::size_t budget,
                                const SuccessFunction& f = {},
                                std::uint64_t guard = kStrategyGuard) {
  StrategySpace space(g);
  SplitFptResult best;
  bool found = false;
  space.for_each(
      [&](const AttackerStrategy& s) {
        ++best.strategies_evaluated;
        StrategyEvaluation ev = eval_strategy(space, s, budget, f);
        if (!ev.valid) return;
        const bool better =
            !found || ev.solution.rate < best.solution.rate - kRateTieEps ||
            (ev.solution.rate <= best.solution.rate + kRateTieEps &&
             ev.solution.blocks < best.solution.blocks);
        if (better) {
          best.solution = std::move(ev.solution);
          best.strategy = s;
          found = true;
        }
      },
      guard);
  if (!found) throw std::logic_error("no attacker strategy admits a defence");
  // On connected graphs where every node but da has an out-edge,
  // h = sum(d_i - 1) and the product of (d_i + 1) cannot exceed 3^h.
  bool saturated = g.out_degree(g.da()) == 0;
  for (NodeId v = 0; v < g.node_count() && saturated; ++v)
    saturated = v == g.da() || g.out_degree(v) > 0;
  if (saturated && feedback_edge_count(g) + g.node_count() == g.edge_count() + 1) {
    const double cap = std::pow(3.0, static_cast<double>(feedback_edge_count(g)));
    if (static_cast<double>(best.strategies_evaluated) > cap)
      throw std::logic_error("strategy count exceeds 3^h");
  }
  return best;
}

}  // namespace adint
