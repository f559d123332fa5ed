#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <set>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "adint/attack_graph.hpp"

namespace adint {

inline constexpr std::size_t kNoBag = std::numeric_limits<std::size_t>::max();

struct Bag {
  // Non-auxiliary bags list their introduced vertex first, then the
  // remaining vertices ascending. Auxiliary bags copy the bag they clone.
  std::vector<NodeId> vertices;
  bool auxiliary = false;
  std::size_t parent = kNoBag;
  std::vector<std::size_t> children;
};

struct TreeDecomposition {
  std::vector<Bag> bags;
  std::size_t root = kNoBag;
  std::size_t width = 0;

  std::size_t auxiliary_count() const {
    return static_cast<std::size_t>(
        std::count_if(bags.begin(), bags.end(), [](const Bag& b) { return b.auxiliary; }));
  }
  std::size_t max_children() const {
    std::size_t most = 0;
    for (const Bag& b : bags) most = std::max(most, b.children.size());
    return most;
  }
};

// Vertex elimination in ascending (security level, id) order. Each bag is
// the eliminated vertex plus its current neighbourhood; the neighbourhood is
// then made a clique. A bag hangs below the bag of the earliest-eliminated
// vertex of its neighbourhood. Throws CyclicGraph.
inline TreeDecomposition eliminate_decompose(const AttackGraph& g) {
  const auto level = security_levels(g);
  const std::size_t n = g.node_count();
  std::vector<NodeId> order(n);
  std::iota(order.begin(), order.end(), NodeId{0});
  std::sort(order.begin(), order.end(),
            [&](NodeId a, NodeId b) { return std::pair(level[a], a) < std::pair(level[b], b); });
  std::vector<std::size_t> position(n);
  for (std::size_t i = 0; i < n; ++i) position[order[i]] = i;

  std::vector<std::set<NodeId>> adj(n);
  for (const Edge& e : g.edges()) {
    if (e.src == e.dst) continue;
    adj[e.src].insert(e.dst);
    adj[e.dst].insert(e.src);
  }

  TreeDecomposition td;
  td.bags.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const NodeId v = order[i];
    const std::vector<NodeId> nbrs(adj[v].begin(), adj[v].end());
    Bag& bag = td.bags[i];
    bag.vertices.push_back(v);
    bag.vertices.insert(bag.vertices.end(), nbrs.begin(), nbrs.end());
    td.width = std::max(td.width, bag.vertices.size() - 1);
    for (std::size_t a = 0; a < nbrs.size(); ++a) {
      adj[nbrs[a]].erase(v);
      for (std::size_t b = a + 1; b < nbrs.size(); ++b) {
        adj[nbrs[a]].insert(nbrs[b]);
        adj[nbrs[b]].insert(nbrs[a]);
      }
    }
    adj[v].clear();
    if (!nbrs.empty()) {
      NodeId next = *std::min_element(nbrs.begin(), nbrs.end(), [&](NodeId a, NodeId b) {
        return position[a] < position[b];
      });
      bag.parent = position[next];
    }
  }
  td.root = position[g.da()];
  // Components that never meet da hang off the root with an empty context.
  for (std::size_t i = 0; i < n; ++i)
    if (i != td.root && td.bags[i].parent == kNoBag) td.bags[i].parent = td.root;
  for (std::size_t i = 0; i < n; ++i)
    if (td.bags[i].parent != kNoBag) td.bags[td.bags[i].parent].children.push_back(i);
  return td;
}

// Inserts auxiliary clones so that a non-auxiliary bag has at most one child
// (its clone) and every auxiliary bag has at most two children.
inline TreeDecomposition nicify(const TreeDecomposition& td) {
  TreeDecomposition out = td;
  const std::size_t original = td.bags.size();
  for (std::size_t a = 0; a < original; ++a) {
    if (out.bags[a].auxiliary || out.bags[a].children.empty()) continue;
    Bag clone;
    clone.vertices = out.bags[a].vertices;
    clone.auxiliary = true;
    clone.parent = a;
    clone.children = std::move(out.bags[a].children);
    std::size_t at = out.bags.size();
    out.bags[a].children = {at};
    for (std::size_t c : clone.children) out.bags[c].parent = at;
    out.bags.push_back(std::move(clone));
    while (out.bags[at].children.size() > 2) {
      Bag split;
      split.vertices = out.bags[at].vertices;
      split.auxiliary = true;
      split.parent = at;
      auto& kids = out.bags[at].children;
      split.children.assign(kids.begin() + 1, kids.end());
      const std::size_t next = out.bags.size();
      kids.resize(1);
      kids.push_back(next);
      for (std::size_t c : split.children) out.bags[c].parent = next;
      out.bags.push_back(std::move(split));
      at = next;
    }
  }
  return out;
}

// Every violated decomposition axiom or desired-form property, empty when
// the decomposition is valid and desired.
inline std::vector<std::string> decomposition_problems(const AttackGraph& g,
                                                       const TreeDecomposition& td) {
  std::vector<std::string> problems;
  const std::size_t n = g.node_count();
  std::vector<std::vector<char>> in_bag(td.bags.size(), std::vector<char>(n, 0));
  for (std::size_t i = 0; i < td.bags.size(); ++i)
    for (NodeId v : td.bags[i].vertices) in_bag[i][v] = 1;

  if (td.root >= td.bags.size()) {
    problems.emplace_back("missing root bag");
    return problems;
  }
  if (td.bags[td.root].vertices != std::vector<NodeId>{g.da()})
    problems.emplace_back("root bag is not (da)");

  for (std::size_t i = 0; i < td.bags.size(); ++i) {
    const Bag& b = td.bags[i];
    if (i == td.root) continue;
    if (b.parent >= td.bags.size()) {
      problems.push_back("bag " + std::to_string(i) + " has no parent");
      continue;
    }
    const auto& kids = td.bags[b.parent].children;
    if (std::find(kids.begin(), kids.end(), i) == kids.end())
      problems.push_back("bag " + std::to_string(i) + " missing from its parent's children");
  }

  for (NodeId v = 0; v < n; ++v) {
    std::size_t tops = 0;
    std::size_t top = kNoBag;
    for (std::size_t i = 0; i < td.bags.size(); ++i) {
      if (!in_bag[i][v]) continue;
      const std::size_t p = td.bags[i].parent;
      if (i == td.root || p >= td.bags.size() || !in_bag[p][v]) {
        ++tops;
        top = i;
      }
    }
    if (tops == 0) problems.push_back("vertex " + std::to_string(g.label(v)) + " in no bag");
    if (tops > 1)
      problems.push_back("bags of vertex " + std::to_string(g.label(v)) + " are not connected");
    if (top != kNoBag)
      for (EdgeId e : g.out_edges(v))
        if (!in_bag[top][g.edge(e).dst])
          problems.push_back("top bag of vertex " + std::to_string(g.label(v)) +
                             " misses out-neighbour " + std::to_string(g.label(g.edge(e).dst)));
  }

  for (const Edge& e : g.edges()) {
    bool covered = false;
    for (std::size_t i = 0; i < td.bags.size() && !covered; ++i)
      covered = in_bag[i][e.src] && in_bag[i][e.dst];
    if (!covered)
      problems.push_back("edge (" + std::to_string(g.label(e.src)) + "," +
                         std::to_string(g.label(e.dst)) + ") in no bag");
  }

  std::vector<char> introduced(n, 0);
  for (const Bag& b : td.bags) {
    if (b.auxiliary) continue;
    if (b.vertices.empty() || introduced[b.vertices[0]]++)
      problems.emplace_back("non-auxiliary bags do not introduce distinct vertices");
  }
  if (td.auxiliary_count() > 2 * n) problems.emplace_back("more than 2n auxiliary bags");
  return problems;
}

struct DpResult {
  Solution solution;
  // Optimum as computed by the recursion (solution.rate re-evaluates the
  // reconstructed block set).
  double dp_value = 0.0;
  std::size_t width = 0;
  std::size_t subproblems = 0;
  double subproblem_bound = 0.0;
  // Budget units spent at each non-auxiliary bag's vertex on the replay.
  std::map<NodeId, std::size_t> spend;
};

namespace detail {

class TreeDp {
 public:
  using Code = std::uint16_t;

  TreeDp(const AttackGraph& g, const SuccessFunction& f)
      : g_(g), f_(f), td_(nicify(eliminate_decompose(g))) {
    const std::size_t l = max_attack_path_length(g);
    if (l + 1 >= std::numeric_limits<Code>::max())
      throw TooLarge("attack paths too long for distance labels");
    infinity_ = static_cast<Code>(l + 1);
    share_ = g.entry_count() == 0 ? 0.0 : 1.0 / static_cast<double>(g.entry_count());
    memo_.resize(td_.bags.size());
    parent_slot_.resize(td_.bags.size());
    edge_slot_.resize(g.edge_count(), kNoSlot);
    for (std::size_t i = 0; i < td_.bags.size(); ++i) {
      const Bag& bag = td_.bags[i];
      if (bag.parent != kNoBag) {
        const auto& up = td_.bags[bag.parent].vertices;
        for (std::size_t k = 0; k < bag.vertices.size(); ++k) {
          if (k == 0 && !bag.auxiliary) {
            parent_slot_[i].push_back(kNoSlot);
            continue;
          }
          auto it = std::find(up.begin(), up.end(), bag.vertices[k]);
          if (it == up.end()) throw std::logic_error("decomposition lacks running intersection");
          parent_slot_[i].push_back(static_cast<std::size_t>(it - up.begin()));
        }
      }
      if (!bag.auxiliary) {
        const NodeId x = bag.vertices[0];
        for (EdgeId e : g.out_edges(x)) {
          auto it = std::find(bag.vertices.begin(), bag.vertices.end(), g.edge(e).dst);
          if (it == bag.vertices.end()) throw std::logic_error("bag misses an out-neighbour");
          edge_slot_[e] = static_cast<std::size_t>(it - bag.vertices.begin());
        }
      }
    }
    bound_ = std::pow(static_cast<double>(l + 2), static_cast<double>(td_.width + 1)) *
             static_cast<double>(td_.bags.size());
  }

  DpResult solve(std::size_t budget) {
    std::vector<Code> root_ctx(td_.bags[td_.root].vertices.size(), 0);
    DpResult result;
    result.dp_value = value(td_.root, root_ctx, budget);
    result.width = td_.width;
    for (const auto& m : memo_) result.subproblems += m.size();
    result.subproblem_bound = bound_ * static_cast<double>(budget + 1);
    if (static_cast<double>(result.subproblems) > result.subproblem_bound)
      throw std::logic_error("tree DP exceeded its subproblem bound");
    BlockSet blocks;
    replay(td_.root, root_ctx, budget, blocks, result.spend);
    result.solution.blocks = std::move(blocks);
    result.solution.rate = evaluate_rate(g_, result.solution.blocks, f_);
    return result;
  }

  const TreeDecomposition& decomposition() const { return td_; }

 private:
  static constexpr std::size_t kNoSlot = std::numeric_limits<std::size_t>::max();

  struct Entry {
    double value;
    std::size_t decision;
  };

  // Blockable out-edges of x with a finite option length, shortest first,
  // and the shortest unblockable option.
  struct Options {
    std::vector<std::pair<Code, EdgeId>> blockable;
    Code fixed;
  };

  Options options(std::size_t bag, const std::vector<Code>& ctx) const {
    const NodeId x = td_.bags[bag].vertices[0];
    Options opt{{}, infinity_};
    if (x == g_.da()) {
      opt.fixed = 0;
      return opt;
    }
    for (EdgeId e : g_.out_edges(x)) {
      const Code next = ctx[edge_slot_[e]];
      if (next == infinity_ || next + 1 >= infinity_) continue;
      const Code len = static_cast<Code>(next + 1);
      if (g_.edge(e).blockable)
        opt.blockable.emplace_back(len, e);
      else
        opt.fixed = std::min(opt.fixed, len);
    }
    std::sort(opt.blockable.begin(), opt.blockable.end());
    return opt;
  }

  Code distance_after(const Options& opt, std::size_t z) const {
    Code d = opt.fixed;
    if (z < opt.blockable.size()) d = std::min(d, opt.blockable[z].first);
    return d;
  }

  std::vector<Code> project(std::size_t child, const std::vector<Code>& ctx) const {
    std::vector<Code> out;
    out.reserve(parent_slot_[child].size());
    for (std::size_t slot : parent_slot_[child]) out.push_back(slot == kNoSlot ? 0 : ctx[slot]);
    return out;
  }

  std::string key(std::size_t bag, const std::vector<Code>& ctx, std::size_t budget) const {
    std::string k;
    const std::size_t skip = td_.bags[bag].auxiliary ? 0 : 1;
    k.reserve((ctx.size() - skip) * sizeof(Code) + sizeof(budget));
    for (std::size_t i = skip; i < ctx.size(); ++i)
      k.append(reinterpret_cast<const char*>(&ctx[i]), sizeof(Code));
    k.append(reinterpret_cast<const char*>(&budget), sizeof(budget));
    return k;
  }

  double value(std::size_t bag, std::vector<Code> ctx, std::size_t budget) {
    const std::string k = key(bag, ctx, budget);
    if (auto it = memo_[bag].find(k); it != memo_[bag].end()) return it->second.value;
    Entry entry = td_.bags[bag].auxiliary ? split(bag, ctx, budget) : spend(bag, ctx, budget);
    memo_[bag].emplace(k, entry);
    return entry.value;
  }

  // Non-auxiliary bag: choose how many units to spend on the introduced
  // vertex, always blocking its shortest blockable options.
  Entry spend(std::size_t bag, std::vector<Code>& ctx, std::size_t budget) {
    const Bag& b = td_.bags[bag];
    const NodeId x = b.vertices[0];
    const Options opt = options(bag, ctx);
    const std::size_t most = std::min(budget, opt.blockable.size());
    Entry best{std::numeric_limits<double>::infinity(), 0};
    for (std::size_t z = 0; z <= most; ++z) {
      const Code d = distance_after(opt, z);
      double total = g_.is_entry(x) ? share_ * f_(d == infinity_ ? kUnreachable : d) : 0.0;
      if (!b.children.empty()) {
        ctx[0] = d;
        total += value(b.children[0], project(b.children[0], ctx), budget - z);
      }
      if (total < best.value - kRateTieEps) best = {total, z};
    }
    return best;
  }

  // Auxiliary bag: divide the budget between at most two children.
  Entry split(std::size_t bag, const std::vector<Code>& ctx, std::size_t budget) {
    const auto& kids = td_.bags[bag].children;
    if (kids.empty()) return {0.0, 0};
    if (kids.size() == 1) return {value(kids[0], project(kids[0], ctx), budget), budget};
    const auto left_ctx = project(kids[0], ctx);
    const auto right_ctx = project(kids[1], ctx);
    Entry best{std::numeric_limits<double>::infinity(), 0};
    for (std::size_t left = 0; left <= budget; ++left) {
      const double total = value(kids[0], left_ctx, left) + value(kids[1], right_ctx, budget - left);
      if (total < best.value - kRateTieEps) best = {total, left};
    }
    return best;
  }

  void replay(std::size_t bag, std::vector<Code> ctx, std::size_t budget, BlockSet& blocks,
              std::map<NodeId, std::size_t>& spent) {
    value(bag, ctx, budget);
    const Entry& entry = memo_[bag].at(key(bag, ctx, budget));
    const Bag& b = td_.bags[bag];
    if (!b.auxiliary) {
      const Options opt = options(bag, ctx);
      const std::size_t z = entry.decision;
      for (std::size_t i = 0; i < z; ++i) blocks.insert(opt.blockable[i].second);
      if (z > 0) spent[b.vertices[0]] = z;
      if (!b.children.empty()) {
        ctx[0] = distance_after(opt, z);
        replay(b.children[0], project(b.children[0], ctx), budget - z, blocks, spent);
      }
      return;
    }
    if (b.children.size() == 1) {
      replay(b.children[0], project(b.children[0], ctx), budget, blocks, spent);
    } else if (b.children.size() == 2) {
      replay(b.children[0], project(b.children[0], ctx), entry.decision, blocks, spent);
      replay(b.children[1], project(b.children[1], ctx), budget - entry.decision, blocks, spent);
    }
  }

  const AttackGraph& g_;
  const SuccessFunction& f_;
  TreeDecomposition td_;
  Code infinity_ = 0;
  double share_ = 0.0;
  double bound_ = 0.0;
  std::vector<std::unordered_map<std::string, Entry>> memo_;
  std::vector<std::vector<std::size_t>> parent_slot_;
  std::vector<std::size_t> edge_slot_;
};

}  // namespace detail

// Exact solver for acyclic graphs: dynamic program over the nice desired
// tree decomposition, with (bag, successor distances, budget) subproblems.
// Throws CyclicGraph.
inline DpResult dp_solve(const AttackGraph& g, std::size_t budget, const SuccessFunction& f = {}) {
  detail::TreeDp dp(g, f);
  return dp.solve(budget);
}

}  // namespace adint
