#pragma once

#include <algorithm>
#include <cmath>
#include <compare>
#include <cstdint>
#include <deque>
#include <initializer_list>
#include <limits>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "adint/error.hpp"

namespace adint {

// Dense node index in [0, n). Nodes are stored in ascending label order, so
// "smallest id" tie-breaks agree on internal indices and external labels.
using NodeId = std::uint32_t;
// Index into AttackGraph::edges().
using EdgeId = std::uint32_t;
// External node identifier as it appears in graph files.
using Label = std::int64_t;
// Hop count to da.
using Distance = std::uint32_t;

inline constexpr Distance kUnreachable = std::numeric_limits<Distance>::max();
inline constexpr NodeId kNoNode = std::numeric_limits<NodeId>::max();
// Tolerance for treating two objective values as tied.
inline constexpr double kRateTieEps = 1e-12;

struct Edge {
  NodeId src = 0;
  NodeId dst = 0;
  bool blockable = false;
};

struct LabeledNode {
  Label id = 0;
  bool entry = false;
};

struct LabeledEdge {
  Label src = 0;
  Label dst = 0;
  bool blockable = false;
};

// f(x) = base^x, f(inf) = 0.
struct SuccessFunction {
  double base = 0.95;

  double operator()(Distance hops) const {
    if (hops == kUnreachable) return 0.0;
    return std::pow(base, static_cast<double>(hops));
  }
};

// Sorted set of edge ids chosen for blocking.
class BlockSet {
 public:
  BlockSet() = default;
  BlockSet(std::initializer_list<EdgeId> ids) : ids_(ids) { normalize(); }
  explicit BlockSet(std::vector<EdgeId> ids) : ids_(std::move(ids)) { normalize(); }

  void insert(EdgeId e) {
    auto it = std::lower_bound(ids_.begin(), ids_.end(), e);
    if (it == ids_.end() || *it != e) ids_.insert(it, e);
  }
  void merge(const BlockSet& other) {
    for (EdgeId e : other) insert(e);
  }
  bool contains(EdgeId e) const { return std::binary_search(ids_.begin(), ids_.end(), e); }
  std::size_t size() const { return ids_.size(); }
  bool empty() const { return ids_.empty(); }
  std::vector<EdgeId>::const_iterator begin() const { return ids_.begin(); }
  std::vector<EdgeId>::const_iterator end() const { return ids_.end(); }
  const std::vector<EdgeId>& ids() const { return ids_; }

  std::vector<char> mask(std::size_t edge_count) const {
    std::vector<char> m(edge_count, 0);
    for (EdgeId e : ids_) m.at(e) = 1;
    return m;
  }

  friend bool operator==(const BlockSet&, const BlockSet&) = default;
  friend auto operator<=>(const BlockSet& a, const BlockSet& b) {
    return std::lexicographical_compare_three_way(a.ids_.begin(), a.ids_.end(), b.ids_.begin(),
                                                  b.ids_.end());
  }

 private:
  void normalize() {
    std::sort(ids_.begin(), ids_.end());
    ids_.erase(std::unique(ids_.begin(), ids_.end()), ids_.end());
  }

  std::vector<EdgeId> ids_;
};

// Directed attack graph with entry nodes, one destination (da) and
// per-edge blockable flags. Immutable after construction.
class AttackGraph {
 public:
  AttackGraph() = default;

  // Dense constructor. labels defaults to the identity.
  AttackGraph(std::vector<char> entry, std::vector<Edge> edges, NodeId da,
              std::vector<Label> labels = {})
      : entry_(std::move(entry)), edges_(std::move(edges)), labels_(std::move(labels)), da_(da) {
    if (labels_.empty()) {
      labels_.resize(entry_.size());
      std::iota(labels_.begin(), labels_.end(), Label{0});
    }
    if (labels_.size() != entry_.size())
      throw InvalidInput("label count does not match node count");
    for (const Edge& e : edges_) {
      if (e.src >= entry_.size() || e.dst >= entry_.size())
        throw InvalidInput("edge endpoint out of range");
    }
    build_index();
  }

  // Builds from externally labelled nodes and edges. Structural problems
  // (unknown endpoints, repeated node ids, unknown da) are recorded rather
  // than thrown; validate() reports them. Offending items are dropped.
  static AttackGraph from_labels(std::vector<LabeledNode> nodes, std::vector<LabeledEdge> edges,
                                 Label da) {
    AttackGraph g;
    std::stable_sort(nodes.begin(), nodes.end(),
                     [](const LabeledNode& a, const LabeledNode& b) { return a.id < b.id; });
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      if (i > 0 && nodes[i].id == nodes[i - 1].id) {
        g.problems_.push_back("duplicate node id " + std::to_string(nodes[i].id));
        continue;
      }
      g.labels_.push_back(nodes[i].id);
      g.entry_.push_back(nodes[i].entry ? 1 : 0);
    }
    g.build_label_index();
    for (const LabeledEdge& e : edges) {
      auto s = g.find(e.src);
      auto d = g.find(e.dst);
      if (!s || !d) {
        g.problems_.push_back("edge " + std::to_string(e.src) + "->" + std::to_string(e.dst) +
                              " references unknown node");
        continue;
      }
      g.edges_.push_back({*s, *d, e.blockable});
    }
    auto d = g.find(da);
    if (!d) {
      g.problems_.push_back("da " + std::to_string(da) + " is not a node");
      g.da_ = kNoNode;
    } else {
      g.da_ = *d;
    }
    g.build_adjacency();
    return g;
  }

  std::size_t node_count() const { return entry_.size(); }
  std::size_t edge_count() const { return edges_.size(); }
  NodeId da() const { return da_; }
  bool is_entry(NodeId v) const { return entry_[v] != 0; }
  const std::vector<NodeId>& entries() const { return entries_; }
  std::size_t entry_count() const { return entries_.size(); }

  const Edge& edge(EdgeId e) const { return edges_[e]; }
  std::span<const Edge> edges() const { return edges_; }
  // Out-edges sorted by (dst, id).
  std::span<const EdgeId> out_edges(NodeId v) const { return out_[v]; }
  std::span<const EdgeId> in_edges(NodeId v) const { return in_[v]; }
  std::size_t out_degree(NodeId v) const { return out_[v].size(); }
  std::size_t in_degree(NodeId v) const { return in_[v].size(); }

  Label label(NodeId v) const { return labels_[v]; }
  const std::vector<Label>& labels() const { return labels_; }
  std::optional<NodeId> find(Label l) const {
    auto it = label_index_.find(l);
    if (it == label_index_.end()) return std::nullopt;
    return it->second;
  }

  std::size_t blockable_count() const {
    return static_cast<std::size_t>(
        std::count_if(edges_.begin(), edges_.end(), [](const Edge& e) { return e.blockable; }));
  }
  std::vector<EdgeId> blockable_edges() const {
    std::vector<EdgeId> out;
    for (EdgeId e = 0; e < edges_.size(); ++e)
      if (edges_[e].blockable) out.push_back(e);
    return out;
  }

  const std::vector<std::string>& construction_problems() const { return problems_; }

 private:
  void build_label_index() {
    label_index_.clear();
    for (NodeId v = 0; v < labels_.size(); ++v) label_index_.emplace(labels_[v], v);
  }

  void build_adjacency() {
    const std::size_t n = entry_.size();
    out_.assign(n, {});
    in_.assign(n, {});
    for (EdgeId e = 0; e < edges_.size(); ++e) {
      out_[edges_[e].src].push_back(e);
      in_[edges_[e].dst].push_back(e);
    }
    for (auto& list : out_) {
      std::sort(list.begin(), list.end(), [this](EdgeId a, EdgeId b) {
        return std::pair(edges_[a].dst, a) < std::pair(edges_[b].dst, b);
      });
    }
    entries_.clear();
    for (NodeId v = 0; v < n; ++v)
      if (entry_[v]) entries_.push_back(v);
  }

  void build_index() {
    build_label_index();
    build_adjacency();
  }

  std::vector<char> entry_;
  std::vector<Edge> edges_;
  std::vector<Label> labels_;
  NodeId da_ = 0;
  std::vector<std::vector<EdgeId>> out_;
  std::vector<std::vector<EdgeId>> in_;
  std::vector<NodeId> entries_;
  std::unordered_map<Label, NodeId> label_index_;
  std::vector<std::string> problems_;
};

// ---------------------------------------------------------------------------
// Distances and the objective
// ---------------------------------------------------------------------------

// Hop distance of every node to da on G - blocked (breadth-first search over
// reversed edges). blocked is a per-edge mask; empty means nothing blocked.
inline std::vector<Distance> distances_to_da(const AttackGraph& g,
                                             const std::vector<char>& blocked = {}) {
  std::vector<Distance> dist(g.node_count(), kUnreachable);
  if (g.da() >= g.node_count()) return dist;
  std::deque<NodeId> queue{g.da()};
  dist[g.da()] = 0;
  while (!queue.empty()) {
    NodeId v = queue.front();
    queue.pop_front();
    for (EdgeId e : g.in_edges(v)) {
      if (!blocked.empty() && blocked[e]) continue;
      NodeId u = g.edge(e).src;
      if (dist[u] == kUnreachable) {
        dist[u] = dist[v] + 1;
        queue.push_back(u);
      }
    }
  }
  return dist;
}

inline std::vector<Distance> shortest_distances(const AttackGraph& g, const BlockSet& blocks) {
  return distances_to_da(g, blocks.mask(g.edge_count()));
}

// (1/s) * sum of f over entry distances; 0 when there are no entries.
inline double success_rate(const AttackGraph& g, const std::vector<Distance>& dist,
                           const SuccessFunction& f) {
  if (g.entry_count() == 0) return 0.0;
  double total = 0.0;
  for (NodeId s : g.entries()) total += f(dist[s]);
  return total / static_cast<double>(g.entry_count());
}

struct Evaluation {
  std::map<NodeId, Distance> per_entry_distance;
  double expected_success_rate = 0.0;
};

inline void check_blocks(const AttackGraph& g, const BlockSet& blocks) {
  for (EdgeId e : blocks) {
    if (e >= g.edge_count()) throw InvalidInput("block set names unknown edge " + std::to_string(e));
    if (!g.edge(e).blockable)
      throw InvalidInput("block set names unblockable edge " + std::to_string(e));
  }
}

inline Evaluation evaluate(const AttackGraph& g, const BlockSet& blocks,
                           const SuccessFunction& f = {}) {
  check_blocks(g, blocks);
  auto dist = shortest_distances(g, blocks);
  Evaluation ev;
  for (NodeId s : g.entries()) ev.per_entry_distance.emplace(s, dist[s]);
  ev.expected_success_rate = success_rate(g, dist, f);
  return ev;
}

// A defender action together with the objective it achieves.
struct Solution {
  BlockSet blocks;
  double rate = 0.0;
};

inline double evaluate_rate(const AttackGraph& g, const BlockSet& blocks,
                            const SuccessFunction& f = {}) {
  return evaluate(g, blocks, f).expected_success_rate;
}

// ---------------------------------------------------------------------------
// Validation and preprocessing
// ---------------------------------------------------------------------------

// All violated invariants, empty when the graph is a valid instance.
inline std::vector<std::string> validate(const AttackGraph& g) {
  std::vector<std::string> errors = g.construction_problems();
  const bool has_da = g.da() < g.node_count();
  if (has_da && g.is_entry(g.da())) errors.emplace_back("da is entry");
  std::set<std::pair<NodeId, NodeId>> seen;
  for (const Edge& e : g.edges()) {
    if (e.src == e.dst) errors.push_back("self-loop at node " + std::to_string(g.label(e.src)));
    if (!seen.emplace(e.src, e.dst).second)
      errors.push_back("duplicate edge (" + std::to_string(g.label(e.src)) + "," +
                       std::to_string(g.label(e.dst)) + ")");
  }
  if (g.entry_count() == 0) errors.emplace_back("no entry nodes");
  if (has_da) {
    auto dist = distances_to_da(g);
    for (NodeId v = 0; v < g.node_count(); ++v)
      if (dist[v] == kUnreachable)
        errors.push_back("node " + std::to_string(g.label(v)) + " cannot reach da");
  }
  return errors;
}

struct PreprocessResult {
  AttackGraph graph;
  // Old node index -> new node index; nullopt for removed nodes. Every
  // merged admin node maps to the new da.
  std::vector<std::optional<NodeId>> node_map;
};

// Merges the admin nodes (and the current da) into one da, drops da's
// out-edges, and prunes every node without a directed path to da. Parallel
// edges created by merging collapse into one that stays unblockable if any
// copy was unblockable. Labels are kept; the merged da keeps da's label.
inline PreprocessResult preprocess(const AttackGraph& g, std::span<const NodeId> admin_nodes) {
  if (admin_nodes.empty()) throw InvalidInput("admin node set is empty");
  const std::size_t n = g.node_count();
  std::vector<char> admin(n, 0);
  for (NodeId a : admin_nodes) {
    if (a >= n) throw InvalidInput("admin node out of range");
    admin[a] = 1;
  }
  admin[g.da()] = 1;
  const NodeId da = g.da();

  // Merge step, still on old indices.
  std::vector<Edge> merged;
  std::map<std::pair<NodeId, NodeId>, std::size_t> where;
  for (const Edge& e : g.edges()) {
    if (admin[e.src]) continue;
    NodeId dst = admin[e.dst] ? da : e.dst;
    if (dst == e.src) continue;
    auto [it, fresh] = where.emplace(std::pair(e.src, dst), merged.size());
    if (fresh)
      merged.push_back({e.src, dst, e.blockable});
    else
      merged[it->second].blockable = merged[it->second].blockable && e.blockable;
  }

  // Reverse reachability to da over the merged edges.
  std::vector<std::vector<NodeId>> preds(n);
  for (const Edge& e : merged) preds[e.dst].push_back(e.src);
  std::vector<char> keep(n, 0);
  std::deque<NodeId> queue{da};
  keep[da] = 1;
  while (!queue.empty()) {
    NodeId v = queue.front();
    queue.pop_front();
    for (NodeId u : preds[v])
      if (!keep[u] && !admin[u]) {
        keep[u] = 1;
        queue.push_back(u);
      }
  }

  PreprocessResult out;
  out.node_map.assign(n, std::nullopt);
  std::vector<char> entry;
  std::vector<Label> labels;
  for (NodeId v = 0; v < n; ++v) {
    if (!keep[v]) continue;
    out.node_map[v] = static_cast<NodeId>(labels.size());
    labels.push_back(g.label(v));
    entry.push_back(g.is_entry(v) && !admin[v] ? 1 : 0);
  }
  for (NodeId v = 0; v < n; ++v)
    if (admin[v]) out.node_map[v] = out.node_map[da];

  std::vector<Edge> edges;
  for (const Edge& e : merged) {
    if (!keep[e.src] || !keep[e.dst]) continue;
    edges.push_back({*out.node_map[e.src], *out.node_map[e.dst], e.blockable});
  }
  if (std::none_of(entry.begin(), entry.end(), [](char c) { return c != 0; }))
    throw InvalidInput("no entry node can reach da");
  out.graph = AttackGraph(std::move(entry), std::move(edges), *out.node_map[da], std::move(labels));
  return out;
}

// Deletes the listed nodes and their edges, then prunes nodes that can no
// longer reach da. Used to make a cyclic graph acyclic before running the
// tree decomposition solver.
inline PreprocessResult remove_nodes(const AttackGraph& g, std::span<const NodeId> doomed) {
  const std::size_t n = g.node_count();
  std::vector<char> drop(n, 0);
  for (NodeId v : doomed) {
    if (v >= n) throw InvalidInput("node to remove is out of range");
    if (v == g.da()) throw InvalidInput("cannot remove da");
    drop[v] = 1;
  }
  std::vector<NodeId> remap(n, kNoNode);
  std::vector<char> entry;
  std::vector<Label> labels;
  for (NodeId v = 0; v < n; ++v) {
    if (drop[v]) continue;
    remap[v] = static_cast<NodeId>(labels.size());
    labels.push_back(g.label(v));
    entry.push_back(g.is_entry(v) ? 1 : 0);
  }
  std::vector<Edge> edges;
  for (const Edge& e : g.edges())
    if (!drop[e.src] && !drop[e.dst]) edges.push_back({remap[e.src], remap[e.dst], e.blockable});
  AttackGraph reduced(std::move(entry), std::move(edges), remap[g.da()], std::move(labels));
  const NodeId da = reduced.da();
  PreprocessResult pruned = preprocess(reduced, std::span<const NodeId>(&da, 1));
  PreprocessResult out{std::move(pruned.graph), std::vector<std::optional<NodeId>>(n)};
  for (NodeId v = 0; v < n; ++v)
    if (remap[v] != kNoNode) out.node_map[v] = pruned.node_map[remap[v]];
  return out;
}

// ---------------------------------------------------------------------------
// Structure statistics
// ---------------------------------------------------------------------------

namespace detail {

// Topological order of the graph with da's out-edges ignored, or nullopt on
// a directed cycle.
inline std::optional<std::vector<NodeId>> topological_order(const AttackGraph& g) {
  const std::size_t n = g.node_count();
  std::vector<std::size_t> indeg(n, 0);
  for (const Edge& e : g.edges())
    if (e.src != g.da()) ++indeg[e.dst];
  std::vector<NodeId> order;
  order.reserve(n);
  std::deque<NodeId> ready;
  for (NodeId v = 0; v < n; ++v)
    if (indeg[v] == 0) ready.push_back(v);
  while (!ready.empty()) {
    NodeId v = ready.front();
    ready.pop_front();
    order.push_back(v);
    if (v == g.da()) continue;
    for (EdgeId e : g.out_edges(v))
      if (--indeg[g.edge(e).dst] == 0) ready.push_back(g.edge(e).dst);
  }
  if (order.size() != n) return std::nullopt;
  return order;
}

}  // namespace detail

inline bool is_acyclic(const AttackGraph& g) { return detail::topological_order(g).has_value(); }

// Longest path (in hops) from each node to da; -1 when da is unreachable.
// Throws CyclicGraph.
inline std::vector<long> longest_paths_to_da(const AttackGraph& g) {
  auto order = detail::topological_order(g);
  if (!order) throw CyclicGraph();
  std::vector<long> lp(g.node_count(), -1);
  for (auto it = order->rbegin(); it != order->rend(); ++it) {
    NodeId v = *it;
    if (v == g.da()) {
      lp[v] = 0;
      continue;
    }
    for (EdgeId e : g.out_edges(v)) {
      long next = lp[g.edge(e).dst];
      if (next >= 0) lp[v] = std::max(lp[v], next + 1);
    }
  }
  return lp;
}

// Security levels: every edge goes from a strictly lower level to a higher
// one and da sits alone on the top level. Raw level is (n-1) minus the
// longest path to any sink, rank-compressed to 0..L-1. Throws CyclicGraph.
inline std::vector<int> security_levels(const AttackGraph& g) {
  auto order = detail::topological_order(g);
  if (!order) throw CyclicGraph();
  const std::size_t n = g.node_count();
  std::vector<long> longest(n, 0);
  for (auto it = order->rbegin(); it != order->rend(); ++it) {
    NodeId v = *it;
    if (v == g.da()) continue;
    for (EdgeId e : g.out_edges(v)) longest[v] = std::max(longest[v], longest[g.edge(e).dst] + 1);
  }
  std::vector<long> raw(n);
  for (NodeId v = 0; v < n; ++v) raw[v] = static_cast<long>(n) - 1 - longest[v];
  if (g.da() < n) raw[g.da()] = static_cast<long>(n);
  std::vector<long> distinct = raw;
  std::sort(distinct.begin(), distinct.end());
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
  std::vector<int> level(n);
  for (NodeId v = 0; v < n; ++v)
    level[v] = static_cast<int>(std::lower_bound(distinct.begin(), distinct.end(), raw[v]) -
                                distinct.begin());
  return level;
}

// Nodes with two or more out-edges, ascending.
inline std::vector<NodeId> splitting_nodes(const AttackGraph& g) {
  std::vector<NodeId> out;
  for (NodeId v = 0; v < g.node_count(); ++v)
    if (g.out_degree(v) >= 2) out.push_back(v);
  return out;
}

inline std::size_t max_out_degree(const AttackGraph& g) {
  std::size_t d = 0;
  for (NodeId v = 0; v < g.node_count(); ++v) d = std::max(d, g.out_degree(v));
  return d;
}

// h = m - n + (number of weakly connected components).
inline std::size_t feedback_edge_count(const AttackGraph& g) {
  const std::size_t n = g.node_count();
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  std::size_t components = n;
  for (const Edge& e : g.edges()) {
    auto a = find(e.src), b = find(e.dst);
    if (a != b) {
      parent[a] = b;
      --components;
    }
  }
  return g.edge_count() + components - n;
}

// Longest attack path over all nodes on a DAG; n-1 as an upper bound when
// the graph is cyclic.
inline std::size_t max_attack_path_length(const AttackGraph& g) {
  if (!is_acyclic(g)) return g.node_count() == 0 ? 0 : g.node_count() - 1;
  auto lp = longest_paths_to_da(g);
  long best = 0;
  for (long v : lp) best = std::max(best, v);
  return static_cast<std::size_t>(best);
}

// Product of (d_i + 1) over splitting nodes, saturating at the max value.
inline std::uint64_t strategy_space_size(const AttackGraph& g) {
  std::uint64_t total = 1;
  for (NodeId v : splitting_nodes(g)) {
    std::uint64_t k = g.out_degree(v) + 1;
    if (total > std::numeric_limits<std::uint64_t>::max() / k)
      return std::numeric_limits<std::uint64_t>::max();
    total *= k;
  }
  return total;
}

}  // namespace adint
