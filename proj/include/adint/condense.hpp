#pragma once

#include <array>
#include <map>
#include <vector>

#include "adint/attack_graph.hpp"

namespace adint {

// A maximal simple path leaving a splitting node through one successor:
// every interior node has out-degree 1, and the walk stops at the first
// splitting node or da.
struct Route {
  NodeId from = kNoNode;
  NodeId successor = kNoNode;
  // Final node of the walk; kNoNode when the walk loops through a cycle of
  // out-degree-1 nodes.
  NodeId to = kNoNode;
  std::vector<EdgeId> path;
  // True when `to` is a splitting node or da.
  bool ends_at_terminal = false;
};

inline bool is_terminal(const AttackGraph& g, NodeId v) {
  return v == g.da() || g.out_degree(v) >= 2;
}

inline Route walk_route(const AttackGraph& g, EdgeId first) {
  Route r;
  r.from = g.edge(first).src;
  r.successor = g.edge(first).dst;
  r.path.push_back(first);
  NodeId cur = r.successor;
  std::vector<char> seen(g.node_count(), 0);
  while (!is_terminal(g, cur) && g.out_degree(cur) == 1) {
    if (seen[cur]) {
      r.to = kNoNode;
      return r;
    }
    seen[cur] = 1;
    EdgeId next = g.out_edges(cur)[0];
    r.path.push_back(next);
    cur = g.edge(next).dst;
  }
  r.to = cur;
  r.ends_at_terminal = is_terminal(g, cur);
  return r;
}

// Routes for every splitting node, outer index parallel to
// splitting_nodes(g), inner index in ascending successor order.
inline std::vector<std::vector<Route>> simple_routes(const AttackGraph& g) {
  std::vector<std::vector<Route>> all;
  for (NodeId u : splitting_nodes(g)) {
    std::vector<Route> routes;
    for (EdgeId e : g.out_edges(u)) routes.push_back(walk_route(g, e));
    all.push_back(std::move(routes));
  }
  return all;
}

// Security levels that also work on cyclic graphs: every strongly connected
// component shares one level, computed on the component DAG.
inline std::vector<int> component_levels(const AttackGraph& g) {
  if (is_acyclic(g)) return security_levels(g);
  const std::size_t n = g.node_count();
  // Iterative Kosaraju.
  std::vector<NodeId> finish;
  std::vector<char> visited(n, 0);
  for (NodeId root = 0; root < n; ++root) {
    if (visited[root]) continue;
    std::vector<std::pair<NodeId, std::size_t>> stack{{root, 0}};
    visited[root] = 1;
    while (!stack.empty()) {
      auto& [v, i] = stack.back();
      auto outs = g.out_edges(v);
      if (i < outs.size()) {
        NodeId w = g.edge(outs[i++]).dst;
        if (!visited[w]) {
          visited[w] = 1;
          stack.push_back({w, 0});
        }
      } else {
        finish.push_back(v);
        stack.pop_back();
      }
    }
  }
  std::vector<NodeId> comp(n, kNoNode);
  NodeId comps = 0;
  for (auto it = finish.rbegin(); it != finish.rend(); ++it) {
    if (comp[*it] != kNoNode) continue;
    std::vector<NodeId> stack{*it};
    comp[*it] = comps;
    while (!stack.empty()) {
      NodeId v = stack.back();
      stack.pop_back();
      for (EdgeId e : g.in_edges(v)) {
        NodeId u = g.edge(e).src;
        if (comp[u] == kNoNode) {
          comp[u] = comps;
          stack.push_back(u);
        }
      }
    }
    ++comps;
  }
  std::vector<char> entry(comps, 0);
  std::vector<Edge> dag_edges;
  std::set<std::pair<NodeId, NodeId>> seen;
  for (const Edge& e : g.edges()) {
    NodeId a = comp[e.src], b = comp[e.dst];
    if (a != b && e.src != g.da() && seen.emplace(a, b).second) dag_edges.push_back({a, b, false});
  }
  AttackGraph dag(std::move(entry), std::move(dag_edges), comp[g.da()]);
  auto comp_level = security_levels(dag);
  std::vector<int> level(n);
  for (NodeId v = 0; v < n; ++v) level[v] = comp_level[comp[v]];
  return level;
}

inline constexpr std::size_t kNodeFeatureCount = 7;
inline constexpr std::size_t kEdgeFeatureCount = 6;

struct CondensedNode {
  NodeId id = kNoNode;
  // security level, in degree, out degree, entries that can reach the node,
  // distance to da with nothing blocked, distance to da with every blockable
  // edge blocked, entry flag. Unreachable distances are encoded as 2n.
  std::array<double, kNodeFeatureCount> features{};
};

struct CondensedEdge {
  NodeId from = kNoNode;
  NodeId to = kNoNode;
  // first node of the simple path, path length, blockable edges on it,
  // security level of the head of the blockable edge closest to da (-1 when
  // none), entry nodes strictly inside the path, direction (0 out-going at
  // `from`, 1 the mirrored incoming view).
  std::array<double, kEdgeFeatureCount> features{};
  std::vector<EdgeId> path_edges;
};

struct CondensedGraph {
  std::vector<CondensedNode> nodes;
  // Each route appears twice: the out-going view followed by its mirror.
  std::vector<CondensedEdge> edges;
  // Splitting node -> successors in route-index order.
  std::map<NodeId, std::vector<NodeId>> route_order;

  std::vector<CondensedEdge> outgoing() const {
    std::vector<CondensedEdge> out;
    for (const auto& e : edges)
      if (e.features[5] == 0.0) out.push_back(e);
    return out;
  }
};

inline CondensedGraph condense(const AttackGraph& g) {
  const std::size_t n = g.node_count();
  const double inf = 2.0 * static_cast<double>(n);
  auto levels = component_levels(g);
  auto open_dist = distances_to_da(g);
  std::vector<char> all_blocked(g.edge_count(), 0);
  for (EdgeId e = 0; e < g.edge_count(); ++e) all_blocked[e] = g.edge(e).blockable ? 1 : 0;
  auto closed_dist = distances_to_da(g, all_blocked);
  auto as_feature = [inf](Distance d) { return d == kUnreachable ? inf : static_cast<double>(d); };

  auto entries_reaching = [&](NodeId target) {
    std::vector<char> seen(n, 0);
    std::vector<NodeId> stack{target};
    seen[target] = 1;
    std::size_t count = 0;
    while (!stack.empty()) {
      NodeId v = stack.back();
      stack.pop_back();
      if (g.is_entry(v)) ++count;
      for (EdgeId e : g.in_edges(v)) {
        NodeId u = g.edge(e).src;
        if (!seen[u]) {
          seen[u] = 1;
          stack.push_back(u);
        }
      }
    }
    return count;
  };

  CondensedGraph cg;
  auto splits = splitting_nodes(g);
  std::vector<NodeId> members = splits;
  if (std::find(members.begin(), members.end(), g.da()) == members.end()) members.push_back(g.da());
  std::sort(members.begin(), members.end());
  for (NodeId v : members) {
    CondensedNode node;
    node.id = v;
    node.features = {static_cast<double>(levels[v]),
                     static_cast<double>(g.in_degree(v)),
                     static_cast<double>(g.out_degree(v)),
                     static_cast<double>(entries_reaching(v)),
                     as_feature(open_dist[v]),
                     as_feature(closed_dist[v]),
                     g.is_entry(v) ? 1.0 : 0.0};
    cg.nodes.push_back(node);
  }

  auto routes = simple_routes(g);
  for (std::size_t i = 0; i < splits.size(); ++i) {
    auto& order = cg.route_order[splits[i]];
    for (const Route& r : routes[i]) {
      order.push_back(r.successor);
      if (!r.ends_at_terminal) continue;
      double blockable = 0;
      double head_level = -1;
      double inner_entries = 0;
      for (EdgeId e : r.path) {
        if (g.edge(e).blockable) {
          ++blockable;
          head_level = levels[g.edge(e).dst];
        }
        NodeId head = g.edge(e).dst;
        if (head != r.to && g.is_entry(head)) ++inner_entries;
      }
      CondensedEdge out;
      out.from = r.from;
      out.to = r.to;
      out.path_edges = r.path;
      out.features = {static_cast<double>(g.label(r.from)), static_cast<double>(r.path.size()),
                      blockable, head_level, inner_entries, 0.0};
      CondensedEdge mirror = out;
      std::swap(mirror.from, mirror.to);
      mirror.features[5] = 1.0;
      cg.edges.push_back(std::move(out));
      cg.edges.push_back(std::move(mirror));
    }
  }
  return cg;
}

}  // namespace adint
