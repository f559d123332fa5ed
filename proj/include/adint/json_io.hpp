#pragma once

#include <fstream>
#include <sstream>
#include <string>

#include "json.hpp"

#include "adint/attack_graph.hpp"
#include "adint/condense.hpp"

namespace adint {

using Json = nlohmann::ordered_json;

// {"da": int, "nodes": [{"id": int, "entry": bool}],
//  "edges": [{"src": int, "dst": int, "blockable": bool}]}
inline AttackGraph graph_from_json(const Json& doc) {
  try {
    std::vector<LabeledNode> nodes;
    for (const auto& node : doc.at("nodes"))
      nodes.push_back({node.at("id").get<Label>(), node.value("entry", false)});
    std::vector<LabeledEdge> edges;
    for (const auto& edge : doc.at("edges"))
      edges.push_back({edge.at("src").get<Label>(), edge.at("dst").get<Label>(),
                       edge.value("blockable", false)});
    return AttackGraph::from_labels(std::move(nodes), std::move(edges), doc.at("da").get<Label>());
  } catch (const nlohmann::json::exception& e) {
    throw InvalidInput(std::string("malformed graph JSON: ") + e.what());
  }
}

inline Json graph_to_json(const AttackGraph& g) {
  Json doc;
  doc["da"] = g.label(g.da());
  Json nodes = Json::array();
  for (NodeId v = 0; v < g.node_count(); ++v)
    nodes.push_back(Json{{"id", g.label(v)}, {"entry", g.is_entry(v)}});
  doc["nodes"] = std::move(nodes);
  Json edges = Json::array();
  for (const Edge& e : g.edges())
    edges.push_back(
        Json{{"src", g.label(e.src)}, {"dst", g.label(e.dst)}, {"blockable", e.blockable}});
  doc["edges"] = std::move(edges);
  return doc;
}

inline AttackGraph load_graph(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open " + path);
  Json doc;
  try {
    doc = Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw InvalidInput(path + ": " + e.what());
  }
  return graph_from_json(doc);
}

inline void save_graph(const AttackGraph& g, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw InvalidInput("cannot write " + path);
  out << graph_to_json(g).dump(2) << '\n';
}

// {"nodes": [{"id", "features"}], "edges": [{"from", "to", "features",
//  "path_edges"}], "route_order": {"<splitting id>": [successor ids]}}
inline Json condensed_to_json(const AttackGraph& g, const CondensedGraph& cg) {
  Json doc;
  Json nodes = Json::array();
  for (const auto& node : cg.nodes)
    nodes.push_back(Json{{"id", g.label(node.id)}, {"features", node.features}});
  doc["nodes"] = std::move(nodes);
  Json edges = Json::array();
  for (const auto& edge : cg.edges)
    edges.push_back(Json{{"from", g.label(edge.from)},
                         {"to", g.label(edge.to)},
                         {"features", edge.features},
                         {"path_edges", edge.path_edges}});
  doc["edges"] = std::move(edges);
  Json order = Json::object();
  for (const auto& [split, successors] : cg.route_order) {
    Json ids = Json::array();
    for (NodeId s : successors) ids.push_back(g.label(s));
    order[std::to_string(g.label(split))] = std::move(ids);
  }
  doc["route_order"] = std::move(order);
  return doc;
}

inline Json distance_to_json(Distance d) {
  if (d == kUnreachable) return Json(nullptr);
  return Json(d);
}

}  // namespace adint
