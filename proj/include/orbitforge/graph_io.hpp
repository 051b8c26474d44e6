// Copyright 2026 The Orbitforge Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "orbitforge/errors.hpp"
#include "orbitforge/graph.hpp"

namespace orbitforge {

/// Canonical graph document: {"n": int, "edges": [[head,tail],...],
/// "labels": [[cluster,index],...] | null}. Field order is fixed.
inline nlohmann::ordered_json graph_to_json(const DirectedGraph& g) {
  nlohmann::ordered_json j;
  j["n"] = g.vertex_count();
  auto edges = nlohmann::ordered_json::array();
  for (const Edge& e : g.edges()) {
    edges.push_back({e.head, e.tail});
  }
  j["edges"] = std::move(edges);
  if (g.labels()) {
    auto labels = nlohmann::ordered_json::array();
    for (const VertexLabel& l : *g.labels()) {
      labels.push_back({l.cluster, l.index});
    }
    j["labels"] = std::move(labels);
  } else {
    j["labels"] = nullptr;
  }
  return j;
}

inline DirectedGraph graph_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("n") || !j.contains("edges"))
    throw ValidationError("graph document must contain \"n\" and \"edges\"");
  if (!j["n"].is_number_integer())
    throw ValidationError("\"n\" must be an integer");
  const int n = j["n"].get<int>();
  std::vector<Edge> edges;
  if (!j["edges"].is_array())
    throw ValidationError("\"edges\" must be an array");
  for (const auto& e : j["edges"]) {
    if (!e.is_array() || e.size() != 2 || !e[0].is_number_integer() ||
        !e[1].is_number_integer())
      throw ValidationError("each edge must be an integer [head, tail] pair");
    edges.push_back(Edge{e[0].get<int>(), e[1].get<int>()});
  }
  std::optional<std::vector<VertexLabel>> labels;
  if (j.contains("labels") && !j["labels"].is_null()) {
    if (!j["labels"].is_array())
      throw ValidationError("\"labels\" must be an array or null");
    labels.emplace();
    for (const auto& l : j["labels"]) {
      if (!l.is_array() || l.size() != 2 || !l[0].is_number_integer() ||
          !l[1].is_number_integer())
        throw ValidationError("each label must be an integer [cluster, index] pair");
      labels->push_back(VertexLabel{l[0].get<int>(), l[1].get<int>()});
    }
  }
  return DirectedGraph(n, std::move(edges), std::move(labels));
}

/// Single-line canonical serialization, newline-terminated. Parsing the
/// result and serializing again reproduces the bytes exactly.
inline std::string serialize_graph(const DirectedGraph& g) {
  return graph_to_json(g).dump() + "\n";
}

inline DirectedGraph parse_graph(std::string_view text) {
  nlohmann::json j = nlohmann::json::parse(text, nullptr, false);
  if (j.is_discarded()) throw ValidationError("graph document is not valid JSON");
  return graph_from_json(j);
}

inline std::string vertex_name(const DirectedGraph& g, int v) {
  if (g.labels()) {
    const VertexLabel& l = (*g.labels())[static_cast<std::size_t>(v)];
    return "v_" + std::to_string(l.cluster) + "_" + std::to_string(l.index);
  }
  return "v" + std::to_string(v);
}

/// Graphviz export. Labeled vertices are filled from a categorical
/// colorscheme so cluster membership is visible at a glance.
inline std::string to_dot(const DirectedGraph& g) {
  std::ostringstream os;
  os << "digraph G {\n";
  for (int v = 0; v < g.vertex_count(); ++v) {
    os << "  " << vertex_name(g, v);
    if (g.labels()) {
      const VertexLabel& l = (*g.labels())[static_cast<std::size_t>(v)];
      os << " [colorscheme=set312, style=filled, fillcolor="
         << (l.cluster % 12 + 1) << "]";
    }
    os << ";\n";
  }
  for (const Edge& e : g.edges()) {
    os << "  " << vertex_name(g, e.head) << " -> " << vertex_name(g, e.tail)
       << ";\n";
  }
  os << "}\n";
  return os.str();
}

}  // namespace orbitforge
