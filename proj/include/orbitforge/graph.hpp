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

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "orbitforge/errors.hpp"

namespace orbitforge {

/// Oriented edge head -> tail. The head row of the incidence matrix
/// carries +1, the tail row -1; out-degree counts edges leaving the head.
struct Edge {
  int head{};
  int tail{};

  friend bool operator==(const Edge&, const Edge&) = default;
};

/// Cluster coordinate (j, p) of a synthesized vertex: p-th vertex of
/// cluster j, both 0-based.
struct VertexLabel {
  int cluster{};
  int index{};

  friend bool operator==(const VertexLabel&, const VertexLabel&) = default;
};

/// Per-vertex degree pair.
struct VertexDegrees {
  int in{};
  int out{};

  friend bool operator==(const VertexDegrees&, const VertexDegrees&) = default;
};

/// Immutable oriented graph. No self-loops, no repeated oriented edges;
/// antiparallel pairs are allowed. Adjacency indices are precomputed at
/// construction, so all queries are const and thread-safe.
class DirectedGraph {
 public:
  DirectedGraph(int vertex_count, std::vector<Edge> edges,
                std::optional<std::vector<VertexLabel>> labels = std::nullopt)
      : n_(vertex_count),
        edges_(std::move(edges)),
        labels_(std::move(labels)),
        out_(static_cast<std::size_t>(std::max(vertex_count, 0))),
        in_(static_cast<std::size_t>(std::max(vertex_count, 0))) {
    if (n_ < 0) throw ValidationError("vertex count must be non-negative");
    edge_keys_.reserve(edges_.size() * 2);
    for (const Edge& e : edges_) {
      if (e.head < 0 || e.head >= n_ || e.tail < 0 || e.tail >= n_)
        throw ValidationError("edge endpoint out of range [0, n)");
      if (e.head == e.tail) throw ValidationError("self-loops are not allowed");
      if (!edge_keys_.insert(key(e.head, e.tail)).second)
        throw ValidationError("duplicate oriented edge (" +
                              std::to_string(e.head) + ", " +
                              std::to_string(e.tail) + ")");
      out_[static_cast<std::size_t>(e.head)].push_back(e.tail);
      in_[static_cast<std::size_t>(e.tail)].push_back(e.head);
    }
    for (auto& a : out_) std::sort(a.begin(), a.end());
    for (auto& a : in_) std::sort(a.begin(), a.end());
    if (labels_) {
      if (static_cast<int>(labels_->size()) != n_)
        throw ValidationError("label list length must equal vertex count");
      for (const VertexLabel& l : *labels_)
        if (l.cluster < 0 || l.index < 0)
          throw ValidationError("vertex labels must be non-negative");
    }
  }

  int vertex_count() const noexcept { return n_; }
  int edge_count() const noexcept { return static_cast<int>(edges_.size()); }
  const std::vector<Edge>& edges() const noexcept { return edges_; }

  const std::optional<std::vector<VertexLabel>>& labels() const noexcept {
    return labels_;
  }

  bool has_edge(int head, int tail) const {
    return edge_keys_.count(key(head, tail)) != 0;
  }

  /// Out-neighbors of v, sorted ascending.
  const std::vector<int>& out_neighbors(int v) const {
    return out_[static_cast<std::size_t>(v)];
  }

  /// In-neighbors of v, sorted ascending.
  const std::vector<int>& in_neighbors(int v) const {
    return in_[static_cast<std::size_t>(v)];
  }

 private:
  static std::uint64_t key(int head, int tail) {
    return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(head))
            << 32) |
           static_cast<std::uint32_t>(tail);
  }

  int n_;
  std::vector<Edge> edges_;
  std::optional<std::vector<VertexLabel>> labels_;
  std::vector<std::vector<int>> out_;
  std::vector<std::vector<int>> in_;
  std::unordered_set<std::uint64_t> edge_keys_;
};

/// Dense vertices-by-edges incidence matrix with entries in {-1, 0, +1}.
/// Column k of edge (i, j) holds +1 at row i and -1 at row j, so
/// zeta = E^T y takes output differences and u = -E mu pushes controller
/// outputs back onto the endpoints.
class IncidenceMatrix {
 public:
  explicit IncidenceMatrix(const DirectedGraph& g)
      : rows_(g.vertex_count()),
        cols_(g.edge_count()),
        data_(static_cast<std::size_t>(rows_) * static_cast<std::size_t>(cols_),
              0) {
    for (int k = 0; k < cols_; ++k) {
      const Edge& e = g.edges()[static_cast<std::size_t>(k)];
      at(e.head, k) = +1;
      at(e.tail, k) = -1;
    }
  }

  int rows() const noexcept { return rows_; }
  int cols() const noexcept { return cols_; }

  int operator()(int r, int c) const {
    return data_[static_cast<std::size_t>(r) * static_cast<std::size_t>(cols_) +
                 static_cast<std::size_t>(c)];
  }

 private:
  int& at(int r, int c) {
    return data_[static_cast<std::size_t>(r) * static_cast<std::size_t>(cols_) +
                 static_cast<std::size_t>(c)];
  }

  int rows_;
  int cols_;
  std::vector<int> data_;
};

inline IncidenceMatrix incidence_matrix(const DirectedGraph& g) {
  return IncidenceMatrix(g);
}

/// True iff the undirected shadow of g is connected. The empty graph and
/// the single vertex count as connected.
inline bool is_weakly_connected(const DirectedGraph& g) {
  const int n = g.vertex_count();
  if (n <= 1) return true;
  std::vector<char> seen(static_cast<std::size_t>(n), 0);
  std::vector<int> stack{0};
  seen[0] = 1;
  int reached = 1;
  while (!stack.empty()) {
    const int v = stack.back();
    stack.pop_back();
    for (const auto* adj : {&g.out_neighbors(v), &g.in_neighbors(v)}) {
      for (int w : *adj) {
        if (!seen[static_cast<std::size_t>(w)]) {
          seen[static_cast<std::size_t>(w)] = 1;
          ++reached;
          stack.push_back(w);
        }
      }
    }
  }
  return reached == n;
}

/// (in-degree, out-degree) for every vertex.
inline std::vector<VertexDegrees> degree_profile(const DirectedGraph& g) {
  std::vector<VertexDegrees> deg(
      static_cast<std::size_t>(g.vertex_count()));
  for (int v = 0; v < g.vertex_count(); ++v) {
    deg[static_cast<std::size_t>(v)].in =
        static_cast<int>(g.in_neighbors(v).size());
    deg[static_cast<std::size_t>(v)].out =
        static_cast<int>(g.out_neighbors(v).size());
  }
  return deg;
}

}  // namespace orbitforge
