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
#include <limits>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "orbitforge/bounds.hpp"
#include "orbitforge/cluster_spec.hpp"
#include "orbitforge/errors.hpp"
#include "orbitforge/graph.hpp"

namespace orbitforge {

/// Edge count the builder will produce for this spec and path: lcm of each
/// consecutive cluster-size pair along the path, plus a cycle on the
/// smallest cluster when it has at least two vertices.
inline long long predicted_edge_count(const ClusterSpec& spec,
                                      const PathOrder& path) {
  if (path.cluster_count() != spec.cluster_count())
    throw ValidationError("path length must equal cluster count");
  long long total = 0;
  const auto& order = path.order();
  for (std::size_t i = 0; i + 1 < order.size(); ++i)
    total = checked_add(total,
                        checked_lcm(spec.size(order[i]), spec.size(order[i + 1])));
  const long long min_r = spec.size(spec.min_cluster());
  if (min_r >= 2) total = checked_add(total, min_r);
  return total;
}

/// Builds a labeled oriented graph whose automorphism orbits are exactly
/// the clusters of `spec`. Vertices are grouped per cluster in spec order;
/// vertex (j, p) sits at offset(j) + p.
///
/// Between consecutive clusters a, b on the path the builder connects
/// (a, p mod r_a) -> (b, p mod r_b) for p = 0..lcm(r_a, r_b)-1; these pairs
/// are distinct by the Chinese remainder theorem. A directed cycle is added
/// on the smallest cluster (ties to the lowest index) when its size is at
/// least 2, which pins that cluster's orbit down to single rotations.
inline DirectedGraph build_os_graph(const ClusterSpec& spec,
                                    const PathOrder& path) {
  if (path.cluster_count() != spec.cluster_count())
    throw ValidationError("path length must equal cluster count");
  if (spec.total_vertices() > std::numeric_limits<int>::max())
    throw CapacityError("cluster sizes sum beyond vertex index range");

  const int n = static_cast<int>(spec.total_vertices());
  const auto& offsets = spec.offsets();
  const auto vertex_at = [&](int cluster, long long residue) {
    return static_cast<int>(offsets[static_cast<std::size_t>(cluster)] + residue);
  };

  std::vector<Edge> edges;
  edges.reserve(static_cast<std::size_t>(
      std::min<long long>(predicted_edge_count(spec, path),
                          std::numeric_limits<int>::max())));
  const auto& order = path.order();
  for (std::size_t i = 0; i + 1 < order.size(); ++i) {
    const int a = order[i];
    const int b = order[i + 1];
    const long long span = checked_lcm(spec.size(a), spec.size(b));
    for (long long p = 0; p < span; ++p)
      edges.push_back(
          {vertex_at(a, p % spec.size(a)), vertex_at(b, p % spec.size(b))});
  }

  const int pivot = spec.min_cluster();
  const long long pivot_size = spec.size(pivot);
  if (pivot_size >= 2)
    for (long long p = 0; p < pivot_size; ++p)
      edges.push_back(
          {vertex_at(pivot, p), vertex_at(pivot, (p + 1) % pivot_size)});

  std::vector<VertexLabel> labels(static_cast<std::size_t>(n));
  for (int j = 0; j < spec.cluster_count(); ++j)
    for (long long p = 0; p < spec.size(j); ++p)
      labels[static_cast<std::size_t>(vertex_at(j, p))] = {j,
                                                           static_cast<int>(p)};

  return DirectedGraph(n, std::move(edges), std::move(labels));
}

inline DirectedGraph build_os_graph(const ClusterSpec& spec) {
  return build_os_graph(spec, PathOrder::identity(spec.cluster_count()));
}

enum class CertificateKind { equal_sizes, divisibility_chain, bounded_sizes };

/// Edge-count guarantee for a recognized spec family. When `exact` is true
/// the builder under `witness_path` emits exactly `edge_bound` edges;
/// otherwise `edge_bound` is only an upper bound on that count.
struct EdgeCountCertificate {
  CertificateKind kind = CertificateKind::bounded_sizes;
  long long edge_bound = 0;
  bool exact = false;
  bool fewer_impossible = false;
  PathOrder witness_path;
};

namespace detail {

/// Cluster indices sorted ascending by (size, index).
inline PathOrder sorted_by_size_path(const ClusterSpec& spec) {
  std::vector<int> order(static_cast<std::size_t>(spec.cluster_count()));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return spec.size(a) < spec.size(b); });
  return PathOrder(std::move(order));
}

}  // namespace detail

/// Edge bound of the bounded_sizes family for an explicit cap q >= max size:
/// n plus the square pyramidal sum (q-1)q(2q-1)/6 plus q.
inline long long bounded_sizes_edge_bound(const ClusterSpec& spec, long long q) {
  const auto& sizes = spec.sizes();
  if (q < *std::max_element(sizes.begin(), sizes.end()))
    throw ValidationError("cap must dominate every cluster size");
  const long long pyramidal =
      checked_mul(checked_mul(q - 1, q), checked_add(checked_mul(2, q), -1)) / 6;
  return checked_add(spec.total_vertices(), checked_add(pyramidal, q));
}

/// Classifies the spec against the known exact-count families and returns
/// every certificate that applies, strongest first.
///
/// equal_sizes: all sizes equal to some r > 1; exactly n edges are
/// achievable and no weakly connected graph with these orbit sizes can have
/// fewer than n edges.
///
/// divisibility_chain: k >= 2 and the sizes, sorted ascending, each divide
/// the next. The lcm terms along the sorted path telescope to n minus the
/// smallest size, so the builder emits exactly n edges when the smallest
/// size is at least 2 and exactly n - 1 edges when it is 1 (a singleton
/// cluster gets no cycle). The certificate reports the count the builder
/// actually achieves.
///
/// bounded_sizes: always applies with q = max size; the sorted path keeps
/// the total within n + (q-1)q(2q-1)/6 + q.
inline std::vector<EdgeCountCertificate> corollary_edge_counts(
    const ClusterSpec& spec) {
  std::vector<EdgeCountCertificate> certs;
  const int k = spec.cluster_count();
  const long long n = spec.total_vertices();
  const auto& sizes = spec.sizes();
  const PathOrder sorted_path = detail::sorted_by_size_path(spec);

  const bool all_equal =
      std::all_of(sizes.begin(), sizes.end(),
                  [&](long long r) { return r == sizes.front(); });
  if (all_equal && sizes.front() > 1) {
    EdgeCountCertificate cert;
    cert.kind = CertificateKind::equal_sizes;
    cert.edge_bound = n;
    cert.exact = true;
    cert.fewer_impossible = true;
    cert.witness_path = PathOrder::identity(k);
    certs.push_back(std::move(cert));
  }

  if (k >= 2) {
    const auto sorted_sizes = spec.sorted_sizes();
    bool chain = true;
    for (std::size_t i = 0; i + 1 < sorted_sizes.size(); ++i)
      if (sorted_sizes[i + 1] % sorted_sizes[i] != 0) {
        chain = false;
        break;
      }
    if (chain) {
      EdgeCountCertificate cert;
      cert.kind = CertificateKind::divisibility_chain;
      cert.edge_bound = sorted_sizes.front() >= 2 ? n : n - 1;
      cert.exact = true;
      cert.fewer_impossible = false;
      cert.witness_path = sorted_path;
      certs.push_back(std::move(cert));
    }
  }

  {
    const long long q = *std::max_element(sizes.begin(), sizes.end());
    EdgeCountCertificate cert;
    cert.kind = CertificateKind::bounded_sizes;
    cert.edge_bound = bounded_sizes_edge_bound(spec, q);
    cert.exact = false;
    cert.fewer_impossible = false;
    cert.witness_path = sorted_path;
    certs.push_back(std::move(cert));
  }

  return certs;
}

}  // namespace orbitforge
