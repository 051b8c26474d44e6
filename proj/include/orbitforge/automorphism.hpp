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
#include <tuple>
#include <utility>
#include <vector>

#include "orbitforge/cluster_spec.hpp"
#include "orbitforge/errors.hpp"
#include "orbitforge/graph.hpp"
#include "orbitforge/partition.hpp"

namespace orbitforge {

/// Vertex permutation stored as an image array: i maps to image[i].
class Permutation {
 public:
  Permutation() = default;

  explicit Permutation(std::vector<int> image) : image_(std::move(image)) {
    std::vector<char> seen(image_.size(), 0);
    for (int y : image_) {
      if (y < 0 || y >= static_cast<int>(image_.size()) ||
          seen[static_cast<std::size_t>(y)])
        throw ValidationError("permutation image must be a bijection on 0..n-1");
      seen[static_cast<std::size_t>(y)] = 1;
    }
  }

  static Permutation identity(int n) {
    std::vector<int> image(static_cast<std::size_t>(n));
    std::iota(image.begin(), image.end(), 0);
    return Permutation(std::move(image));
  }

  int size() const noexcept { return static_cast<int>(image_.size()); }
  int operator()(int i) const { return image_[static_cast<std::size_t>(i)]; }
  const std::vector<int>& image() const noexcept { return image_; }

  friend bool operator==(const Permutation&, const Permutation&) = default;

 private:
  std::vector<int> image_;
};

namespace detail {

/// Setwise edge preservation for a raw image array already known to be a
/// bijection. Injectivity makes forward containment sufficient.
inline bool preserves_edges(const DirectedGraph& g,
                            const std::vector<int>& image) {
  for (const Edge& e : g.edges())
    if (!g.has_edge(image[static_cast<std::size_t>(e.head)],
                    image[static_cast<std::size_t>(e.tail)]))
      return false;
  return true;
}

}  // namespace detail

/// True iff psi maps every oriented edge onto an oriented edge.
inline bool is_automorphism(const DirectedGraph& g, const Permutation& psi) {
  if (psi.size() != g.vertex_count())
    throw ValidationError("permutation length must equal vertex count");
  return detail::preserves_edges(g, psi.image());
}

constexpr int kMaxBruteforceVertices = 10;

/// Exact orbit partition by filtering all n! permutations. Usable only as
/// a small-n oracle.
inline OrbitPartition orbits_bruteforce(const DirectedGraph& g) {
  const int n = g.vertex_count();
  if (n > kMaxBruteforceVertices)
    throw CapacityError("brute-force orbit enumeration supports at most " +
                        std::to_string(kMaxBruteforceVertices) + " vertices");
  std::vector<int> root(static_cast<std::size_t>(n));
  std::iota(root.begin(), root.end(), 0);
  const auto find = [&](int x) {
    while (root[static_cast<std::size_t>(x)] != x)
      x = root[static_cast<std::size_t>(x)] =
          root[static_cast<std::size_t>(root[static_cast<std::size_t>(x)])];
    return x;
  };
  std::vector<int> image(static_cast<std::size_t>(n));
  std::iota(image.begin(), image.end(), 0);
  do {
    if (!detail::preserves_edges(g, image)) continue;
    for (int v = 0; v < n; ++v) {
      const int a = find(v);
      const int b = find(image[static_cast<std::size_t>(v)]);
      if (a != b) root[static_cast<std::size_t>(std::max(a, b))] = std::min(a, b);
    }
  } while (std::next_permutation(image.begin(), image.end()));
  std::vector<int> ids(static_cast<std::size_t>(n));
  for (int v = 0; v < n; ++v) ids[static_cast<std::size_t>(v)] = find(v);
  return OrbitPartition::from_ids(ids);
}

namespace detail {

/// One refinement pass splits classes by the multiset of neighbor colors
/// over out- and in-neighborhoods separately; iterated to a fixpoint this
/// can only over-group orbits, never split one. Rank ids are canonical
/// (sorted key order), so color-isomorphic graphs get matching ids.
inline std::vector<int> refine_colors(const DirectedGraph& g,
                                      std::vector<int> color) {
  const int n = g.vertex_count();
  if (n == 0) return color;
  using Key = std::tuple<int, std::vector<int>, std::vector<int>>;
  int classes = 0;
  for (;;) {
    std::vector<Key> keys(static_cast<std::size_t>(n));
    for (int v = 0; v < n; ++v) {
      Key& k = keys[static_cast<std::size_t>(v)];
      std::get<0>(k) = color[static_cast<std::size_t>(v)];
      auto& out = std::get<1>(k);
      auto& in = std::get<2>(k);
      for (int w : g.out_neighbors(v))
        out.push_back(color[static_cast<std::size_t>(w)]);
      for (int w : g.in_neighbors(v))
        in.push_back(color[static_cast<std::size_t>(w)]);
      std::sort(out.begin(), out.end());
      std::sort(in.begin(), in.end());
    }
    std::vector<int> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
      return keys[static_cast<std::size_t>(a)] < keys[static_cast<std::size_t>(b)];
    });
    int next = 0;
    std::vector<int> recolored(static_cast<std::size_t>(n));
    for (std::size_t i = 0; i < order.size(); ++i) {
      if (i > 0 && !(keys[static_cast<std::size_t>(order[i - 1])] ==
                     keys[static_cast<std::size_t>(order[i])]))
        ++next;
      recolored[static_cast<std::size_t>(order[i])] = next;
    }
    const int new_classes = next + 1;
    color.swap(recolored);
    if (new_classes == classes) return color;
    classes = new_classes;
  }
}

/// Degree-seeded stable coloring; orbits always refine these classes.
inline std::vector<int> stable_degree_colors(const DirectedGraph& g) {
  const auto degrees = degree_profile(g);
  std::vector<int> order(degrees.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    const auto& da = degrees[static_cast<std::size_t>(a)];
    const auto& db = degrees[static_cast<std::size_t>(b)];
    return std::tie(da.in, da.out) < std::tie(db.in, db.out);
  });
  std::vector<int> seed(degrees.size());
  int next = 0;
  for (std::size_t i = 0; i < order.size(); ++i) {
    if (i > 0) {
      const auto& prev = degrees[static_cast<std::size_t>(order[i - 1])];
      const auto& cur = degrees[static_cast<std::size_t>(order[i])];
      if (std::tie(prev.in, prev.out) != std::tie(cur.in, cur.out)) ++next;
    }
    seed[static_cast<std::size_t>(order[i])] = next;
  }
  return refine_colors(g, std::move(seed));
}

inline std::vector<int> class_size_histogram(const std::vector<int>& color) {
  int classes = 0;
  for (int c : color) classes = std::max(classes, c + 1);
  std::vector<int> hist(static_cast<std::size_t>(classes), 0);
  for (int c : color) ++hist[static_cast<std::size_t>(c)];
  return hist;
}

/// Backtracking search for an automorphism sending source to target.
/// Both sides get the chosen endpoint individualized and re-refined; the
/// canonical rank ids then restrict candidate images to matching classes.
/// Returns the image array of a witness, or nothing if no automorphism
/// maps source to target.
inline std::optional<std::vector<int>> find_mapping(
    const DirectedGraph& g, const std::vector<int>& stable, int source,
    int target) {
  const int n = g.vertex_count();
  if (stable[static_cast<std::size_t>(source)] !=
      stable[static_cast<std::size_t>(target)])
    return std::nullopt;

  int fresh = 0;
  for (int c : stable) fresh = std::max(fresh, c + 1);
  std::vector<int> seed_s = stable;
  std::vector<int> seed_t = stable;
  seed_s[static_cast<std::size_t>(source)] = fresh;
  seed_t[static_cast<std::size_t>(target)] = fresh;
  const std::vector<int> color_s = refine_colors(g, std::move(seed_s));
  const std::vector<int> color_t = refine_colors(g, std::move(seed_t));
  if (class_size_histogram(color_s) != class_size_histogram(color_t))
    return std::nullopt;

  std::vector<std::vector<int>> targets_by_color(
      class_size_histogram(color_t).size());
  for (int v = 0; v < n; ++v)
    targets_by_color[static_cast<std::size_t>(color_t[static_cast<std::size_t>(v)])]
        .push_back(v);

  std::vector<int> image(static_cast<std::size_t>(n), -1);
  std::vector<char> used(static_cast<std::size_t>(n), 0);
  std::vector<std::pair<int, int>> assigned;
  assigned.reserve(static_cast<std::size_t>(n));

  const auto consistent = [&](int x, int y) {
    for (const auto& [px, py] : assigned) {
      if (g.has_edge(x, px) != g.has_edge(y, py)) return false;
      if (g.has_edge(px, x) != g.has_edge(py, y)) return false;
    }
    return true;
  };

  const auto candidate_count = [&](int x) {
    int count = 0;
    for (int y :
         targets_by_color[static_cast<std::size_t>(color_s[static_cast<std::size_t>(x)])])
      if (!used[static_cast<std::size_t>(y)]) ++count;
    return count;
  };

  const auto search = [&](const auto& self) -> bool {
    int pick = -1;
    int pick_count = n + 1;
    for (int x = 0; x < n; ++x) {
      if (image[static_cast<std::size_t>(x)] != -1) continue;
      const int count = candidate_count(x);
      if (count < pick_count) {
        pick = x;
        pick_count = count;
        if (count <= 1) break;
      }
    }
    if (pick == -1) return true;
    if (pick_count == 0) return false;
    for (int y : targets_by_color[static_cast<std::size_t>(
             color_s[static_cast<std::size_t>(pick)])]) {
      if (used[static_cast<std::size_t>(y)]) continue;
      if (!consistent(pick, y)) continue;
      image[static_cast<std::size_t>(pick)] = y;
      used[static_cast<std::size_t>(y)] = 1;
      assigned.emplace_back(pick, y);
      if (self(self)) return true;
      assigned.pop_back();
      used[static_cast<std::size_t>(y)] = 0;
      image[static_cast<std::size_t>(pick)] = -1;
    }
    return false;
  };

  image[static_cast<std::size_t>(source)] = target;
  used[static_cast<std::size_t>(target)] = 1;
  assigned.emplace_back(source, target);
  if (!search(search)) return std::nullopt;
  if (!preserves_edges(g, image)) return std::nullopt;
  return image;
}

}  // namespace detail

struct AutomorphismSearchResult {
  OrbitPartition orbits;
  std::vector<Permutation> generators;
};

/// Orbit partition plus the automorphisms discovered on the way. Orbits are
/// the connected components of the union of generator cycles; the search
/// settles every same-color vertex pair either by a witness automorphism or
/// by an exhaustive refusal, so the partition is exact, not approximate.
inline AutomorphismSearchResult find_orbit_generators(const DirectedGraph& g) {
  const int n = g.vertex_count();
  AutomorphismSearchResult result;
  if (n == 0) return result;

  const std::vector<int> stable = detail::stable_degree_colors(g);
  std::vector<int> root(static_cast<std::size_t>(n));
  std::iota(root.begin(), root.end(), 0);
  const auto find = [&](int x) {
    while (root[static_cast<std::size_t>(x)] != x)
      x = root[static_cast<std::size_t>(x)] =
          root[static_cast<std::size_t>(root[static_cast<std::size_t>(x)])];
    return x;
  };
  const auto unite = [&](int a, int b) {
    a = find(a);
    b = find(b);
    if (a != b) root[static_cast<std::size_t>(std::max(a, b))] = std::min(a, b);
  };

  int classes = 0;
  for (int c : stable) classes = std::max(classes, c + 1);
  std::vector<std::vector<int>> members(static_cast<std::size_t>(classes));
  for (int v = 0; v < n; ++v)
    members[static_cast<std::size_t>(stable[static_cast<std::size_t>(v)])]
        .push_back(v);

  // Smallest classes first keeps early searches cheap and the scan order
  // deterministic.
  std::sort(members.begin(), members.end(), [](const auto& a, const auto& b) {
    return a.size() != b.size() ? a.size() < b.size() : a.front() < b.front();
  });

  for (const auto& cell : members) {
    for (std::size_t i = 0; i < cell.size(); ++i) {
      for (std::size_t j = i + 1; j < cell.size(); ++j) {
        if (find(cell[i]) == find(cell[j])) continue;
        auto witness = detail::find_mapping(g, stable, cell[i], cell[j]);
        if (!witness) continue;
        for (int v = 0; v < n; ++v)
          unite(v, (*witness)[static_cast<std::size_t>(v)]);
        result.generators.emplace_back(std::move(*witness));
      }
    }
  }

  std::vector<int> ids(static_cast<std::size_t>(n));
  for (int v = 0; v < n; ++v) ids[static_cast<std::size_t>(v)] = find(v);
  result.orbits = OrbitPartition::from_ids(ids);
  return result;
}

/// Exact orbit partition of the automorphism group acting on the vertices.
inline OrbitPartition compute_orbits(const DirectedGraph& g) {
  return find_orbit_generators(g).orbits;
}

/// The rotation automorphism of a built graph: (j, p) advances to
/// (j, p+1 mod r_j) within every cluster simultaneously. Iterating it from
/// any vertex walks that vertex's whole cluster.
inline Permutation canonical_rotation(const ClusterSpec& spec,
                                      const PathOrder& path) {
  if (path.cluster_count() != spec.cluster_count())
    throw ValidationError("path length must equal cluster count");
  if (spec.total_vertices() > std::numeric_limits<int>::max())
    throw CapacityError("cluster sizes sum beyond vertex index range");
  const auto offsets = spec.offsets();
  std::vector<int> image(static_cast<std::size_t>(spec.total_vertices()));
  for (int j = 0; j < spec.cluster_count(); ++j) {
    const long long off = offsets[static_cast<std::size_t>(j)];
    const long long r = spec.size(j);
    for (long long p = 0; p < r; ++p)
      image[static_cast<std::size_t>(off + p)] =
          static_cast<int>(off + (p + 1) % r);
  }
  return Permutation(std::move(image));
}

/// Verification verdict for "g realizes the prescribed orbit sizes".
struct OsCertificate {
  ClusterSpec spec;
  OrbitPartition partition;
  bool weakly_connected = false;
  bool sizes_match = false;

  bool valid() const noexcept { return weakly_connected && sizes_match; }
};

inline OsCertificate certify_os(const DirectedGraph& g, const ClusterSpec& spec) {
  OrbitPartition partition = compute_orbits(g);
  const bool connected = is_weakly_connected(g);
  bool sizes_match =
      static_cast<long long>(g.vertex_count()) == spec.total_vertices();
  if (sizes_match) {
    const std::vector<int> orbit_sizes = partition.sorted_class_sizes();
    const std::vector<long long> want = spec.sorted_sizes();
    sizes_match = orbit_sizes.size() == want.size();
    for (std::size_t i = 0; sizes_match && i < want.size(); ++i)
      sizes_match = static_cast<long long>(orbit_sizes[i]) == want[i];
  }
  return OsCertificate{spec, std::move(partition), connected, sizes_match};
}

}  // namespace orbitforge
