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
#include <cstddef>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "orbitforge/errors.hpp"

namespace orbitforge {

/// Partition of the vertex set 0..n-1 into disjoint covering classes.
/// Classes are stored canonically: each sorted ascending, classes ordered
/// by smallest member, ids assigned in that order. Two partitions of the
/// same set compare equal iff they have the same classes.
class OrbitPartition {
 public:
  OrbitPartition() = default;

  static OrbitPartition from_classes(int vertex_count,
                                     std::vector<std::vector<int>> classes) {
    if (vertex_count < 0)
      throw ValidationError("vertex count must be non-negative");
    std::vector<int> ids(static_cast<std::size_t>(vertex_count), -1);
    for (std::size_t c = 0; c < classes.size(); ++c) {
      if (classes[c].empty()) throw ValidationError("empty partition class");
      for (int v : classes[c]) {
        if (v < 0 || v >= vertex_count)
          throw ValidationError("partition member " + std::to_string(v) +
                                " out of range");
        if (ids[static_cast<std::size_t>(v)] != -1)
          throw ValidationError("vertex " + std::to_string(v) +
                                " appears in two classes");
        ids[static_cast<std::size_t>(v)] = static_cast<int>(c);
      }
    }
    for (int v = 0; v < vertex_count; ++v)
      if (ids[static_cast<std::size_t>(v)] == -1)
        throw ValidationError("vertex " + std::to_string(v) +
                              " missing from the partition");
    return OrbitPartition(vertex_count, std::move(classes));
  }

  /// Builds from a per-vertex class id array; id values are arbitrary
  /// (only equality matters).
  static OrbitPartition from_ids(const std::vector<int>& raw_ids) {
    const int n = static_cast<int>(raw_ids.size());
    std::unordered_map<int, std::size_t> slot;
    std::vector<std::vector<int>> classes;
    for (int v = 0; v < n; ++v) {
      const int id = raw_ids[static_cast<std::size_t>(v)];
      auto [it, fresh] = slot.try_emplace(id, classes.size());
      if (fresh) classes.emplace_back();
      classes[it->second].push_back(v);
    }
    return OrbitPartition(n, std::move(classes));
  }

  int vertex_count() const noexcept { return vertex_count_; }
  int class_count() const noexcept { return static_cast<int>(classes_.size()); }
  const std::vector<std::vector<int>>& classes() const noexcept {
    return classes_;
  }

  /// Canonical class id per vertex.
  const std::vector<int>& orbit_ids() const noexcept { return ids_; }

  std::vector<int> class_sizes() const {
    std::vector<int> sizes;
    sizes.reserve(classes_.size());
    for (const auto& c : classes_) sizes.push_back(static_cast<int>(c.size()));
    return sizes;
  }

  std::vector<int> sorted_class_sizes() const {
    std::vector<int> sizes = class_sizes();
    std::sort(sizes.begin(), sizes.end());
    return sizes;
  }

  /// True iff every class of this partition is contained in a single class
  /// of `coarser`.
  bool refines(const OrbitPartition& coarser) const {
    if (coarser.vertex_count_ != vertex_count_)
      throw ValidationError("partitions cover different vertex sets");
    for (const auto& cls : classes_) {
      const int target = coarser.ids_[static_cast<std::size_t>(cls.front())];
      for (int v : cls)
        if (coarser.ids_[static_cast<std::size_t>(v)] != target) return false;
    }
    return true;
  }

  friend bool operator==(const OrbitPartition& a, const OrbitPartition& b) {
    return a.vertex_count_ == b.vertex_count_ && a.classes_ == b.classes_;
  }

 private:
  OrbitPartition(int vertex_count, std::vector<std::vector<int>> classes)
      : vertex_count_(vertex_count), classes_(std::move(classes)) {
    for (auto& c : classes_) std::sort(c.begin(), c.end());
    std::sort(classes_.begin(), classes_.end(),
              [](const auto& a, const auto& b) { return a.front() < b.front(); });
    ids_.assign(static_cast<std::size_t>(vertex_count_), -1);
    for (std::size_t c = 0; c < classes_.size(); ++c)
      for (int v : classes_[c])
        ids_[static_cast<std::size_t>(v)] = static_cast<int>(c);
  }

  int vertex_count_ = 0;
  std::vector<std::vector<int>> classes_;
  std::vector<int> ids_;
};

}  // namespace orbitforge
