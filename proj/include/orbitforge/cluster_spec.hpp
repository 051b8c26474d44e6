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
#include <limits>
#include <numeric>
#include <string>
#include <vector>

#include "orbitforge/errors.hpp"

namespace orbitforge {

/// a + b with overflow check.
inline long long checked_add(long long a, long long b) {
  long long r = 0;
  if (__builtin_add_overflow(a, b, &r))
    throw OverflowError("integer overflow in addition");
  return r;
}

/// a * b with overflow check.
inline long long checked_mul(long long a, long long b) {
  long long r = 0;
  if (__builtin_mul_overflow(a, b, &r))
    throw OverflowError("integer overflow in multiplication");
  return r;
}

/// lcm(a, b) for positive a, b, computed as (a / gcd) * b with an
/// overflow check on the multiplication.
inline long long checked_lcm(long long a, long long b) {
  const long long g = std::gcd(a, b);
  long long r = 0;
  if (__builtin_mul_overflow(a / g, b, &r))
    throw OverflowError("integer overflow in lcm");
  return r;
}

/// Desired cluster sizes r_0, ..., r_{k-1}, all positive. Order is
/// preserved exactly as given; nothing is sorted behind the caller's back.
class ClusterSpec {
 public:
  explicit ClusterSpec(std::vector<long long> sizes) : sizes_(std::move(sizes)) {
    if (sizes_.empty()) throw ValidationError("cluster list must be non-empty");
    n_ = 0;
    for (long long r : sizes_) {
      if (r < 1) throw ValidationError("cluster sizes must be positive");
      n_ = checked_add(n_, r);
    }
  }

  int cluster_count() const noexcept { return static_cast<int>(sizes_.size()); }
  long long total_vertices() const noexcept { return n_; }
  const std::vector<long long>& sizes() const noexcept { return sizes_; }
  long long size(int j) const { return sizes_[static_cast<std::size_t>(j)]; }

  /// Index of the smallest cluster, ties broken by lowest cluster index.
  int min_cluster() const {
    return static_cast<int>(
        std::min_element(sizes_.begin(), sizes_.end()) - sizes_.begin());
  }

  /// First vertex index of each cluster under cluster-major vertex layout,
  /// plus a trailing n.
  std::vector<long long> offsets() const {
    std::vector<long long> off(sizes_.size() + 1, 0);
    for (std::size_t j = 0; j < sizes_.size(); ++j)
      off[j + 1] = off[j] + sizes_[j];
    return off;
  }

  /// Multiset of sizes, ascending.
  std::vector<long long> sorted_sizes() const {
    std::vector<long long> s = sizes_;
    std::sort(s.begin(), s.end());
    return s;
  }

  friend bool operator==(const ClusterSpec&, const ClusterSpec&) = default;

 private:
  std::vector<long long> sizes_;
  long long n_ = 0;
};

/// Visit order of the clusters along the synthesis path: a permutation of
/// 0..k-1.
class PathOrder {
 public:
  PathOrder() = default;

  explicit PathOrder(std::vector<int> order) : order_(std::move(order)) {
    std::vector<char> seen(order_.size(), 0);
    for (int c : order_) {
      if (c < 0 || c >= static_cast<int>(order_.size()) ||
          seen[static_cast<std::size_t>(c)])
        throw ValidationError("path order must be a permutation of 0..k-1");
      seen[static_cast<std::size_t>(c)] = 1;
    }
  }

  static PathOrder identity(int k) {
    std::vector<int> o(static_cast<std::size_t>(k));
    std::iota(o.begin(), o.end(), 0);
    return PathOrder(std::move(o));
  }

  int cluster_count() const noexcept { return static_cast<int>(order_.size()); }
  const std::vector<int>& order() const noexcept { return order_; }

  PathOrder reversed() const {
    std::vector<int> o(order_.rbegin(), order_.rend());
    return PathOrder(std::move(o));
  }

  friend bool operator==(const PathOrder&, const PathOrder&) = default;

 private:
  std::vector<int> order_;
};

}  // namespace orbitforge
