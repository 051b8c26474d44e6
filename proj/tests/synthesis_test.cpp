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

#include <gtest/gtest.h>

#include <algorithm>
#include <map>
#include <vector>

#include "orbitforge/orbitforge.hpp"
#include "test_util.hpp"

namespace orbitforge {
namespace {

TEST(ClusterSpec, RejectsEmptyAndNonPositiveSizes) {
  EXPECT_THROW(ClusterSpec({}), ValidationError);
  EXPECT_THROW(ClusterSpec({3, 0, 2}), ValidationError);
  EXPECT_THROW(ClusterSpec({-1}), ValidationError);
}

TEST(ClusterSpec, BasicAccessors) {
  const ClusterSpec spec({1, 2, 3, 4});
  EXPECT_EQ(spec.cluster_count(), 4);
  EXPECT_EQ(spec.total_vertices(), 10);
  EXPECT_EQ(spec.size(2), 3);
  EXPECT_EQ(spec.min_cluster(), 0);
  EXPECT_EQ(spec.offsets(), (std::vector<long long>{0, 1, 3, 6, 10}));
  EXPECT_EQ(spec.sorted_sizes(), (std::vector<long long>{1, 2, 3, 4}));
}

TEST(ClusterSpec, MinClusterBreaksTiesTowardLowestIndex) {
  EXPECT_EQ(ClusterSpec({4, 2, 2, 3}).min_cluster(), 1);
  EXPECT_EQ(ClusterSpec({2, 2}).min_cluster(), 0);
}

TEST(PathOrder, RejectsNonPermutations) {
  EXPECT_THROW(PathOrder({0, 0, 1}), ValidationError);
  EXPECT_THROW(PathOrder({0, 2}), ValidationError);
  EXPECT_THROW(PathOrder({1, -1, 0}), ValidationError);
}

TEST(PathOrder, IdentityAndReversal) {
  const PathOrder id = PathOrder::identity(4);
  EXPECT_EQ(id.order(), (std::vector<int>{0, 1, 2, 3}));
  EXPECT_EQ(id.reversed().order(), (std::vector<int>{3, 2, 1, 0}));
  EXPECT_EQ(id.reversed().reversed(), id);
}

TEST(BuildGraph, EqualTriplesAlongIdentityPath) {
  const ClusterSpec spec({3, 3, 3, 3, 3});
  const DirectedGraph g = build_os_graph(spec);
  EXPECT_EQ(g.vertex_count(), 15);
  // Four inter-cluster bundles of lcm(3,3)=3 edges plus one 3-cycle.
  EXPECT_EQ(g.edge_count(), 15);
  EXPECT_EQ(predicted_edge_count(spec, PathOrder::identity(5)), 15);
  EXPECT_TRUE(is_weakly_connected(g));
}

TEST(BuildGraph, MixedSizesAlongExplicitPath) {
  const ClusterSpec spec({1, 2, 3, 4});
  const PathOrder path({3, 1, 0, 2});
  const DirectedGraph g = build_os_graph(spec, path);
  EXPECT_EQ(g.vertex_count(), 10);
  // lcm(4,2) + lcm(2,1) + lcm(1,3) = 9, and the size-1 pivot adds no cycle.
  EXPECT_EQ(g.edge_count(), 9);
  EXPECT_EQ(predicted_edge_count(spec, path), 9);
  EXPECT_TRUE(is_weakly_connected(g));
}

TEST(BuildGraph, SingleClusterIsOneCycle) {
  const DirectedGraph g = build_os_graph(ClusterSpec({5}));
  const std::vector<Edge> expected{{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 0}};
  EXPECT_EQ(g.edges(), expected);
}

TEST(BuildGraph, SingleVertexHasNoEdges) {
  const DirectedGraph g = build_os_graph(ClusterSpec({1}));
  EXPECT_EQ(g.vertex_count(), 1);
  EXPECT_EQ(g.edge_count(), 0);
}

TEST(BuildGraph, FrozenEdgeListForTwoPairs) {
  const DirectedGraph g = build_os_graph(ClusterSpec({2, 2}));
  // Inter-cluster residue pairs first, then the cycle on the pivot cluster.
  const std::vector<Edge> expected{{0, 2}, {1, 3}, {0, 1}, {1, 0}};
  EXPECT_EQ(g.edges(), expected);
}

TEST(BuildGraph, PathLengthMustMatchClusterCount) {
  const ClusterSpec spec({2, 3});
  EXPECT_THROW(build_os_graph(spec, PathOrder::identity(3)), ValidationError);
  EXPECT_THROW(predicted_edge_count(spec, PathOrder::identity(1)),
               ValidationError);
}

TEST(BuildGraph, RandomSpecsMatchPredictionAndStayConnected) {
  testutil::Rng rng(4242);
  for (int trial = 0; trial < 200; ++trial) {
    const ClusterSpec spec = testutil::random_spec(rng, 6, 6);
    const PathOrder path = testutil::random_path(rng, spec.cluster_count());
    const DirectedGraph g = build_os_graph(spec, path);
    ASSERT_EQ(g.vertex_count(), spec.total_vertices());
    ASSERT_EQ(g.edge_count(), predicted_edge_count(spec, path));
    ASSERT_TRUE(is_weakly_connected(g));

    // Labels partition the vertices into the requested cluster sizes.
    ASSERT_TRUE(g.labels().has_value());
    std::map<int, long long> counts;
    for (const VertexLabel& l : *g.labels()) ++counts[l.cluster];
    ASSERT_EQ(static_cast<int>(counts.size()), spec.cluster_count());
    for (int j = 0; j < spec.cluster_count(); ++j)
      ASSERT_EQ(counts[j], spec.size(j));
  }
}

TEST(LowerBound, EqualTriples) {
  const LowerBound lb = lower_bound(ClusterSpec({3, 3, 3, 3, 3}));
  EXPECT_EQ(lb.m, 12);
  EXPECT_EQ(lb.tree.size(), 4u);
}

TEST(LowerBound, MixedSizesPicksCheapStar) {
  const LowerBound lb = lower_bound(ClusterSpec({1, 2, 3, 4}));
  EXPECT_EQ(lb.m, 9);
  const std::vector<std::pair<int, int>> expected{{0, 1}, {0, 2}, {0, 3}};
  EXPECT_EQ(lb.tree, expected);
}

TEST(LowerBound, SingleClusterIsZero) {
  const LowerBound lb = lower_bound(ClusterSpec({7}));
  EXPECT_EQ(lb.m, 0);
  EXPECT_TRUE(lb.tree.empty());
}

TEST(LowerBound, AgreesWithExhaustiveOracle) {
  testutil::Rng rng(555);
  for (int trial = 0; trial < 60; ++trial) {
    const ClusterSpec spec = testutil::random_spec(rng, 6, 9);
    if (spec.cluster_count() == 1) continue;
    const LowerBound lb = lower_bound(spec);
    ASSERT_EQ(lb.m, testutil::min_spanning_tree_oracle(spec))
        << "cluster count " << spec.cluster_count();
    // The reported tree must itself realize the weight.
    long long realized = 0;
    for (const auto& [a, b] : lb.tree)
      realized += checked_lcm(spec.size(a), spec.size(b));
    ASSERT_EQ(realized, lb.m);
  }
}

TEST(UpperBound, MixedSizesExactSearch) {
  const BoundsReport report = upper_bound(ClusterSpec({1, 2, 3, 4}));
  EXPECT_EQ(report.upper, 10);
  EXPECT_TRUE(report.exact_upper_is_certified);
  const std::vector<int> forward{3, 1, 0, 2};
  const std::vector<int> backward{2, 0, 1, 3};
  EXPECT_TRUE(report.upper_path.order() == forward ||
              report.upper_path.order() == backward);
  EXPECT_EQ(report.constructed_edges, 9);
  EXPECT_EQ(report.lower, 9);
}

TEST(UpperBound, EqualTriples) {
  const BoundsReport report = upper_bound(ClusterSpec({3, 3, 3, 3, 3}));
  EXPECT_EQ(report.lower, 12);
  EXPECT_EQ(report.upper, 15);
  EXPECT_EQ(report.constructed_edges, 15);
}

TEST(UpperBound, TwoPairs) {
  const BoundsReport report = upper_bound(ClusterSpec({2, 2}));
  EXPECT_EQ(report.lower, 2);
  EXPECT_EQ(report.upper, 4);
  EXPECT_EQ(report.constructed_edges, 4);
}

TEST(UpperBound, SingleClusterConvention) {
  const BoundsReport trivial = upper_bound(ClusterSpec({1}));
  EXPECT_EQ(trivial.upper, 0);
  EXPECT_EQ(trivial.constructed_edges, 0);
  EXPECT_FALSE(trivial.note.empty());

  const BoundsReport cycle = upper_bound(ClusterSpec({5}));
  EXPECT_EQ(cycle.upper, 5);
  EXPECT_EQ(cycle.constructed_edges, 5);
  EXPECT_FALSE(cycle.note.empty());
}

TEST(UpperBound, ExactSearchMatchesFactorialOracle) {
  testutil::Rng rng(808);
  for (int trial = 0; trial < 60; ++trial) {
    const ClusterSpec spec = testutil::random_spec(rng, 7, 9);
    if (spec.cluster_count() == 1) continue;
    const BoundsReport report = upper_bound(spec, PathSearchMode::exact);
    const long long best_path = testutil::min_path_sum_oracle(spec);
    ASSERT_EQ(report.upper, best_path + spec.size(spec.min_cluster()));
    // The reported path realizes the optimum.
    long long realized = 0;
    const auto& order = report.upper_path.order();
    for (std::size_t i = 0; i + 1 < order.size(); ++i)
      realized += checked_lcm(spec.size(order[i]), spec.size(order[i + 1]));
    ASSERT_EQ(realized, best_path);
  }
}

TEST(UpperBound, HeuristicNeverBeatsExact) {
  testutil::Rng rng(909);
  for (int trial = 0; trial < 40; ++trial) {
    const ClusterSpec spec = testutil::random_spec(rng, 8, 12);
    const BoundsReport exact = upper_bound(spec, PathSearchMode::exact);
    const BoundsReport heuristic = upper_bound(spec, PathSearchMode::heuristic);
    ASSERT_GE(heuristic.upper, exact.upper);
    ASSERT_LE(heuristic.lower, heuristic.upper);
  }
}

TEST(UpperBound, ExactSearchCapsClusterCount) {
  std::vector<long long> sizes(21, 2);
  const ClusterSpec spec(std::move(sizes));
  EXPECT_THROW(upper_bound(spec, PathSearchMode::exact), CapacityError);
  const BoundsReport report = upper_bound(spec, PathSearchMode::heuristic);
  EXPECT_EQ(report.upper, 42);  // 20 bundles of lcm(2,2) plus one 2-cycle
}

TEST(UpperBound, ConstructionIsSandwichedByBounds) {
  testutil::Rng rng(6161);
  for (int trial = 0; trial < 60; ++trial) {
    const ClusterSpec spec = testutil::random_spec(rng, 7, 6);
    const BoundsReport report = upper_bound(spec);
    const DirectedGraph g = build_os_graph(spec, report.upper_path);
    ASSERT_EQ(g.edge_count(), report.constructed_edges);
    ASSERT_LE(report.lower, report.constructed_edges);
    ASSERT_LE(report.constructed_edges, report.upper);
  }
}

const EdgeCountCertificate* find_cert(
    const std::vector<EdgeCountCertificate>& certs, CertificateKind kind) {
  for (const EdgeCountCertificate& c : certs)
    if (c.kind == kind) return &c;
  return nullptr;
}

TEST(EdgeCountCertificates, EqualSizesGetAllThreeFamilies) {
  const ClusterSpec spec({3, 3, 3});
  const auto certs = corollary_edge_counts(spec);
  ASSERT_EQ(certs.size(), 3u);

  ASSERT_EQ(certs[0].kind, CertificateKind::equal_sizes);
  EXPECT_EQ(certs[0].edge_bound, 9);
  EXPECT_TRUE(certs[0].exact);
  EXPECT_TRUE(certs[0].fewer_impossible);

  ASSERT_EQ(certs[1].kind, CertificateKind::divisibility_chain);
  EXPECT_EQ(certs[1].edge_bound, 9);
  EXPECT_TRUE(certs[1].exact);

  ASSERT_EQ(certs[2].kind, CertificateKind::bounded_sizes);
  EXPECT_EQ(certs[2].edge_bound, 17);
  EXPECT_FALSE(certs[2].exact);
}

TEST(EdgeCountCertificates, ChainWithSingletonLosesTheCycleEdge) {
  const ClusterSpec spec({1, 2, 4, 8});
  const auto certs = corollary_edge_counts(spec);
  const EdgeCountCertificate* chain =
      find_cert(certs, CertificateKind::divisibility_chain);
  ASSERT_NE(chain, nullptr);
  // A singleton cluster contributes no cycle, so the chain total is n-1.
  EXPECT_EQ(chain->edge_bound, 14);
  EXPECT_TRUE(chain->exact);
  const DirectedGraph g = build_os_graph(spec, chain->witness_path);
  EXPECT_EQ(g.edge_count(), 14);
}

TEST(EdgeCountCertificates, ChainWithoutSingletonHitsVertexCount) {
  const ClusterSpec spec({2, 4, 8});
  const auto certs = corollary_edge_counts(spec);
  const EdgeCountCertificate* chain =
      find_cert(certs, CertificateKind::divisibility_chain);
  ASSERT_NE(chain, nullptr);
  EXPECT_EQ(chain->edge_bound, 14);
  EXPECT_TRUE(chain->exact);
  EXPECT_EQ(build_os_graph(spec, chain->witness_path).edge_count(), 14);
}

TEST(EdgeCountCertificates, PairOfSingletons) {
  const auto certs = corollary_edge_counts(ClusterSpec({1, 1}));
  const EdgeCountCertificate* chain =
      find_cert(certs, CertificateKind::divisibility_chain);
  ASSERT_NE(chain, nullptr);
  EXPECT_EQ(chain->edge_bound, 1);
  EXPECT_EQ(build_os_graph(ClusterSpec({1, 1})).edge_count(), 1);
}

TEST(EdgeCountCertificates, CoprimeSizesOnlyGetTheSizeCapFamily) {
  const ClusterSpec spec({2, 3});
  const auto certs = corollary_edge_counts(spec);
  ASSERT_EQ(certs.size(), 1u);
  EXPECT_EQ(certs[0].kind, CertificateKind::bounded_sizes);
  EXPECT_EQ(certs[0].edge_bound, 13);
  EXPECT_FALSE(certs[0].exact);
  EXPECT_LE(build_os_graph(spec, certs[0].witness_path).edge_count(), 13);
}

TEST(EdgeCountCertificates, SizeCapBelowMaxIsRejected) {
  EXPECT_THROW(bounded_sizes_edge_bound(ClusterSpec({2, 5}), 4),
               ValidationError);
  EXPECT_EQ(bounded_sizes_edge_bound(ClusterSpec({2, 5}), 5),
            7 + 4 * 5 * 9 / 6 + 5);
}

TEST(EdgeCountCertificates, BoundsHoldOnRandomSpecs) {
  testutil::Rng rng(13579);
  for (int trial = 0; trial < 150; ++trial) {
    const ClusterSpec spec = testutil::random_spec(rng, 6, 8);
    const auto certs = corollary_edge_counts(spec);
    ASSERT_FALSE(certs.empty());
    ASSERT_EQ(certs.back().kind, CertificateKind::bounded_sizes);
    for (const EdgeCountCertificate& cert : certs) {
      const DirectedGraph g = build_os_graph(spec, cert.witness_path);
      if (cert.exact)
        ASSERT_EQ(g.edge_count(), cert.edge_bound);
      else
        ASSERT_LE(g.edge_count(), cert.edge_bound);
    }
  }
}

}  // namespace
}  // namespace orbitforge
