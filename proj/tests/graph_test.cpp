#include "pcfi/graph.hpp"

#include <numeric>
#include <set>

#include "gmock/gmock.h"
#include "gtest/gtest.h"
#include "pcfi/errors.hpp"
#include "pcfi/masking.hpp"
#include "support/test_support.hpp"

namespace pcfi {
namespace {

using ::testing::ElementsAre;
using ::testing::HasSubstr;
using ::testing::IsEmpty;

std::vector<NodeId> vec(std::span<const NodeId> s) { return {s.begin(), s.end()}; }

std::vector<NodeId> degrees(const Graph& g) {
  std::vector<NodeId> out;
  for (NodeId v = 0; v < g.num_nodes(); ++v) out.push_back(g.degree(v));
  return out;
}

TEST(BuildGraphTest, DeduplicatesAndDropsSelfLoops) {
  const std::vector<Edge> edges{{0, 1}, {1, 0}, {1, 1}};
  const auto g = build_graph(edges, 2);
  EXPECT_EQ(g.num_nodes(), 2);
  EXPECT_EQ(g.num_edges(), 1u);
  EXPECT_THAT(vec(g.neighbors(0)), ElementsAre(1));
  EXPECT_THAT(vec(g.neighbors(1)), ElementsAre(0));
}

TEST(BuildGraphTest, EmptyEdgeList) {
  const auto g = build_graph({}, 3);
  EXPECT_EQ(g.num_nodes(), 3);
  EXPECT_EQ(g.num_edges(), 0u);
  for (NodeId v = 0; v < 3; ++v) EXPECT_THAT(vec(g.neighbors(v)), IsEmpty());
}

TEST(BuildGraphTest, PathDegrees) {
  const std::vector<Edge> edges{{0, 1}, {1, 2}};
  EXPECT_THAT(degrees(build_graph(edges, 3)), ElementsAre(1, 2, 1));
}

TEST(BuildGraphTest, OutOfRangeIdNamesThePair) {
  const std::vector<Edge> edges{{0, 1}, {2, 5}};
  try {
    build_graph(edges, 3);
    FAIL() << "expected InputError";
  } catch (const InputError& e) {
    EXPECT_THAT(e.what(), HasSubstr("(2, 5)"));
  }
  const std::vector<Edge> negative{{-1, 0}};
  EXPECT_THROW(build_graph(negative, 3), InputError);
}

TEST(BuildGraphTest, RandomEdgeListsGiveSymmetricSortedLists) {
  Rng rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    const NodeId n = 1 + static_cast<NodeId>(rng.uniform_index(40));
    const auto edges = testing::random_edges(n, rng.uniform_index(120), rng);
    const auto g = build_graph(edges, n);
    std::set<Edge> expected;
    for (auto [u, v] : edges) {
      if (u != v) expected.insert({std::min(u, v), std::max(u, v)});
    }
    EXPECT_EQ(g.num_edges(), expected.size());
    for (NodeId v = 0; v < n; ++v) {
      const auto nbrs = g.neighbors(v);
      EXPECT_TRUE(std::is_sorted(nbrs.begin(), nbrs.end()));
      EXPECT_EQ(std::adjacent_find(nbrs.begin(), nbrs.end()), nbrs.end());
      for (NodeId w : nbrs) {
        EXPECT_NE(w, v);
        EXPECT_TRUE(g.has_edge(w, v));
        EXPECT_TRUE(expected.count({std::min(v, w), std::max(v, w)}));
      }
    }
  }
}

TEST(ConnectedComponentsTest, Path) {
  const std::vector<Edge> edges{{0, 1}, {1, 2}};
  const auto cc = connected_components(build_graph(edges, 3));
  EXPECT_EQ(cc.num_components, 1);
  EXPECT_THAT(cc.sizes, ElementsAre(3));
}

TEST(ConnectedComponentsTest, EdgePlusIsolatedNode) {
  const std::vector<Edge> edges{{0, 1}};
  const auto cc = connected_components(build_graph(edges, 3));
  EXPECT_EQ(cc.num_components, 2);
  EXPECT_EQ(cc.labels[0], cc.largest_id);
  EXPECT_EQ(cc.labels[1], cc.largest_id);
  EXPECT_NE(cc.labels[2], cc.largest_id);
}

TEST(ConnectedComponentsTest, TieGoesToSmallestId) {
  const std::vector<Edge> edges{{3, 4}, {4, 5}, {5, 3}, {0, 1}, {1, 2}, {2, 0}};
  const auto cc = connected_components(build_graph(edges, 6));
  EXPECT_EQ(cc.num_components, 2);
  EXPECT_EQ(cc.largest_id, cc.labels[0]);
  EXPECT_EQ(cc.largest_id, 0);
}

TEST(ConnectedComponentsTest, MatchesFloydReachability) {
  Rng rng(5);
  for (int trial = 0; trial < 40; ++trial) {
    const NodeId n = 1 + static_cast<NodeId>(rng.uniform_index(30));
    const auto g = build_graph(testing::random_edges(n, rng.uniform_index(40), rng), n);
    const auto cc = connected_components(g);
    const auto hops = testing::all_pairs_hops(g);
    for (NodeId i = 0; i < n; ++i) {
      for (NodeId j = 0; j < n; ++j) {
        EXPECT_EQ(cc.labels[i] == cc.labels[j], hops(i, j) < testing::kInf);
      }
    }
    EXPECT_EQ(std::accumulate(cc.sizes.begin(), cc.sizes.end(), 0), n);
  }
}

TEST(ExtractLargestComponentTest, TrianglePlusIsolatedNode) {
  const std::vector<Edge> edges{{0, 1}, {1, 2}, {2, 0}};
  const auto g = build_graph(edges, 4);
  Matrix x(4, 2);
  x << 1, 2, 3, 4, 5, 6, 7, 8;
  const auto fs = apply_mask(x, MaskMatrix::Constant(4, 2, true));
  const auto out = extract_largest_component(g, fs);
  EXPECT_EQ(out.graph.num_nodes(), 3);
  EXPECT_EQ(out.graph.num_edges(), 3u);
  EXPECT_THAT(out.id_map, ElementsAre(0, 1, 2));
  EXPECT_EQ(out.values.rows(), 3);
  EXPECT_EQ(out.values.cols(), 2);
  EXPECT_EQ(out.values, x.topRows(3));
}

TEST(ExtractLargestComponentTest, ConnectedGraphIsIdentity) {
  const std::vector<Edge> edges{{0, 1}, {1, 2}, {2, 3}};
  const auto g = build_graph(edges, 4);
  const auto out = extract_largest_component(g);
  EXPECT_THAT(out.id_map, ElementsAre(0, 1, 2, 3));
  EXPECT_EQ(out.graph.edge_list(), g.edge_list());
}

TEST(ExtractLargestComponentTest, RejectsMismatchedFeatures) {
  const auto g = build_graph({}, 3);
  const auto fs = apply_mask(Matrix::Zero(2, 1), MaskMatrix::Constant(2, 1, true));
  EXPECT_THROW(extract_largest_component(g, fs), InputError);
}

// Brute force: label by Floyd reachability, pick the largest label class, and
// compare edge sets of the induced subgraph.
TEST(ExtractLargestComponentTest, MatchesBruteForceInducedSubgraph) {
  Rng rng(21);
  for (int trial = 0; trial < 60; ++trial) {
    const NodeId n = 1 + static_cast<NodeId>(rng.uniform_index(50));
    const auto g = build_graph(testing::random_edges(n, rng.uniform_index(50), rng), n);
    const auto hops = testing::all_pairs_hops(g);

    std::vector<NodeId> best;
    std::vector<bool> seen(n, false);
    for (NodeId s = 0; s < n; ++s) {
      if (seen[s]) continue;
      std::vector<NodeId> comp;
      for (NodeId v = 0; v < n; ++v) {
        if (hops(s, v) < testing::kInf) {
          comp.push_back(v);
          seen[v] = true;
        }
      }
      if (comp.size() > best.size()) best = comp;
    }

    const auto out = extract_largest_component(g);
    ASSERT_EQ(out.id_map, best);
    std::set<Edge> expected;
    for (std::size_t a = 0; a < best.size(); ++a) {
      for (std::size_t b = a + 1; b < best.size(); ++b) {
        if (g.has_edge(best[a], best[b])) {
          expected.insert({static_cast<NodeId>(a), static_cast<NodeId>(b)});
        }
      }
    }
    const auto got = out.graph.edge_list();
    EXPECT_EQ(std::set<Edge>(got.begin(), got.end()), expected);
  }
}

TEST(ExtractLargestComponentTest, FiveAndThreeComponents) {
  const std::vector<Edge> edges{{0, 2}, {2, 4}, {4, 6}, {6, 8}, {0, 8},
                                {1, 3}, {3, 5}};
  const auto g = build_graph(edges, 9);
  const auto out = extract_largest_component(g);
  EXPECT_EQ(out.graph.num_nodes(), 5);
  EXPECT_THAT(out.id_map, ElementsAre(0, 2, 4, 6, 8));
  EXPECT_EQ(out.graph.num_edges(), 5u);
}

TEST(PartitionChannelTest, KnownFirst) {
  MaskVector mask(4);
  mask << false, true, false, true;
  const auto p = partition_channel(mask, 0);
  EXPECT_THAT(p.known_nodes(), ElementsAre(1, 3));
  EXPECT_THAT(p.unknown_nodes(), ElementsAre(0, 2));
  EXPECT_THAT(p.permutation(), ElementsAre(2, 0, 3, 1));
  EXPECT_THAT(p.inverse_permutation(), ElementsAre(1, 3, 0, 2));
}

TEST(PartitionChannelTest, AllKnownIsIdentity) {
  const MaskVector mask = MaskVector::Constant(5, true);
  const auto p = partition_channel(mask, 2);
  EXPECT_EQ(p.channel(), 2);
  EXPECT_THAT(p.unknown_nodes(), IsEmpty());
  EXPECT_THAT(p.permutation(), ElementsAre(0, 1, 2, 3, 4));
}

TEST(PartitionChannelTest, AllMissingHasNoKnownNodes) {
  const MaskVector mask = MaskVector::Constant(3, false);
  const auto p = partition_channel(mask, 0);
  EXPECT_EQ(p.num_known(), 0);
  EXPECT_THAT(p.unknown_nodes(), ElementsAre(0, 1, 2));
}

TEST(PartitionChannelTest, ReorderThenRestoreIsIdentity) {
  Rng rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    const auto n = static_cast<Eigen::Index>(1 + rng.uniform_index(60));
    MaskVector mask(n);
    for (Eigen::Index i = 0; i < n; ++i) mask[i] = rng.bernoulli(0.4);
    const auto p = partition_channel(mask, 0);
    const Vector x = testing::random_matrix(n, 1, rng);
    const Vector r = p.reorder(x);
    EXPECT_EQ(p.restore(r), x);
    for (NodeId k = 0; k < p.num_known(); ++k) EXPECT_TRUE(mask[p.to_original(k)]);
    // Known nodes keep their relative order.
    EXPECT_TRUE(std::is_sorted(p.inverse_permutation().begin(),
                               p.inverse_permutation().begin() + p.num_known()));
  }
}

}  // namespace
}  // namespace pcfi
