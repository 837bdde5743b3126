#include <gtest/gtest.h>

#include <random>
#include <set>
#include <sstream>

#include "oracles/oracles.hpp"
#include "support/generators.hpp"
#include "veo/community.hpp"
#include "veo/error.hpp"

using namespace veo;
using testgen::make_graph;

namespace {

void expect_partition(const CommunityStructure& cs, std::size_t n) {
  std::vector<int> seen(n, 0);
  for (std::size_t c = 0; c < cs.size(); ++c) {
    ASSERT_FALSE(cs.members(c).empty());
    for (NodeIndex v : cs.members(c)) {
      ASSERT_LT(v, n);
      ++seen[v];
      EXPECT_EQ(cs.community_of(v), c);
    }
  }
  for (std::size_t v = 0; v < n; ++v) EXPECT_EQ(seen[v], 1) << "node " << v;
}

std::size_t edges_between(const Graph& g, const std::vector<NodeIndex>& a, const std::vector<NodeIndex>& b) {
  std::size_t count = 0;
  for (NodeIndex u : a) {
    for (NodeIndex v : b) count += g.has_edge(u, v);
  }
  return count;
}

CommunityStructure random_partition(std::size_t n, std::size_t k, std::mt19937_64& rng) {
  std::vector<std::size_t> assign(n);
  for (std::size_t v = 0; v < n; ++v) assign[v] = v < k ? v : rng() % k;
  return CommunityStructure::from_assignment(assign);
}

Graph two_cliques_with_bridge() {
  std::vector<Edge> e;
  for (NodeIndex base : {0u, 4u}) {
    for (NodeIndex i = 0; i < 4; ++i) {
      for (NodeIndex j = i + 1; j < 4; ++j) e.push_back({base + i, base + j});
    }
  }
  e.push_back({3, 4});
  return make_graph(8, e);
}

}  // namespace

TEST(Modularity, SingleCommunityIsZero) {
  std::mt19937_64 rng(1);
  const auto g = testgen::connected_random(10, 0.3, rng);
  EXPECT_NEAR(modularity(g, CommunityStructure::from_sets(10, {{0, 1, 2, 3, 4, 5, 6, 7, 8, 9}})), 0.0, 1e-12);
}

TEST(Modularity, TwoTriangles) {
  const auto g = make_graph(6, {{0, 1}, {1, 2}, {0, 2}, {3, 4}, {4, 5}, {3, 5}});
  EXPECT_NEAR(modularity(g, CommunityStructure::from_sets(6, {{0, 1, 2}, {3, 4, 5}})), 0.5, 1e-12);
}

TEST(Modularity, SingletonsOnK2) {
  const auto g = make_graph(2, {{0, 1}});
  EXPECT_NEAR(modularity(g, CommunityStructure::singletons(2)), -0.5, 1e-12);
}

TEST(Modularity, NoEdgesIsAnError) {
  GraphBuilder b;
  b.add_node("0");
  EXPECT_THROW(modularity(b.build(), CommunityStructure::singletons(1)), GraphError);
}

TEST(Modularity, MatchesDefinitionOracle) {
  std::mt19937_64 rng(4);
  for (int i = 0; i < 40; ++i) {
    const auto g = testgen::connected_random(12, 0.2, rng);
    const auto cs = random_partition(12, 1 + i % 5, rng);
    std::vector<int> comm(12);
    for (NodeIndex v = 0; v < 12; ++v) comm[v] = static_cast<int>(cs.community_of(v));
    EXPECT_NEAR(modularity(g, cs), oracle::modularity(testgen::to_matrix(g), comm), 1e-12);
  }
}

TEST(FastGreedy, TwoCliquesSplitAtBridge) {
  const auto g = two_cliques_with_bridge();
  const auto cs = detect_fastgreedy(g);
  ASSERT_EQ(cs.size(), 2u);
  EXPECT_EQ(cs.members(0), (std::vector<NodeIndex>{0, 1, 2, 3}));
  EXPECT_EQ(cs.members(1), (std::vector<NodeIndex>{4, 5, 6, 7}));
  EXPECT_NEAR(modularity(g, cs), oracle::max_modularity(testgen::to_matrix(g)), 1e-12);
}

TEST(FastGreedy, CompleteGraphIsOneCommunity) {
  std::vector<Edge> e;
  for (NodeIndex i = 0; i < 5; ++i) {
    for (NodeIndex j = i + 1; j < 5; ++j) e.push_back({i, j});
  }
  EXPECT_EQ(detect_fastgreedy(make_graph(5, e)).size(), 1u);
}

TEST(FastGreedy, NeverBelowSingletonsOrAboveOptimum) {
  std::mt19937_64 rng(12);
  for (int i = 0; i < 25; ++i) {
    const auto g = testgen::connected_random(8, 0.25, rng);
    const auto cs = detect_fastgreedy(g);
    expect_partition(cs, 8);
    const double q = modularity(g, cs);
    EXPECT_GE(q, modularity(g, CommunityStructure::singletons(8)) - 1e-12);
    EXPECT_LE(q, oracle::max_modularity(testgen::to_matrix(g)) + 1e-12);
  }
}

TEST(FastGreedy, PlantedPartitionsAreValid) {
  std::mt19937_64 rng(8);
  const auto g = testgen::planted_partition({30, 30, 30}, 0.3, 0.01, rng);
  const auto cs = detect_fastgreedy(g);
  expect_partition(cs, g.node_count());
  EXPECT_GE(cs.size(), 3u);
  EXPECT_EQ(detect_fastgreedy(g), cs);
}

TEST(MergeToTarget, SmallestGoesToBestConnected) {
  const auto g = make_graph(7, {{0, 1}, {1, 2}, {2, 3}, {4, 5}, {5, 6}});
  const auto cs = CommunityStructure::from_sets(7, {{0}, {1, 2, 3}, {4, 5, 6}});
  const auto merged = merge_to_target(g, cs, 2);
  ASSERT_EQ(merged.size(), 2u);
  EXPECT_EQ(merged.members(0), (std::vector<NodeIndex>{0, 1, 2, 3}));
  EXPECT_EQ(merged.members(1), (std::vector<NodeIndex>{4, 5, 6}));
}

TEST(MergeToTarget, TargetEqualToCountIsIdentity) {
  const auto g = make_graph(4, {{0, 1}, {2, 3}});
  const auto cs = CommunityStructure::from_sets(4, {{0, 1}, {2, 3}});
  EXPECT_EQ(merge_to_target(g, cs, 2), cs);
}

TEST(MergeToTarget, TargetAboveCountIsAnError) {
  const auto g = make_graph(4, {{0, 1}, {2, 3}});
  EXPECT_THROW(merge_to_target(g, CommunityStructure::from_sets(4, {{0, 1}, {2, 3}}), 3), Error);
}

TEST(MergeToTarget, IsolatedSmallestGoesToSmallestOther) {
  const auto g = make_graph(7, {{1, 2}, {3, 4}, {4, 5}, {5, 6}});
  const auto cs = CommunityStructure::from_sets(7, {{0}, {1, 2}, {3, 4, 5, 6}});
  const auto merged = merge_to_target(g, cs, 2);
  EXPECT_EQ(merged.members(0), (std::vector<NodeIndex>{0, 1, 2}));
}

// Each step is checked against a from-scratch recount of inter-community edges.
TEST(MergeToTarget, EveryStepMaximizesRecountedEdges) {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 50; ++trial) {
    const auto g = testgen::erdos_renyi(30, 0.08, rng);
    auto cs = random_partition(30, 10, rng);
    const auto direct = merge_to_target(g, cs, 4);
    std::size_t steps = 0;
    while (cs.size() > 4) {
      const auto next = merge_to_target(g, cs, cs.size() - 1);
      ASSERT_EQ(next.size(), cs.size() - 1);
      expect_partition(next, 30);
      // Smallest community, ties by smallest member (= lowest index).
      std::size_t smallest = 0;
      for (std::size_t c = 1; c < cs.size(); ++c) {
        if (cs.members(c).size() < cs.members(smallest).size()) smallest = c;
      }
      std::size_t best = cs.size();
      std::size_t best_edges = 0;
      for (std::size_t c = 0; c < cs.size(); ++c) {
        if (c == smallest) continue;
        const auto e = edges_between(g, cs.members(smallest), cs.members(c));
        if (best == cs.size() || e > best_edges) {
          best = c;
          best_edges = e;
        }
      }
      if (best_edges == 0) {
        best = cs.size();
        for (std::size_t c = 0; c < cs.size(); ++c) {
          if (c != smallest && (best == cs.size() || cs.members(c).size() < cs.members(best).size())) best = c;
        }
      }
      std::vector<NodeIndex> joined = cs.members(smallest);
      joined.insert(joined.end(), cs.members(best).begin(), cs.members(best).end());
      std::sort(joined.begin(), joined.end());
      EXPECT_EQ(next.members(next.community_of(joined.front())), joined);
      cs = next;
      ++steps;
    }
    EXPECT_EQ(steps, 6u);
    EXPECT_EQ(cs, direct);
  }
}

TEST(MergeSmall, FoldsUndersizedCommunities) {
  std::vector<Edge> e;
  for (NodeIndex v = 2; v < 51; ++v) e.push_back({1, v});
  for (NodeIndex v = 52; v < 100; ++v) e.push_back({51, v});
  e.push_back({0, 1});
  e.push_back({50, 51});
  const auto g = make_graph(100, e);
  std::vector<NodeIndex> big, other;
  for (NodeIndex v = 1; v <= 50; ++v) big.push_back(v);
  for (NodeIndex v = 51; v < 100; ++v) other.push_back(v);
  const auto cs = CommunityStructure::from_sets(100, {{0}, big, other});
  const auto merged = merge_small(g, cs, 0.02);
  ASSERT_EQ(merged.size(), 2u);
  EXPECT_EQ(merged.community_of(0), merged.community_of(1));
}

TEST(MergeSmall, NothingUndersizedIsIdentity) {
  const auto g = make_graph(4, {{0, 1}, {2, 3}, {1, 2}});
  const auto cs = CommunityStructure::from_sets(4, {{0, 1}, {2, 3}});
  EXPECT_EQ(merge_small(g, cs, 0.1), cs);
}

TEST(MergeSmall, KeepsPartitionsValid) {
  std::mt19937_64 rng(31);
  for (int i = 0; i < 30; ++i) {
    const auto g = testgen::erdos_renyi(60, 0.05, rng);
    const auto cs = random_partition(60, 20, rng);
    const auto merged = merge_small(g, cs, 0.05);
    expect_partition(merged, 60);
    EXPECT_LE(merged.size(), cs.size());
    const bool any_big = std::any_of(cs.communities().begin(), cs.communities().end(),
                                     [](const auto& c) { return c.size() >= 3; });
    if (any_big) {
      for (const auto& c : merged.communities()) EXPECT_GE(c.size(), 3u);
    }
  }
}

TEST(CommunityFile, RoundTrips) {
  const auto g = two_cliques_with_bridge();
  const auto cs = detect_fastgreedy(g);
  std::stringstream buf;
  write_communities(g, cs, buf);
  EXPECT_EQ(read_communities(g, buf), cs);
}

TEST(CommunityStructure, RejectsNonPartitions) {
  EXPECT_THROW(CommunityStructure::from_sets(3, {{0, 1}}), GraphError);
  EXPECT_THROW(CommunityStructure::from_sets(3, {{0, 1}, {1, 2}}), GraphError);
  EXPECT_THROW(CommunityStructure::from_sets(3, {{0, 1, 2}, {}}), GraphError);
}
