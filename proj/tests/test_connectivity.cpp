#include <gtest/gtest.h>

#include "oracles.hpp"
#include "vsp/connectivity.hpp"
#include "vsp/generators.hpp"

using namespace vsp;

TEST(SplitNetwork, ShapeFollowsConstruction) {
  Graph g = gen::cycle(6);
  auto net = build_split_network(g, 0, 3);
  EXPECT_EQ(net.node_count(), 2 * (6 - 2) + 2);
  int unit = 0, big = 0;
  for (std::size_t k = 0; k < net.arcs.size(); k += 2) {
    if (net.arcs[k].original == 1) ++unit;
    if (net.arcs[k].original == net.big) ++big;
  }
  EXPECT_EQ(unit, 6 - 2);
  EXPECT_EQ(big, 2 * 6);
  EXPECT_THROW(build_split_network(g, 0, 1), InvalidArgument);
  EXPECT_THROW(build_split_network(g, 2, 2), InvalidArgument);
}

TEST(MaxFlow, PathHasUnitFlowThroughMiddle) {
  Graph g = gen::path(3);
  auto net = build_split_network(g, 0, 2);
  auto r = max_flow(net);
  EXPECT_EQ(r.value, 1);
  EXPECT_EQ(r.cut, std::vector<Vertex>{1});
}

TEST(MaxFlow, FourCycleOppositeCorners) {
  Graph g = gen::cycle(4);
  EXPECT_EQ(alpha_pair(g, 0, 2), 2);
  EXPECT_EQ(alpha_pair(g, 1, 3), 2);
}

TEST(MaxFlow, CompleteBipartiteTwoThree) {
  Graph g = gen::complete_bipartite(2, 3);
  auto r = min_vertex_cut(g, 0, 1);
  EXPECT_EQ(r.value, 3);
  EXPECT_EQ(r.cut, (std::vector<Vertex>{2, 3, 4}));
}

TEST(MaxFlow, MatchesAugmentingPathOracleOnRandomGraphs) {
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    const int n = 4 + static_cast<int>(seed % 7);
    auto g = gen::random_connected(n, 0.2 + 0.1 * (seed % 6), seed);
    for (Vertex i = 0; i < n; ++i)
      for (Vertex j = i + 1; j < n; ++j) {
        if (g.adjacent(i, j)) continue;
        auto r = min_vertex_cut(g, i, j);
        EXPECT_EQ(r.value, oracle::disjoint_paths(g, i, j)) << "seed " << seed;
        // the returned cut is a separator of the reported size
        std::uint32_t mask = 0;
        for (Vertex v : r.cut) mask |= 1u << v;
        EXPECT_EQ(static_cast<int>(r.cut.size()), r.value);
        EXPECT_FALSE(oracle::connected_avoiding(g, i, j, mask));
      }
  }
}

TEST(MaxFlow, RepeatedRunsAreIdentical) {
  auto g = gen::random_connected(12, 0.35, 3);
  auto first = min_vertex_cut(g, 0, 11);
  for (int k = 0; k < 5; ++k) {
    auto again = min_vertex_cut(g, 0, 11);
    EXPECT_EQ(again.value, first.value);
    EXPECT_EQ(again.cut, first.cut);
  }
}

TEST(Alpha, StarLeaves) {
  Graph g = gen::star(3);
  EXPECT_EQ(alpha_pair(g, 1, 2), 1);
  EXPECT_EQ(alpha_pair(g, 1, 3), 1);
  EXPECT_THROW(alpha_pair(g, 0, 1), InvalidArgument);
}

TEST(Alpha, MengerOnAllSmallGraphs) {
  for (int n = 3; n <= 6; ++n)
    for (const auto& g : gen::all_connected_graphs(n))
      for (Vertex i = 0; i < n; ++i)
        for (Vertex j = i + 1; j < n; ++j)
          if (!g.adjacent(i, j)) {
            EXPECT_EQ(alpha_pair(g, i, j), oracle::min_vertex_cut(g, i, j));
          }
}

TEST(AlphaTable, StoresExactlyNonAdjacentPairs) {
  auto g = gen::random_connected(10, 0.4, 11);
  auto table = alpha_table(g);
  int stored = 0;
  for (Vertex i = 0; i < 10; ++i)
    for (Vertex j = 0; j < 10; ++j) {
      EXPECT_EQ(table.get(i, j).has_value(), i != j && !g.adjacent(i, j));
      if (i < j && table.get(i, j)) {
        ++stored;
        EXPECT_GE(*table.get(i, j), 1);
        EXPECT_LE(*table.get(i, j), 10 - 2);
        EXPECT_GE(*table.get(i, j), table.alpha_min());
      }
    }
  EXPECT_EQ(static_cast<std::size_t>(stored), table.pairs().size());
  EXPECT_EQ(table.alpha_min(), alpha_min(g));
  EXPECT_EQ(table.at(table.argmin().first, table.argmin().second), table.alpha_min());
}

TEST(AlphaTable, ThreadCountDoesNotChangeResult) {
  auto g = gen::random_connected(16, 0.3, 5);
  auto one = alpha_table(g, 1), four = alpha_table(g, 4);
  for (auto [i, j] : one.pairs()) EXPECT_EQ(one.at(i, j), four.at(i, j));
  EXPECT_EQ(one.alpha_min(), four.alpha_min());
}

TEST(AlphaTable, RejectsCompleteAndDisconnected) {
  EXPECT_THROW(alpha_table(gen::complete(5)), InvalidArgument);
  Graph g(4);
  g.add_edge(0, 1);
  g.add_edge(2, 3);
  EXPECT_THROW(alpha_table(g), DisconnectedGraph);
}

TEST(AlphaTable, EdgeDeletionNeverIncreasesAlpha) {
  for (std::uint64_t seed = 0; seed < 15; ++seed) {
    auto g = gen::random_connected(9, 0.5, seed);
    auto before = alpha_table(g);
    for (auto [u, v] : g.edges()) {
      Graph h = g;
      h.remove_edge(u, v);
      if (!h.connected()) continue;
      auto after = alpha_table(h);
      for (auto [i, j] : before.pairs()) EXPECT_LE(after.at(i, j), before.at(i, j));
      break;
    }
  }
}

TEST(AlphaTable, MycielAndQueenInstances) {
  EXPECT_EQ(alpha_table(gen::myciel(3)).alpha_min(), 3);
  EXPECT_EQ(alpha_table(gen::myciel(4)).alpha_min(), 4);
  EXPECT_EQ(alpha_table(gen::queen(6, 6)).alpha_min(), 15);
}

TEST(AlphaSubgraph, WholeVertexSetEqualsAlphaMin) {
  auto g = gen::random_connected(10, 0.35, 2);
  std::vector<Vertex> all(10);
  std::iota(all.begin(), all.end(), 0);
  EXPECT_EQ(alpha_subgraph(g, all), alpha_table(g).alpha_min());
}

TEST(AlphaSubgraph, FiveCycle) {
  Graph g = gen::cycle(5);
  std::vector<Vertex> all{0, 1, 2, 3, 4};
  EXPECT_EQ(alpha_subgraph(g, all), 2);
}

TEST(AlphaSubgraph, MatchesBruteForceInsideInducedSubgraph) {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    auto g = gen::random_connected(8, 0.45, seed);
    auto comp = g.component_of(static_cast<Vertex>(seed % 8));
    std::vector<Vertex> vs(comp.begin(), comp.begin() + 6);  // BFS prefix stays connected
    Graph sub = g.induced(vs);
    if (sub.complete()) continue;
    int expected = std::numeric_limits<int>::max();
    for (Vertex i = 0; i < 6; ++i)
      for (Vertex j = i + 1; j < 6; ++j)
        if (!sub.adjacent(i, j)) expected = std::min(expected, oracle::min_vertex_cut(sub, i, j));
    EXPECT_EQ(alpha_subgraph(g, vs), expected);
  }
}

TEST(AlphaSubgraph, Errors) {
  Graph g = gen::path(4);
  std::vector<Vertex> split{0, 2};
  EXPECT_THROW(alpha_subgraph(g, split), DisconnectedGraph);
  std::vector<Vertex> edge{0, 1};
  EXPECT_THROW(alpha_subgraph(g, edge), InvalidArgument);
}
