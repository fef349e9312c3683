#include <gtest/gtest.h>

#include <sstream>

#include "llcount/graph.hpp"
#include "test_support.hpp"

using namespace llc;
using llc::testing::Rng;

namespace {

// Every nonempty subset of size <= m that induces a connected subgraph.
std::vector<VertexSet> connected_sets_bruteforce(const DependencyGraph& g, int m) {
  std::vector<VertexSet> out;
  const int n = g.vertex_count();
  for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
    VertexSet s;
    for (int v = 0; v < n; ++v)
      if (mask & (1u << v)) s.push_back(v);
    if (static_cast<int>(s.size()) > m) continue;
    // BFS inside the subset
    std::vector<int> seen{s[0]};
    for (std::size_t i = 0; i < seen.size(); ++i)
      for (int u : g.neighbors(seen[i]))
        if ((mask >> u & 1u) && std::find(seen.begin(), seen.end(), u) == seen.end()) seen.push_back(u);
    if (seen.size() == s.size()) out.push_back(s);
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

TEST(BuildGraph, PathIsolatedTriangle) {
  auto p3 = build_graph(3, {{0, 1}, {1, 2}});
  EXPECT_EQ(p3.max_degree(), 2);
  EXPECT_EQ(p3.edge_count(), 2u);
  auto k1 = build_graph(1, {});
  EXPECT_EQ(k1.max_degree(), 0);
  auto k3 = build_graph(3, {{0, 1}, {1, 2}, {0, 2}});
  EXPECT_EQ(k3.max_degree(), 2);
  EXPECT_EQ(k3.edge_count(), 3u);
}

TEST(BuildGraph, MergesDuplicatesAndRejectsBadEdges) {
  auto g = build_graph(3, {{0, 1}, {1, 0}, {0, 1}});
  EXPECT_EQ(g.edge_count(), 1u);
  EXPECT_TRUE(g.adjacent(0, 1));
  EXPECT_TRUE(g.adjacent(1, 0));
  EXPECT_THROW(build_graph(2, {{0, 0}}), InvalidArgument);
  EXPECT_THROW(build_graph(2, {{0, 2}}), InvalidArgument);
  EXPECT_THROW(build_graph(2, {{-1, 1}}), InvalidArgument);
}

TEST(BuildGraph, RandomGraphsAreSymmetricAndDuplicateFree) {
  Rng rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    auto g = llc::testing::random_bounded_graph(rng, 9, 4, 0.6);
    int maxlen = 0;
    for (int v = 0; v < g.vertex_count(); ++v) {
      const auto& nb = g.neighbors(v);
      EXPECT_TRUE(std::is_sorted(nb.begin(), nb.end()));
      EXPECT_EQ(std::adjacent_find(nb.begin(), nb.end()), nb.end());
      for (int u : nb) {
        EXPECT_NE(u, v);
        EXPECT_TRUE(g.adjacent(u, v));
      }
      maxlen = std::max<int>(maxlen, nb.size());
    }
    EXPECT_EQ(g.max_degree(), maxlen);
    EXPECT_LE(g.max_degree(), 4);
  }
}

TEST(GreedyColoring, SmallCases) {
  EXPECT_EQ(greedy_coloring(complete_graph(3)).colors_used, 3);
  EXPECT_EQ(greedy_coloring(path_graph(3)).colors_used, 2);
  EXPECT_EQ(greedy_coloring(build_graph(5, {})).colors_used, 1);
}

TEST(GreedyColoring, ProperAndWithinDegreeBound) {
  Rng rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    auto g = llc::testing::random_bounded_graph(rng, llc::testing::uniform_int(rng, 1, 12), 5, 0.5);
    auto c = greedy_coloring(g);
    EXPECT_TRUE(is_proper(g, c));
    EXPECT_LE(c.colors_used, g.max_degree() + 1);
    std::size_t total = 0;
    for (const auto& cls : c.classes()) total += cls.size();
    EXPECT_EQ(total, static_cast<std::size_t>(g.vertex_count()));
  }
}

TEST(Coloring, UserColoringValidated) {
  auto p3 = path_graph(3);
  auto c = make_coloring(p3, {0, 1, 0});
  EXPECT_EQ(c.colors_used, 2);
  EXPECT_THROW(make_coloring(p3, {0, 0, 1}), InvalidArgument);
  EXPECT_THROW(make_coloring(p3, {0, 1}), InvalidArgument);
}

TEST(StrongProduct, Examples) {
  auto k3 = strong_product_with_complete(build_graph(1, {}), 3);
  EXPECT_EQ(k3.vertex_count(), 3);
  EXPECT_EQ(k3.edge_count(), 3u);
  auto k2 = strong_product_with_complete(complete_graph(2), 1);
  EXPECT_EQ(k2.edge_count(), 1u);
  auto p = strong_product_with_complete(path_graph(3), 2);
  EXPECT_EQ(p.vertex_count(), 6);
  EXPECT_EQ(p.max_degree(), 2 * 3 - 1);
  EXPECT_THROW(strong_product_with_complete(path_graph(3), 0), InvalidArgument);
}

TEST(StrongProduct, AdjacencyRule) {
  Rng rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    auto g = llc::testing::random_bounded_graph(rng, 6, 3);
    const int T = llc::testing::uniform_int(rng, 1, 3);
    auto gt = strong_product_with_complete(g, T);
    for (int a = 0; a < gt.vertex_count(); ++a)
      for (int b = 0; b < gt.vertex_count(); ++b) {
        if (a == b) continue;
        const int u = a / T, v = b / T;
        EXPECT_EQ(gt.adjacent(a, b), u == v || g.adjacent(u, v));
      }
    EXPECT_LE(gt.max_degree(), T * (g.max_degree() + 1) - 1);
  }
}

TEST(ConnectedSubgraphs, Examples) {
  auto p3 = enumerate_connected_subgraphs(path_graph(3), 2);
  std::vector<VertexSet> expect{{0}, {1}, {2}, {0, 1}, {1, 2}};
  EXPECT_EQ(p3, expect);
  EXPECT_EQ(enumerate_connected_subgraphs(complete_graph(3), 3).size(), 7u);
  EXPECT_EQ(enumerate_connected_subgraphs(build_graph(4, {}), 3).size(), 4u);
}

TEST(ConnectedSubgraphs, MatchBruteForce) {
  Rng rng(17);
  for (int trial = 0; trial < 150; ++trial) {
    const int n = llc::testing::uniform_int(rng, 1, 8);
    auto g = llc::testing::random_bounded_graph(rng, n, 4, 0.6);
    const int m = llc::testing::uniform_int(rng, 1, n);
    auto got = enumerate_connected_subgraphs(g, m);
    // no duplicates, canonical order
    auto sorted = got;
    std::sort(sorted.begin(), sorted.end());
    EXPECT_EQ(std::adjacent_find(sorted.begin(), sorted.end()), sorted.end());
    EXPECT_TRUE(std::is_sorted(got.begin(), got.end(), canonical_less));
    EXPECT_EQ(sorted, connected_sets_bruteforce(g, m));
  }
}

TEST(InducedComponents, Examples) {
  auto p3 = path_graph(3);
  std::vector<VertexSet> two{{0}, {2}};
  EXPECT_EQ(induced_components(p3, {0, 2}), two);
  std::vector<VertexSet> one{{0, 1, 2}};
  EXPECT_EQ(induced_components(p3, {0, 1, 2}), one);
  EXPECT_TRUE(induced_components(complete_graph(3), {}).empty());
}

TEST(InducedComponents, PartitionIntoConnectedPieces) {
  Rng rng(23);
  for (int trial = 0; trial < 100; ++trial) {
    auto g = llc::testing::random_bounded_graph(rng, 10, 3, 0.4);
    VertexSet s;
    for (int v = 0; v < 10; ++v)
      if (llc::testing::uniform(rng, 0, 1) < 0.6) s.push_back(v);
    auto comps = induced_components(g, s);
    VertexSet joined;
    for (const auto& c : comps) {
      EXPECT_TRUE(is_connected_subset(g, c));
      joined.insert(joined.end(), c.begin(), c.end());
    }
    std::sort(joined.begin(), joined.end());
    EXPECT_EQ(joined, s);
    for (std::size_t i = 0; i < comps.size(); ++i)
      for (std::size_t j = i + 1; j < comps.size(); ++j)
        for (int a : comps[i])
          for (int b : comps[j]) EXPECT_FALSE(g.adjacent(a, b));
  }
}

TEST(EdgeList, ParsesAndRejects) {
  std::istringstream ok("# comment\n4 3\n0 1\n1 2\n2 3\n");
  auto g = read_edge_list(ok);
  EXPECT_EQ(g.vertex_count(), 4);
  EXPECT_EQ(g.edge_count(), 3u);
  std::istringstream loop("2 1\n1 1\n");
  EXPECT_THROW(read_edge_list(loop), ParseError);
  std::istringstream range("2 1\n0 5\n");
  EXPECT_THROW(read_edge_list(range), ParseError);
  std::istringstream junk("2 1\n0 x\n");
  try {
    read_edge_list(junk);
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2);
  }
}
