#include <gtest/gtest.h>

#include "nrcs/graph.hpp"
#include "nrcs/model.hpp"
#include "support.hpp"

using namespace nrcs;
using nrcs::testing::directed_chain;
using nrcs::testing::random_edges;
using nrcs::testing::random_tree;

namespace {

Pattern pattern(int rows, int cols, std::initializer_list<std::pair<int, int>> ones) {
  Pattern p = Pattern::Constant(rows, cols, false);
  for (const auto& [i, j] : ones) p(i, j) = true;
  return p;
}

}  // namespace

TEST(DiGraph, RejectsBadEdges) {
  EXPECT_THROW(DiGraph(2, {{1, 3}}), Error);
  EXPECT_THROW(DiGraph(2, {{1, 1}}), Error);
  EXPECT_THROW(DiGraph(2, {{1, 2}, {1, 2}}), Error);
  EXPECT_THROW(DiGraph(0, {}), Error);
}

TEST(DiGraph, NeighborsAndIndex) {
  const DiGraph g(3, {{1, 2}, {3, 2}, {2, 1}});
  EXPECT_EQ(g.in_neighbors(2), (std::vector<int>{1, 3}));
  EXPECT_EQ(g.out_neighbors(2), (std::vector<int>{1}));
  EXPECT_EQ(g.edge_index(3, 2), 1);
  EXPECT_EQ(g.edge_index(2, 3), -1);
  EXPECT_TRUE(g.has_edge(2, 1));
}

TEST(DiGraph, InducedRelabels) {
  const DiGraph g(4, {{1, 2}, {2, 4}, {4, 3}, {3, 1}});
  const DiGraph h = g.induced({2, 3, 4});
  EXPECT_EQ(h.vertex_count(), 3);
  EXPECT_EQ(h.edges(), (std::vector<Edge>{{1, 3}, {3, 2}}));
}

TEST(Reachability, ChainFromHead) {
  const DiGraph g(3, directed_chain(3));
  EXPECT_EQ(input_reachable_set(g, {1}), (VertexSet{1, 2, 3}));
  EXPECT_TRUE(is_globally_input_reachable(g, {1}));
}

TEST(Reachability, ChainFromMiddle) {
  const DiGraph g(3, directed_chain(3));
  EXPECT_EQ(input_reachable_set(g, {2}), (VertexSet{2, 3}));
  EXPECT_EQ(unreachable_vertices(g, {2}), (VertexSet{1}));
}

TEST(Reachability, ChainFromTail) {
  EXPECT_FALSE(is_globally_input_reachable(DiGraph(3, directed_chain(3)), {3}));
}

TEST(Reachability, NoEdges) { EXPECT_EQ(input_reachable_set(DiGraph(2, {}), {1}), (VertexSet{1})); }

TEST(Reachability, DisjointChainsOneDriverEach) {
  const DiGraph g(5, {{1, 2}, {2, 3}, {4, 5}});
  EXPECT_TRUE(is_globally_input_reachable(g, {1, 4}));
  EXPECT_FALSE(is_globally_input_reachable(g, {1}));
}

TEST(Reachability, BadDriverRejected) {
  EXPECT_THROW(input_reachable_set(DiGraph(2, {}), {3}), Error);
}

TEST(Forest, ChainSingleTree) {
  const SpanningForest f = rooted_spanning_forest(DiGraph(3, directed_chain(3)), {1});
  ASSERT_EQ(f.trees.size(), 1u);
  EXPECT_EQ(f.trees[0].order, (std::vector<int>{1, 2, 3}));
  EXPECT_EQ(f.trees[0].parent.at(3), 2);
}

TEST(Forest, Star) {
  const SpanningForest f = rooted_spanning_forest(DiGraph(4, {{1, 2}, {1, 3}, {1, 4}}), {1});
  ASSERT_EQ(f.trees.size(), 1u);
  EXPECT_EQ(f.trees[0].order, (std::vector<int>{1, 2, 3, 4}));
  for (int v = 2; v <= 4; ++v) EXPECT_EQ(f.trees[0].parent.at(v), 1);
}

TEST(Forest, UnreachableVertexListed) {
  try {
    rooted_spanning_forest(DiGraph(4, {{1, 2}, {3, 4}}), {1});
    FAIL() << "expected NoForestError";
  } catch (const NoForestError& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kNoForest);
    EXPECT_EQ(e.unreachable(), (VertexSet{3, 4}));
    EXPECT_NE(std::string(e.what()).find("{3,4}"), std::string::npos);
  }
}

TEST(Forest, RandomGraphInvariants) {
  RandomSource rng(21);
  int built = 0;
  for (int t = 0; t < 200; ++t) {
    const int N = rng.uniform_int(1, 9);
    const DiGraph g(N, random_edges(rng, N, 0.3));
    VertexSet drivers{rng.uniform_int(1, N)};
    if (rng.unit() < 0.5) drivers.push_back(rng.uniform_int(1, N));
    std::sort(drivers.begin(), drivers.end());
    drivers.erase(std::unique(drivers.begin(), drivers.end()), drivers.end());
    if (!is_globally_input_reachable(g, drivers)) {
      EXPECT_THROW(rooted_spanning_forest(g, drivers), NoForestError);
      continue;
    }
    ++built;
    const SpanningForest f = rooted_spanning_forest(g, drivers);
    EXPECT_EQ(f.trees.size(), drivers.size());
    EXPECT_EQ(f.edge_count(), N - static_cast<int>(f.trees.size()));
    std::vector<int> seen(N + 1, 0);
    for (const RootedTree& tree : f.trees) {
      EXPECT_EQ(tree.order.front(), tree.root);
      for (int k = 0; k < tree.size(); ++k) {
        const int v = tree.order[k];
        ++seen[v];
        if (k == 0) continue;
        const int p = tree.parent.at(v);
        EXPECT_TRUE(g.has_edge(p, v));
        const auto pos = std::find(tree.order.begin(), tree.order.end(), p) - tree.order.begin();
        EXPECT_LT(pos, k);
      }
    }
    for (int v = 1; v <= N; ++v) EXPECT_EQ(seen[v], 1);
  }
  EXPECT_GT(built, 20);
}

TEST(Incidence, SingleEdge) {
  const IncidencePair inc = incidence_matrices(DiGraph(2, {{1, 2}}));
  EXPECT_EQ(inc.K_I, (Matrix(1, 2) << 1, -1).finished());
  EXPECT_EQ(inc.K, (Matrix(2, 1) << 0, 1).finished());
  const double w = 2.5;
  const Matrix L = -inc.K * w * inc.K_I;
  EXPECT_EQ(L, (Matrix(2, 2) << 0, 0, -w, w).finished());
}

TEST(Incidence, BothDirections) {
  const IncidencePair inc = incidence_matrices(DiGraph(2, {{1, 2}, {2, 1}}));
  EXPECT_EQ(inc.K_I, (Matrix(2, 2) << 1, -1, -1, 1).finished());
  EXPECT_EQ(inc.K, (Matrix(2, 2) << 0, 1, 1, 0).finished());
}

TEST(Incidence, ChainOfThree) {
  const IncidencePair inc = incidence_matrices(DiGraph(3, directed_chain(3)));
  EXPECT_EQ(inc.K_I, (Matrix(2, 3) << 1, -1, 0, 0, 1, -1).finished());
  EXPECT_FALSE(inc.degenerate);
  EXPECT_TRUE(incidence_matrices(DiGraph(3, {})).degenerate);
}

TEST(Incidence, FactorizesLaplacianOnRandomGraphs) {
  RandomSource rng(22);
  for (int t = 0; t < 200; ++t) {
    const int N = rng.uniform_int(1, 7);
    const DiGraph g(N, random_edges(rng, N, 0.4));
    Vector w(g.edge_count());
    for (int k = 0; k < w.size(); ++k) w(k) = rng.uniform_signed() * 3.0;
    const IncidencePair inc = incidence_matrices(g);
    const Matrix L = -inc.K * w.asDiagonal() * inc.K_I;
    EXPECT_LT(L.rowwise().sum().cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_LT((L - nrcs::testing::laplacian_oracle(N, g.edges(), w)).cwiseAbs().maxCoeff(), 1e-12);
    std::map<Edge, double> map;
    for (int k = 0; k < g.edge_count(); ++k) map[g.edges()[k]] = w(k);
    EXPECT_LT((L - laplacian_from_weights(NetworkTopology(g, {1}), map)).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(Cycles, ChainIsAcyclic) { EXPECT_TRUE(cycle_vertices(DiGraph(3, directed_chain(3))).empty()); }

TEST(Cycles, TwoCycle) { EXPECT_EQ(cycle_vertices(DiGraph(2, {{1, 2}, {2, 1}})), (VertexSet{1, 2})); }

TEST(Cycles, SelfLoopOnly) {
  const AuxGraph aux(pattern(3, 3, {{1, 1}}), Pattern(3, 0));
  EXPECT_EQ(cycle_vertices(aux), (VertexSet{2}));
  const Adjacency adj{{1}, {1}, {}};
  EXPECT_EQ(cycle_vertices(adj), (std::vector<int>{1}));
}

TEST(Cycles, SccMatchesTransitiveClosure) {
  RandomSource rng(23);
  for (int t = 0; t < 100; ++t) {
    const int N = rng.uniform_int(1, 8);
    const DiGraph g(N, random_edges(rng, N, 0.25));
    // Floyd-Warshall closure as the oracle.
    std::vector<std::vector<bool>> reach(N, std::vector<bool>(N, false));
    for (const auto& [i, j] : g.edges()) reach[i - 1][j - 1] = true;
    for (int k = 0; k < N; ++k)
      for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j)
          if (reach[i][k] && reach[k][j]) reach[i][j] = true;
    VertexSet expected;
    for (int v = 0; v < N; ++v)
      if (reach[v][v]) expected.push_back(v + 1);
    EXPECT_EQ(cycle_vertices(g), expected);
    const std::vector<int> comp = strongly_connected_components(adjacency_of(g));
    for (int i = 0; i < N; ++i)
      for (int j = 0; j < N; ++j)
        EXPECT_EQ(comp[i] == comp[j], i == j || (reach[i][j] && reach[j][i]));
  }
}

TEST(AuxGraphTest, NoStateEdgesMeansNoCycles) {
  EXPECT_TRUE(every_cycle_input_reachable(AuxGraph(pattern(2, 2, {}), pattern(2, 1, {}))));
}

TEST(AuxGraphTest, SwapCycleReachedThroughVertexOne) {
  const Pattern H = pattern(2, 2, {{0, 1}, {1, 0}});
  EXPECT_TRUE(every_cycle_input_reachable(AuxGraph(H, pattern(2, 1, {{0, 0}}))));
  EXPECT_FALSE(every_cycle_input_reachable(AuxGraph(H, pattern(2, 1, {}))));
}

TEST(AuxGraphTest, EdgeDirectionFollowsColumns) {
  // H(1,0) set: v_1 -> v_2. Input into v_2 cannot reach v_1.
  const AuxGraph aux(pattern(2, 2, {{1, 0}}), pattern(2, 1, {{1, 0}}));
  EXPECT_EQ(aux.input_reachable_states(), (VertexSet{2}));
}

TEST(AuxGraphTest, AddingInputsIsMonotone) {
  RandomSource rng(24);
  for (int t = 0; t < 200; ++t) {
    const int n = rng.uniform_int(1, 7);
    const int m = rng.uniform_int(0, 3);
    Pattern H(n, n), P(n, m + 1);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) H(i, j) = rng.unit() < 0.3;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j <= m; ++j) P(i, j) = rng.unit() < 0.2;
    const bool before = every_cycle_input_reachable(AuxGraph(H, P.leftCols(m)));
    const bool after = every_cycle_input_reachable(AuxGraph(H, P));
    if (before) {
      EXPECT_TRUE(after);
    }
  }
}

TEST(AuxGraphTest, NonzeroPatternThreshold) {
  const Matrix m = (Matrix(2, 2) << 0, 1e-14, 2, -3).finished();
  const Pattern p = nonzero_pattern(m, 1e-12);
  EXPECT_FALSE(p(0, 0));
  EXPECT_FALSE(p(0, 1));
  EXPECT_TRUE(p(1, 0));
  EXPECT_TRUE(p(1, 1));
}

TEST(Forest, RandomTreesRootedAtRoot) {
  RandomSource rng(25);
  for (int t = 0; t < 50; ++t) {
    const int N = rng.uniform_int(1, 10);
    const int root = rng.uniform_int(1, N);
    const DiGraph g(N, random_tree(rng, N, root));
    const SpanningForest f = rooted_spanning_forest(g, {root});
    ASSERT_EQ(f.trees.size(), 1u);
    EXPECT_EQ(f.trees[0].size(), N);
    EXPECT_EQ(f.edge_count(), g.edge_count());
  }
}
