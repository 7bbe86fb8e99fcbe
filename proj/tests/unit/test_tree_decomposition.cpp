#include "fdmc/tree_decomposition.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <sstream>

using namespace fdmc;

namespace {

PrimalGraph random_graph(std::mt19937_64& rng, int n, double p) {
  PrimalGraph g;
  g.vertices = n;
  g.adj.assign(n, {});
  std::bernoulli_distribution edge(p);
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b)
      if (edge(rng)) {
        g.adj[a].push_back(b);
        g.adj[b].push_back(a);
      }
  return g;
}

}  // namespace

TEST(PrimalGraph, RowsSharingAOneAreAdjacent) {
  Matrix path(3, 2);
  path << 1, 0, 1, 1, 0, 1;
  const auto g = build_primal_graph(path);
  EXPECT_EQ(g.edge_count(), 2);
  EXPECT_TRUE(g.adjacent(0, 1));
  EXPECT_TRUE(g.adjacent(1, 2));
  EXPECT_FALSE(g.adjacent(0, 2));

  EXPECT_EQ(build_primal_graph(Matrix::Identity(4, 4)).edge_count(), 0);

  Matrix ones = Matrix::Zero(5, 3);
  ones.col(1).setOnes();
  EXPECT_EQ(build_primal_graph(ones).edge_count(), 10);
}

TEST(PrimalGraph, RejectsNonBinary) {
  Matrix m(1, 1);
  m << 2;
  EXPECT_THROW(build_primal_graph(m), DomainError);
}

TEST(Decomposition, SimpleWidths) {
  const auto edgeless = build_primal_graph(Matrix::Identity(4, 4));
  EXPECT_EQ(exact_treewidth(edgeless).first, 0);
  EXPECT_EQ(decomposition_from_order(edgeless, min_fill_order(edgeless)).width(), 0);

  Matrix path(3, 2);
  path << 1, 0, 1, 1, 0, 1;
  EXPECT_EQ(exact_treewidth(build_primal_graph(path)).first, 1);

  Matrix ones = Matrix::Ones(5, 1);
  EXPECT_EQ(exact_treewidth(build_primal_graph(ones)).first, 4);
}

TEST(Decomposition, CycleHasWidthTwo) {
  PrimalGraph g;
  g.vertices = 6;
  g.adj.assign(6, {});
  for (int v = 0; v < 6; ++v) {
    g.adj[v].push_back((v + 1) % 6);
    g.adj[(v + 1) % 6].push_back(v);
  }
  for (auto& a : g.adj) std::sort(a.begin(), a.end());
  EXPECT_EQ(exact_treewidth(g).first, 2);
  EXPECT_EQ(decomposition_from_order(g, min_fill_order(g)).width(), 2);
}

TEST(Decomposition, OrdersGiveValidDecompositions) {
  std::mt19937_64 rng(71);
  for (int t = 0; t < 150; ++t) {
    const int n = 1 + static_cast<int>(rng() % 11);
    const auto g = random_graph(rng, n, 0.1 + 0.08 * (t % 10));
    const auto heuristic = decomposition_from_order(g, min_fill_order(g));
    EXPECT_TRUE(decomposition_errors(g, heuristic).empty());
    const auto [width, order] = exact_treewidth(g);
    const auto exact = decomposition_from_order(g, order);
    EXPECT_TRUE(decomposition_errors(g, exact).empty());
    EXPECT_EQ(exact.width(), width);
    EXPECT_LE(width, heuristic.width());

    const auto nice = make_nice(exact);
    EXPECT_TRUE(nice_errors(g, nice).empty());
    EXPECT_EQ(nice.width(), width);
    EXPECT_TRUE(nice.nodes[nice.root].bag.empty());
  }
}

TEST(Decomposition, PaceRoundTrip) {
  std::mt19937_64 rng(72);
  const auto g = random_graph(rng, 9, 0.3);
  const auto td = decomposition_from_order(g, min_fill_order(g));
  std::istringstream in(write_pace(td));
  const auto back = read_pace(in);
  EXPECT_EQ(back.vertices, td.vertices);
  EXPECT_EQ(back.bags, td.bags);
  EXPECT_EQ(back.edges.size(), td.edges.size());
  EXPECT_TRUE(decomposition_errors(g, back).empty());
}

TEST(Decomposition, PaceParsesCommentsAndRejectsGarbage) {
  std::istringstream ok("c example\ns td 2 2 3\nb 1 1 2\nb 2 2 3\n1 2\n");
  const auto td = read_pace(ok);
  EXPECT_EQ(td.width(), 1);
  EXPECT_EQ(td.bags[0], (std::vector<int>{0, 1}));

  std::istringstream missing_header("b 1 1\n");
  EXPECT_THROW(read_pace(missing_header), InputError);
  std::istringstream bad_vertex("s td 1 1 2\nb 1 7\n");
  EXPECT_THROW(read_pace(bad_vertex), InputError);
}

TEST(Decomposition, InvalidExternalDecompositionIsRejected) {
  Matrix path(3, 2);
  path << 1, 0, 1, 1, 0, 1;
  const auto g = build_primal_graph(path);
  TreeDecomposition td;
  td.vertices = 3;
  td.bags = {{0, 1}, {2}};  // edge 1-2 uncovered
  td.edges = {{0, 1}};
  EXPECT_FALSE(decomposition_errors(g, td).empty());
  EXPECT_THROW(decompose(g, td), InputError);

  td.bags = {{0, 1}, {1, 2}};
  EXPECT_TRUE(decomposition_errors(g, td).empty());
  EXPECT_EQ(decompose(g, td).width(), 1);
}

TEST(Decomposition, ExactCapacity) {
  std::mt19937_64 rng(73);
  EXPECT_THROW(exact_treewidth(random_graph(rng, 20, 0.2), 16), CapacityError);
}
