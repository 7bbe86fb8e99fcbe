#include "corpus.hpp"
#include "fdmc/core.hpp"
#include "fdmc/generators.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace fdmc;
using fdmc::fixtures::inst_a;

namespace {

RowType row(std::initializer_list<int> v) {
  RowType t(static_cast<Eigen::Index>(v.size()));
  int j = 0;
  for (int x : v) t(j++) = x;
  return t;
}

Matrix matrix(int m, int n, std::initializer_list<int> v) {
  Matrix out(m, n);
  int x = 0;
  for (int e : v) out(x / n, x % n) = e, ++x;
  return out;
}

Matrix inst_a_optimum() { return matrix(4, 2, {0, 0, 0, 0, 1, 1, 1, 1}); }

}  // namespace

TEST(Hamming, CountsDifferingCoordinates) {
  EXPECT_EQ(hamming(row({0, 0, 0, 0}), row({0, 0, 0, 0})), 0);
  EXPECT_EQ(hamming(row({0, 0, 0, 0}), row({1, 0, 1, 1})), 3);
}

TEST(Hamming, LengthMismatchThrows) { EXPECT_THROW(hamming(row({0, 1}), row({0, 1, 1})), InputError); }

TEST(Hamming, ColorVertexToVertexGadgetIsThree) {
  ColoredGraph g;
  g.vertices = 4;
  g.color = {1, 2, 3, 4};
  const auto meta = reduce_from_multicolored_clique(g, 1);
  const auto& cv = meta.gadgets[meta.color_vertex(1, 1)];
  const auto& v = meta.gadgets[meta.vertex(0)];
  EXPECT_EQ(hamming(cv.row, v.row), 3);
}

TEST(Hamming, TriangleInequalityOnRandomTriples) {
  std::mt19937_64 rng(7);
  for (int t = 0; t < 500; ++t) {
    const int n = 1 + static_cast<int>(rng() % 6);
    RowType a(n), b(n), x(n);
    for (int j = 0; j < n; ++j) a(j) = rng() % 3, b(j) = rng() % 3, x(j) = rng() % 3;
    EXPECT_LE(hamming(a, b), hamming(a, x) + hamming(x, b));
    EXPECT_EQ(hamming(a, b), hamming(b, a));
  }
}

TEST(FairletSize, GcdOfColorCounts) {
  EXPECT_EQ(fairlet_size(std::vector<int>{1, 2, 1, 2}), 2);
  EXPECT_EQ(fairlet_size(std::vector<int>{1, 1, 1, 2, 2, 2, 2, 2, 2, 3, 3, 3}), 4);
  EXPECT_EQ(fairlet_size(std::vector<int>{1, 1, 1, 1, 1}), 1);
}

TEST(FairCluster, EmptyAndBalancedAndSingleton) {
  const std::vector<int> colors{1, 2, 1, 2};
  EXPECT_TRUE(is_fair_cluster(std::vector<int>{}, colors));
  EXPECT_TRUE(is_fair_cluster(std::vector<int>{0, 1}, colors));
  EXPECT_FALSE(is_fair_cluster(std::vector<int>{2}, colors));
}

TEST(FairCluster, UnionsOfFairClustersAreFairAndSizesAreFairletMultiples) {
  std::mt19937_64 rng(11);
  for (int t = 0; t < 300; ++t) {
    const int m = 2 + static_cast<int>(rng() % 8);
    std::vector<int> colors(m);
    const int c = 1 + static_cast<int>(rng() % 3);
    for (int& z : colors) z = 1 + static_cast<int>(rng() % c);
    if (*std::max_element(colors.begin(), colors.end()) != c) continue;
    bool gap = false;
    for (int z = 1; z <= c; ++z) gap |= std::count(colors.begin(), colors.end(), z) == 0;
    if (gap) continue;
    const int fl = fairlet_size(colors);
    std::vector<std::vector<int>> fair_sets;
    for (int mask = 1; mask < (1 << m); ++mask) {
      std::vector<int> s;
      for (int i = 0; i < m; ++i)
        if (mask >> i & 1) s.push_back(i);
      if (is_fair_cluster(s, colors)) {
        EXPECT_EQ(static_cast<int>(s.size()) % fl, 0);
        fair_sets.push_back(s);
      }
    }
    for (std::size_t a = 0; a < fair_sets.size() && a < 20; ++a) {
      for (std::size_t b = 0; b < fair_sets.size() && b < 20; ++b) {
        std::vector<int> u = fair_sets[a];
        bool disjoint = true;
        for (int x : fair_sets[b]) {
          disjoint &= std::find(u.begin(), u.end(), x) == u.end();
          u.push_back(x);
        }
        if (disjoint) {
          EXPECT_TRUE(is_fair_cluster(u, colors));
        }
      }
    }
  }
}

TEST(VerifySolution, SevenEditsToTwoCentersWithoutColors) {
  const Matrix rows = matrix(6, 4, {1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 0, 1, 0, 0, 1, 1, 1, 1, 1, 1, 0, 1, 1, 1});
  const Matrix edited = matrix(6, 4, {0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1, 0, 1, 1, 1, 0, 1, 1, 1, 0, 1, 1});
  const Instance inst = make_instance(rows, std::vector<int>(6, 1), 2, 7, 2);
  EXPECT_EQ(distinct_rows(rows), 6);
  const Solution sol = make_solution(inst, edited);
  EXPECT_EQ(sol.edit_count, 7);
  EXPECT_EQ(sol.distinct_types, 2);
  EXPECT_TRUE(verify_solution(inst, sol).feasible());
}

TEST(VerifySolution, InstAOptimumIsFeasible) {
  const Instance inst = inst_a();
  const Solution sol = make_solution(inst, inst_a_optimum());
  EXPECT_EQ(sol.edit_count, 1);
  EXPECT_TRUE(verify_solution(inst, sol).feasible());
}

TEST(VerifySolution, UneditedInstAIsUnfair) {
  const Instance inst = inst_a();
  const Verdict v = verify_solution(inst, make_solution(inst, inst.rows));
  EXPECT_FALSE(v.feasible());
  EXPECT_TRUE(v.unfair_cluster);
  EXPECT_FALSE(v.violations.empty());
}

TEST(VerifySolution, ReportsEveryViolation) {
  Instance inst = inst_a();
  inst.k = 0;
  inst.r = 1;
  const Verdict v = verify_solution(inst, make_solution(inst, inst_a_optimum()));
  EXPECT_TRUE(v.over_budget);
  EXPECT_TRUE(v.too_many_types);
  EXPECT_FALSE(v.unfair_cluster);
}

TEST(VerifySolution, RejectsShapeAndDomainMismatch) {
  const Instance inst = inst_a();
  EXPECT_THROW(make_solution(inst, Matrix::Zero(3, 2)), InputError);
  Solution bad = make_solution(inst, inst.rows);
  bad.edited_rows(0, 0) = 5;
  EXPECT_THROW(verify_solution(inst, bad), InputError);
}

TEST(ValidateInstance, RejectsMissingColorAndOutOfDomainEntries) {
  EXPECT_THROW(make_instance(matrix(2, 1, {0, 1}), {1, 3}, 2, 0, 1), InputError);
  EXPECT_THROW(make_instance(matrix(2, 1, {0, 2}), {1, 1}, 2, 0, 1), InputError);
  EXPECT_THROW(make_instance(matrix(2, 1, {0, 1}), {1}, 2, 0, 1), InputError);
  EXPECT_THROW(make_instance(matrix(2, 1, {0, 1}), {1, 1}, 2, -1, 1), InputError);
  EXPECT_THROW(make_instance(matrix(2, 1, {0, 1}), {1, 1}, 2, 0, 0), InputError);
}

TEST(EditGraph, IdentityHasOnlyLoops) {
  const Instance inst = inst_a();
  const EditGraph g = build_edit_graph(inst, make_solution(inst, inst.rows));
  ASSERT_EQ(g.edges.size(), 4u);
  for (const auto& e : g.edges) EXPECT_EQ(e.source, e.target);
  EXPECT_TRUE(reduce(g).edges.empty());
}

TEST(EditGraph, InstAOptimumHasOneEdge) {
  const Instance inst = inst_a();
  const EditGraph g = build_edit_graph(inst, make_solution(inst, inst_a_optimum()));
  const ReducedEditGraph rg = reduce(g);
  ASSERT_EQ(rg.edges.size(), 1u);
  const auto& e = rg.edges.front();
  EXPECT_TRUE(same_type(rg.vertices[e.source], row({0, 1})));
  EXPECT_TRUE(same_type(rg.vertices[e.target], row({0, 0})));
  EXPECT_EQ(e.color, 2);
  EXPECT_EQ(e.weight, 1);
}

TEST(EditGraph, WeightEqualsEditCountAndFairnessAgrees) {
  std::mt19937_64 rng(5);
  for (const auto& inst : fixtures::random_corpus(300, 17)) {
    Matrix edited = inst.rows;
    for (int i = 0; i < inst.m(); ++i)
      for (int j = 0; j < inst.n(); ++j)
        if (rng() % 3 == 0) edited(i, j) = static_cast<int>(rng() % inst.p);
    if (rng() % 2) {
      // collapse onto a few rows so fair clusters appear
      for (int i = 0; i < inst.m(); ++i) edited.row(i) = edited.row(static_cast<int>(rng() % 2) % inst.m());
    }
    const Solution sol = make_solution(inst, edited);
    const EditGraph g = build_edit_graph(inst, sol);
    EXPECT_EQ(g.total_weight(), sol.edit_count);
    ASSERT_EQ(static_cast<int>(g.edges.size()), inst.m());
    for (int t = 0; t < inst.m(); ++t) {
      EXPECT_EQ(g.edges[t].row, t);
      EXPECT_EQ(g.edges[t].weight, hamming(inst.rows.row(t), edited.row(t)));
    }
    // every cluster fair  <=>  in-edge set of every vertex fair
    bool all_fair = true;
    for (std::size_t v = 0; v < g.vertices.size(); ++v) {
      std::vector<EditEdge> in;
      for (const auto& e : g.edges)
        if (e.target == static_cast<int>(v)) in.push_back(e);
      all_fair &= is_fair_edge_set(in, inst.colors);
    }
    Instance relaxed = inst;
    relaxed.k = inst.m() * inst.n();
    relaxed.r = inst.m();
    EXPECT_EQ(all_fair, verify_solution(relaxed, sol).feasible());
  }
}

TEST(Majority, SingletonsAreIdentity) {
  const Instance inst = inst_a();
  const Solution sol = majority_recenter(inst, std::vector<int>{0, 1, 2, 3});
  EXPECT_EQ(sol.edit_count, 0);
  EXPECT_TRUE((sol.edited_rows.array() == inst.rows.array()).all());
}

TEST(Majority, ThreeRowPartVotesColumnwise) {
  const Instance inst = make_instance(matrix(3, 2, {0, 0, 0, 1, 1, 1}), {1, 1, 1}, 2, 2, 1);
  const Solution sol = majority_recenter(inst, std::vector<int>{0, 0, 0});
  EXPECT_TRUE(same_type(sol.edited_rows.row(0), row({0, 1})));
  EXPECT_EQ(sol.edit_count, 2);
}

TEST(Majority, InstAPairsGiveOneEdit) {
  const Instance inst = inst_a();
  const Solution sol = majority_recenter(inst, std::vector<int>{0, 0, 1, 1});
  EXPECT_TRUE(same_type(sol.edited_rows.row(0), row({0, 0})));
  EXPECT_TRUE(same_type(sol.edited_rows.row(2), row({1, 1})));
  EXPECT_EQ(sol.edit_count, 1);
}

TEST(Majority, NeverWorseThanAnyConstantPerPartMatrix) {
  std::mt19937_64 rng(23);
  for (const auto& inst : fixtures::random_corpus(200, 29)) {
    std::vector<int> part(inst.m());
    for (int& x : part) x = static_cast<int>(rng() % 3);
    const int got = majority_recenter(inst, part).edit_count;
    int best = 0;
    for (int b = 0; b < 3; ++b) {
      std::vector<int> rows;
      for (int i = 0; i < inst.m(); ++i)
        if (part[i] == b) rows.push_back(i);
      if (rows.empty()) continue;
      int total = 1;
      for (int j = 0; j < inst.n(); ++j) total *= inst.p;
      int part_best = -1;
      for (int code = 0; code < total; ++code) {
        RowType center(inst.n());
        int x = code;
        for (int j = 0; j < inst.n(); ++j) center(j) = x % inst.p, x /= inst.p;
        int cost = 0;
        for (int i : rows) cost += hamming(inst.rows.row(i), center);
        if (part_best < 0 || cost < part_best) part_best = cost;
      }
      best += part_best;
    }
    EXPECT_EQ(got, best);
  }
}

TEST(UnfairTypes, InstAHasTwo) {
  const auto types = unfair_types(inst_a());
  ASSERT_EQ(types.size(), 2u);
  EXPECT_TRUE(same_type(types[0], row({0, 0})));
  EXPECT_TRUE(same_type(types[1], row({0, 1})));
}

TEST(UnfairTypes, IdenticalRowsAndSingleColorHaveNone) {
  EXPECT_TRUE(unfair_types(make_instance(matrix(2, 2, {1, 0, 1, 0}), {1, 2}, 2, 0, 1)).empty());
  EXPECT_TRUE(unfair_types(make_instance(matrix(3, 1, {0, 1, 1}), {1, 1, 1}, 2, 0, 1)).empty());
}

TEST(TypeTable, CountsAndDistances) {
  const TypeTable t = tabulate(inst_a());
  ASSERT_EQ(t.size(), 3);
  EXPECT_EQ(t.color_counts(2, 0), 1);
  EXPECT_EQ(t.color_counts(2, 1), 1);
  EXPECT_EQ(t.distance(0, 2), 2);
  EXPECT_EQ(t.find(row({1, 1})), 2);
  EXPECT_EQ(t.find(row({1, 0})), -1);
  EXPECT_EQ(t.fair, (std::vector<bool>{false, false, true}));
}
