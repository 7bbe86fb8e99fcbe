#include "corpus.hpp"
#include "fdmc/treewidth.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <random>

using namespace fdmc;
using fdmc::fixtures::inst_a;

TEST(Treewidth, ColumnCostSpotValues) {
  for (int y = 0; y < 5; ++y) EXPECT_EQ(column_cost(0, y), y);
  EXPECT_EQ(column_cost(4, 2), 2);
  EXPECT_EQ(column_cost(4, 3), 1);
  EXPECT_EQ(column_cost(3, 3), 0);
  EXPECT_EQ(column_cost(5, 0), 0);
}

TEST(Treewidth, InstA) {
  const auto res = solve_treewidth(inst_a());
  EXPECT_EQ(res.status, Status::Yes);
  EXPECT_EQ(res.optimum_edits, 1);
  EXPECT_TRUE(verify_solution(inst_a(), *res.witness).feasible());
}

TEST(Treewidth, TrivialCaseOnIdentity) {
  // c̃ = 3 and width 0, so zeroing every 1 is optimal
  Instance inst = make_instance(Matrix::Identity(3, 3), {1, 2, 3}, 2, 3, 1);
  const auto yes = trivial_case(inst, 0);
  ASSERT_TRUE(yes);
  EXPECT_EQ(yes->status, Status::Yes);
  EXPECT_EQ(yes->optimum_edits, 3);
  EXPECT_TRUE((yes->witness->edited_rows.array() == 0).all());
  inst.k = 2;
  const auto no = trivial_case(inst, 0);
  ASSERT_TRUE(no);
  EXPECT_EQ(no->status, Status::No);
  EXPECT_FALSE(trivial_case(inst, 1));

  const auto full = solve_treewidth(inst);
  EXPECT_EQ(full.status, Status::No);
  EXPECT_EQ(full.counters.at("trivial"), 1u);
}

TEST(Treewidth, NonBinaryIsOutOfDomain) {
  Matrix rows(2, 1);
  rows << 0, 2;
  EXPECT_THROW(solve_treewidth(make_instance(rows, {1, 2}, 3, 1, 1)), DomainError);
  Matrix binary(2, 1);
  binary << 0, 1;
  EXPECT_THROW(solve_treewidth(make_instance(binary, {1, 2}, 3, 1, 1)), DomainError);
}

TEST(Treewidth, InvalidExternalDecomposition) {
  TreewidthOptions opts;
  opts.external = TreeDecomposition{4, {{0}, {1}, {2}, {3}}, {{0, 1}, {1, 2}, {2, 3}}};
  EXPECT_THROW(solve_treewidth(inst_a(), opts), InputError);
}

TEST(Treewidth, ExhaustiveAgreementWithReference) {
  int checked = 0;
  fixtures::for_each_exhaustive([&](const Instance& inst) {
    if (inst.r != 2 || inst.k != 2) return;  // optimum does not depend on k
    const auto res = solve_treewidth(inst);
    const auto ref = fixtures::reference_optimum(inst);
    ASSERT_EQ(res.optimum_edits, ref);
    if (res.witness) {
      Instance relaxed = inst;
      relaxed.k = *res.optimum_edits;
      EXPECT_TRUE(verify_solution(relaxed, *res.witness).feasible());
    }
    ++checked;
  });
  EXPECT_GT(checked, 1000);
}

TEST(Treewidth, RandomBinaryAgreementAndDominance) {
  std::mt19937_64 rng(81);
  for (int t = 0; t < 250; ++t) {
    const int m = 2 + static_cast<int>(rng() % 6);
    const int n = 1 + static_cast<int>(rng() % 4);
    const int c = 1 + static_cast<int>(rng() % std::min(3, m));
    const Instance inst = fixtures::random_instance(rng, m, n, 2, c, static_cast<int>(rng() % 4),
                                                   1 + static_cast<int>(rng() % 3));
    const auto ref = fixtures::reference_optimum(inst);
    TreewidthOptions plain;
    plain.dominance = false;
    const auto fast = solve_treewidth(inst);
    const auto slow = solve_treewidth(inst, plain);
    ASSERT_EQ(fast.optimum_edits, ref);
    EXPECT_EQ(slow.optimum_edits, ref);
    EXPECT_EQ(fast.status == Status::Yes, ref && *ref <= inst.k);
  }
}

TEST(Treewidth, RowAndColumnPermutationInvariance) {
  std::mt19937_64 rng(82);
  for (int t = 0; t < 60; ++t) {
    const Instance inst = fixtures::random_instance(rng, 6, 3, 2, 2, 3, 2);
    std::vector<int> rp(6), cp(3);
    std::iota(rp.begin(), rp.end(), 0);
    std::iota(cp.begin(), cp.end(), 0);
    std::shuffle(rp.begin(), rp.end(), rng);
    std::shuffle(cp.begin(), cp.end(), rng);
    Matrix rows(6, 3);
    std::vector<int> colors(6);
    for (int i = 0; i < 6; ++i) {
      colors[i] = inst.colors[rp[i]];
      for (int j = 0; j < 3; ++j) rows(i, j) = inst.rows(rp[i], cp[j]);
    }
    const Instance perm = make_instance(rows, colors, 2, inst.k, inst.r);
    EXPECT_EQ(solve_treewidth(inst).optimum_edits, solve_treewidth(perm).optimum_edits);
  }
}
