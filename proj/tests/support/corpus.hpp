#pragma once

// Test corpora and an independent reference solver.

#include "fdmc/core.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <vector>

namespace fdmc::fixtures {

/// m=4, n=2, binary; rows 00, 01, 11, 11; colors 1,2,1,2; k=1, r=2.
Instance inst_a();

/// Every binary instance with m <= 4, n <= 2, c <= 2, k <= 3, r <= 3.
void for_each_exhaustive(const std::function<void(const Instance&)>& visit);

/// Seeded instances with m <= 6, n <= 3, p <= 3, c <= 3, k <= 3, r <= 3.
std::vector<Instance> random_corpus(int count, std::uint64_t seed);

/// Random instance with the given shape and uniformly drawn color counts.
Instance random_instance(std::mt19937_64& rng, int m, int n, int p, int c, int k, int r);

/// Minimum edits over all matrices with at most r distinct rows whose
/// clusters are fair (all clusters when `fair` is false). Brute force over
/// set partitions; independent of the library solvers.
std::optional<int> reference_optimum(const Instance& inst, bool fair = true);

/// Independent feasibility test of an edited matrix.
bool reference_feasible(const Instance& inst, const Matrix& edited, int budget);

/// Random feasible solution: a random fair partition into at most r parts,
/// each part mapped to a random center. Returns nullopt if none was found.
std::optional<Matrix> random_feasible_matrix(const Instance& inst, std::mt19937_64& rng, bool majority);

}  // namespace fdmc::fixtures
