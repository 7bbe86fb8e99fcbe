#pragma once

// Exact solver parameterized by k + r: enumerate row-migration patterns with
// up to ⌊k/2⌋ new types, fix new types by majority vote, then check fairness,
// cost and the distinct-row bound.

#include "fdmc/oracle.hpp"

#include <cstdint>
#include <functional>
#include <vector>

namespace fdmc {

/// `count` rows of `color` leave type `source_type`. Destinations below the
/// number of input types are existing types; larger values denote new slots.
struct MigrationMove {
  int source_type = 0;
  int color = 0;
  int destination = 0;
  int count = 0;

  auto operator<=>(const MigrationMove&) const = default;
};

struct MigrationPattern {
  std::vector<MigrationMove> moves;
  int slots_used = 0;

  int moved_rows() const;
};

/// Every pattern moving at most k rows over the input types plus ⌊k/2⌋ new
/// slots, with each used slot fed by at least two source types. Slots are
/// labeled canonically, so slot permutations are not repeated.
/// Throws CapacityError once more than `cap` patterns are produced.
std::vector<MigrationPattern> enumerate_patterns(const Instance& inst, std::uint64_t cap = 10'000'000);

struct KPlusROptions {
  std::uint64_t cap = 200'000'000;
};

/// Exact for every instance; reports the optimum only when within budget.
OracleResult solve_k_plus_r(const Instance& inst, const KPlusROptions& opts = {});

}  // namespace fdmc
