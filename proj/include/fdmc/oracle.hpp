#pragma once

// Brute-force exact solvers used as ground truth for every other solver.

#include "fdmc/core.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>

namespace fdmc {

enum class Status { Yes, No, Unresolved };

std::string to_string(Status s);

/// Outcome of an exact (or budget-bounded) solver run.
///
/// `optimum_edits` is the minimum edit count over feasible matrices when the
/// solver determined it; it may exceed k. `witness` realizes that optimum.
/// `status` is Yes iff the optimum is at most k.
struct OracleResult {
  Status status = Status::No;
  std::optional<int> optimum_edits;
  std::optional<Solution> witness;
  std::map<std::string, std::uint64_t> counters;
};

struct PartitionSearchOptions {
  int max_rows = 10;
};

/// Enumerates every partition of the rows into at most r fair parts and
/// recenters each part by majority vote.
OracleResult solve_by_partitions(const Instance& inst, const PartitionSearchOptions& opts = {});

struct EditSearchOptions {
  /// Largest edit-set size examined; defaults to k.
  std::optional<int> max_edits;
  /// Upper bound on the number of examined edit sets.
  std::uint64_t cap = 100'000'000;
};

/// Enumerates edit sets (cells and replacement values) by increasing size and
/// returns the lexicographically smallest feasible matrix of the first size
/// that admits one.
OracleResult solve_by_edits(const Instance& inst, const EditSearchOptions& opts = {});

/// True iff every cluster of `mat` is fair and it has at most `r` distinct rows.
bool fair_with_at_most(const Matrix& mat, std::span<const int> colors, int r);

}  // namespace fdmc
