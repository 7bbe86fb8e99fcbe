#pragma once

// Exact solver for binary instances parameterized by the treewidth of the
// primal graph: dynamic programming over a nice tree decomposition.

#include "fdmc/oracle.hpp"
#include "fdmc/tree_decomposition.hpp"

#include <cstdint>
#include <optional>

namespace fdmc {

/// Edits needed in one column of a cluster of final size x holding y ones,
/// all other rows of the cluster being zero there.
int column_cost(int x, int y);

/// Number of non-zero entries.
int nonzero_count(const Matrix& mat);

/// Decides instances with 2·treewidth + 2 <= c̃: YES iff k >= nnz, with the
/// all-zero witness. Returns nullopt when the guard does not hold.
std::optional<OracleResult> trivial_case(const Instance& inst, int treewidth);

struct TreewidthOptions {
  /// Decomposition of the primal graph; computed when absent.
  std::optional<TreeDecomposition> external;
  DecomposeOptions decompose;
  /// Keep only the cheapest state per (partition, sizes, a, q).
  bool dominance = true;
  /// Maximum number of states at a single node.
  std::uint64_t state_cap = 2'000'000;
};

/// Exact optimum for binary instances; status is YES iff it is at most k.
/// Throws DomainError for non-binary input, InputError for an invalid
/// decomposition and CapacityError when a node exceeds the state cap.
OracleResult solve_treewidth(const Instance& inst, const TreewidthOptions& opts = {});

}  // namespace fdmc
