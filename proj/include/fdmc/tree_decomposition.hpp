#pragma once

// Primal graphs of binary matrices and tree decompositions: heuristic and
// exact construction, PACE .td text format, validation, nice conversion.

#include "fdmc/core.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace fdmc {

/// One vertex per row; rows sharing a 1 in some column are adjacent.
struct PrimalGraph {
  int vertices = 0;
  std::vector<std::vector<int>> adj;  // sorted, no loops or duplicates

  int edge_count() const;
  bool adjacent(int a, int b) const;
};

/// Throws DomainError if `mat` is not binary.
PrimalGraph build_primal_graph(const Matrix& mat);

struct TreeDecomposition {
  int vertices = 0;
  std::vector<std::vector<int>> bags;  // 0-based vertices, sorted
  std::vector<std::pair<int, int>> edges;

  int width() const;
};

/// Violated decomposition properties, empty when valid.
std::vector<std::string> decomposition_errors(const PrimalGraph& g, const TreeDecomposition& td);

/// Builds a decomposition from an elimination ordering.
TreeDecomposition decomposition_from_order(const PrimalGraph& g, const std::vector<int>& order);

/// Greedy min-fill elimination ordering; ties go to the smaller vertex.
std::vector<int> min_fill_order(const PrimalGraph& g);

/// Exact treewidth by dynamic programming over vertex subsets, with an
/// optimal elimination ordering. Throws CapacityError above `max_vertices`.
std::pair<int, std::vector<int>> exact_treewidth(const PrimalGraph& g, int max_vertices = 16);

/// PACE .td text; vertices are written 1-based.
std::string write_pace(const TreeDecomposition& td);
/// Throws InputError on malformed input.
TreeDecomposition read_pace(std::istream& in);

enum class NiceKind { Leaf, Introduce, Forget, Join };

struct NiceNode {
  NiceKind kind = NiceKind::Leaf;
  std::vector<int> bag;  // sorted
  int vertex = -1;       // introduced or forgotten vertex
  std::vector<int> children;
};

/// Rooted nice decomposition; the root and all leaves have empty bags.
struct NiceTreeDecomposition {
  std::vector<NiceNode> nodes;
  int root = -1;

  int width() const;
};

NiceTreeDecomposition make_nice(const TreeDecomposition& td);

/// Violated nice-decomposition properties, empty when valid.
std::vector<std::string> nice_errors(const PrimalGraph& g, const NiceTreeDecomposition& nice);

struct DecomposeOptions {
  /// Use the exact search when the graph has at most this many vertices.
  int exact_up_to = 12;
};

/// Validates and converts `external` if given; otherwise picks the better of
/// min-fill and (for small graphs) the exact ordering.
/// Throws InputError listing violated properties of an invalid decomposition.
NiceTreeDecomposition decompose(const PrimalGraph& g, const std::optional<TreeDecomposition>& external = {},
                                const DecomposeOptions& opts = {});

}  // namespace fdmc
