#pragma once

// Decomposition of a regular bipartite multigraph into perfect matchings.

#include <vector>

namespace fdmc {

struct BipartiteEdge {
  int left = 0;
  int right = 0;
  int label = 0;
  int weight = 0;
};

struct BipartiteMultigraph {
  int left_count = 0;
  int right_count = 0;
  std::vector<BipartiteEdge> edges;
};

/// Splits a d-regular bipartite multigraph into d perfect matchings, each a
/// list of edge indices. Even degrees are halved along Euler circuits; odd
/// degrees first peel off one matching found by augmenting paths.
/// Throws InputError on bad endpoints or a non-regular graph.
std::vector<std::vector<int>> decompose_regular_bipartite(const BipartiteMultigraph& graph);

/// Common degree of a regular bipartite multigraph; throws InputError otherwise.
int regular_degree(const BipartiteMultigraph& graph);

}  // namespace fdmc
