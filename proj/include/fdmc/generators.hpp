#pragma once

// Instance factories: seeded random instances, planted fair solutions, and
// the Multicolored Clique reduction with its forward witness.

#include "fdmc/core.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

namespace fdmc {

struct RandomSpec {
  int m = 4;
  int n = 2;
  int p = 2;
  /// Rows per color (index z-1); must sum to m. Empty means one color.
  std::vector<int> color_counts;
  int k = 1;
  int r = 1;
  std::uint64_t seed = 1;
};

/// Uniform entries; colors are shuffled with the requested counts.
Instance gen_random(const RandomSpec& spec);

/// Convenience form with c colors as evenly spread as possible.
Instance gen_random(int m, int n, int p, int c, int k, int r, std::uint64_t seed);

struct PlantedCluster {
  RowType center;
  /// Rows per color in this cluster; must be proportional to the global counts.
  std::vector<int> color_counts;
};

/// Builds the fair matrix given by `clusters` (rows in cluster order) and
/// flips exactly `noise_edits` distinct cells to another value.
/// The instance has k = noise_edits and r = number of distinct centers;
/// the returned solution is the planted matrix.
std::pair<Instance, Solution> gen_planted(const std::vector<PlantedCluster>& clusters, int p, int noise_edits,
                                          std::uint64_t seed);

/// Random planted instance: `clusters` random centers over n binary columns,
/// each holding `fairlets` copies of a fixed composition.
std::pair<Instance, Solution> gen_planted(int clusters, int n, std::span<const int> composition, int fairlets,
                                          int noise_edits, std::uint64_t seed);

/// Simple graph with vertex colors 1..q; vertices are 0-based.
struct ColoredGraph {
  int vertices = 0;
  std::vector<int> color;
  std::vector<std::pair<int, int>> edges;  // u < v

  int colors() const;
};

/// Random properly colored graph with a planted multicolored clique on the
/// first vertex of every color class. Returns the graph and the clique.
std::pair<ColoredGraph, std::vector<int>> gen_clique_graph(int q, int vertices, double edge_prob,
                                                           std::uint64_t seed);

enum class GadgetKind { ColorVertex, ColorEdge, Vertex, Edge };

/// One type of the reduction. Indices follow the construction: `i`, `j`, `t`
/// are 1-based colors, `a`, `b` 0-based graph vertices (-1 when unused).
struct Gadget {
  GadgetKind kind = GadgetKind::Vertex;
  int i = 0;
  int j = 0;
  int t = 0;
  int a = -1;
  int b = -1;
  RowType row;
  std::vector<std::int64_t> rows_per_color;  // index z-1, z = 1..2q

  std::int64_t size() const;
};

struct ReductionMeta {
  int q = 0;
  int y = 0;
  int k = 0;
  int n = 0;
  int colors = 0;  // 2q
  /// Base number of rows per color and type; the construction uses k.
  std::int64_t multiplicity = 0;
  ColoredGraph graph;
  std::vector<Gadget> gadgets;  // 𝒱, then ℰ, then V_a, then E_ab
  std::int64_t rows = 0;        // sum of per-type counts
  std::int64_t aggregate_rows = 0;  // q(2kq+1) + C(q,2)(2kq-1) + 2kq(|V|+|E|)

  int color_vertex(int i, int t) const;
  int color_edge(int i, int j, int t) const;
  int vertex(int a) const;
  int edge(int a, int b) const;  // -1 if absent
};

int reduction_y(int q);
int reduction_k(int q);

/// Column offsets of the four column groups.
struct ReductionLayout {
  int q;
  int y;
  int color_block(int i) const { return (i - 1) * y; }
  int first_code(int t) const { return q * y + 2 * (t - 1); }
  int second_code(int t) const { return q * y + 4 * q + 2 * (t - 1); }
  int vertex_column(int a) const { return q * y + 8 * q + a; }
};

/// Type table of the reduction. `multiplicity` replaces k in the per-type row
/// counts (it must be at least 1); the budget stays the true k.
/// Throws InputError for q < 4 or an improper coloring.
ReductionMeta reduce_from_multicolored_clique(const ColoredGraph& g,
                                              std::optional<std::int64_t> multiplicity = {});

/// Visits every row (gadget index, color) in the instance row order without
/// materializing the matrix.
void for_each_reduction_row(const ReductionMeta& meta, const std::function<void(int gadget, int color)>& visit);

/// Materialized instance with r = number of types. Throws CapacityError when
/// the matrix would exceed `max_cells` entries.
Instance materialize(const ReductionMeta& meta, std::int64_t max_cells = 200'000'000);

/// Moves `count` rows of `color` from one gadget type to another.
struct GadgetMove {
  int from = 0;
  int to = 0;
  int color = 0;
  std::int64_t count = 0;
};

/// Forward witness as a list of moves. Throws InputError unless `clique` lists
/// q vertices with colors 1..q in order, pairwise adjacent.
std::vector<GadgetMove> clique_witness_moves(const ReductionMeta& meta, const std::vector<int>& clique);

struct CompressedVerdict {
  std::int64_t cost = 0;
  std::int64_t survivors = 0;
  std::vector<int> unfair;  // gadget indices
  bool feasible(const ReductionMeta& meta) const {
    return unfair.empty() && cost <= meta.k && survivors <= static_cast<std::int64_t>(meta.gadgets.size());
  }
};

/// Applies moves to the per-type counts and checks fairness and cost.
CompressedVerdict verify_moves(const ReductionMeta& meta, const std::vector<GadgetMove>& moves);

/// Forward witness on the materialized instance.
Solution build_clique_witness(const ReductionMeta& meta, const Instance& inst, const std::vector<int>& clique);
Solution build_clique_witness(const ReductionMeta& meta, const std::vector<int>& clique);

}  // namespace fdmc
