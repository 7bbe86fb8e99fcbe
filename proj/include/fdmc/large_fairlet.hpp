#pragma once

// Exact solver for instances whose fairlet size exceeds the budget. In that
// regime no new type can appear and fair clusters never change, so only the
// unfair clusters exchange rows.

#include "fdmc/oracle.hpp"

#include <optional>
#include <vector>

namespace fdmc {

/// Target cluster size per unfair type (parallel to `types`).
struct SizeBranch {
  std::vector<int> types;
  std::vector<int> target_size;
};

/// Signed per-(type, color) row demand of a size branch: positive entries are
/// incoming half-edges, negative entries outgoing ones.
struct HalfEdgeDemand {
  std::vector<int> types;
  Eigen::MatrixXi demand;  // types x c
};

struct RowMove {
  int from_type = 0;
  int to_type = 0;
  int color = 0;
  int count = 0;

  auto operator<=>(const RowMove&) const = default;
};

struct HalfEdgeMatching {
  long long cost = 0;
  std::vector<RowMove> moves;  // type ids as given in the demand
};

/// Cluster sizes c̃·i (i >= 0) within distance k of `size`.
std::vector<int> candidate_sizes(int size, int k, int fairlet);

/// Demand of one branch; `table` supplies current color counts.
HalfEdgeDemand branch_demand(const TypeTable& table, std::span<const int> fairlet_comp,
                             int fairlet, const SizeBranch& branch);

/// Minimum-cost pairing of outgoing with incoming half-edges of equal color;
/// a pair costs the distance between its two types. `distance` is indexed by
/// positions in `demand.types`. Returns nullopt if some color is unbalanced.
/// With `exhaustive`, every permutation pairing is tried instead of solving an
/// assignment problem.
std::optional<HalfEdgeMatching> match_half_edges(const HalfEdgeDemand& demand,
                                                 const Eigen::MatrixXi& distance,
                                                 bool exhaustive = false);

struct LargeFairletOptions {
  bool exhaustive_matching = false;
};

/// Requires fairlet size > k; throws DomainError otherwise. Reports the
/// optimum only when it is within budget.
OracleResult solve_large_fairlet(const Instance& inst, const LargeFairletOptions& opts = {});

/// Applies aggregated moves (type ids of `table`) to a copy of the input,
/// taking the lowest-indexed rows of each color.
Matrix apply_moves(const Instance& inst, const TypeTable& table, std::span<const RowMove> moves,
                   std::span<const RowType> target_types = {});

}  // namespace fdmc
