#include "fdmc/large_fairlet.hpp"

#include "fdmc/assignment.hpp"

#include <algorithm>
#include <map>

namespace fdmc {

std::vector<int> candidate_sizes(int size, int k, int fairlet) {
  std::vector<int> out;
  const int lo = std::max(0, size - k);
  for (int t = (lo + fairlet - 1) / fairlet * fairlet; t <= size + k; t += fairlet) out.push_back(t);
  return out;
}

HalfEdgeDemand branch_demand(const TypeTable& table, std::span<const int> fairlet_comp,
                             int fairlet, const SizeBranch& branch) {
  const int c = static_cast<int>(fairlet_comp.size());
  HalfEdgeDemand d{branch.types, Eigen::MatrixXi::Zero(static_cast<Eigen::Index>(branch.types.size()), c)};
  for (std::size_t u = 0; u < branch.types.size(); ++u) {
    const int fairlets = branch.target_size[u] / fairlet;
    for (int z = 0; z < c; ++z) {
      d.demand(static_cast<Eigen::Index>(u), z) =
          fairlet_comp[z] * fairlets - table.color_counts(branch.types[u], z);
    }
  }
  return d;
}

namespace {

std::vector<RowMove> aggregate(std::vector<RowMove> moves) {
  std::sort(moves.begin(), moves.end());
  std::vector<RowMove> out;
  for (const auto& mv : moves) {
    if (!out.empty() && out.back().from_type == mv.from_type && out.back().to_type == mv.to_type &&
        out.back().color == mv.color) {
      out.back().count += mv.count;
    } else {
      out.push_back(mv);
    }
  }
  return out;
}

}  // namespace

std::optional<HalfEdgeMatching> match_half_edges(const HalfEdgeDemand& demand,
                                                 const Eigen::MatrixXi& distance, bool exhaustive) {
  HalfEdgeMatching out;
  std::vector<RowMove> moves;
  const int c = static_cast<int>(demand.demand.cols());
  const int types = static_cast<int>(demand.types.size());
  for (int z = 0; z < c; ++z) {
    std::vector<int> outgoing, incoming;
    for (int u = 0; u < types; ++u) {
      const int d = demand.demand(u, z);
      for (int x = 0; x < -d; ++x) outgoing.push_back(u);
      for (int x = 0; x < d; ++x) incoming.push_back(u);
    }
    if (outgoing.size() != incoming.size()) return std::nullopt;
    const int h = static_cast<int>(outgoing.size());
    if (h == 0) continue;

    std::vector<int> pairing(h);
    if (exhaustive) {
      std::vector<int> perm(h);
      for (int i = 0; i < h; ++i) perm[i] = i;
      long long best = -1;
      do {
        long long cost = 0;
        for (int i = 0; i < h; ++i) cost += distance(outgoing[i], incoming[perm[i]]);
        if (best < 0 || cost < best) {
          best = cost;
          pairing = perm;
        }
      } while (std::next_permutation(perm.begin(), perm.end()));
      out.cost += best;
    } else {
      Eigen::MatrixXi cost(h, h);
      for (int i = 0; i < h; ++i) {
        for (int j = 0; j < h; ++j) cost(i, j) = distance(outgoing[i], incoming[j]);
      }
      const auto assignment = min_cost_assignment(cost);
      out.cost += assignment.cost;
      pairing = assignment.column_of_row;
    }
    for (int i = 0; i < h; ++i) {
      moves.push_back({demand.types[outgoing[i]], demand.types[incoming[pairing[i]]], z + 1, 1});
    }
  }
  out.moves = aggregate(std::move(moves));
  return out;
}

Matrix apply_moves(const Instance& inst, const TypeTable& table, std::span<const RowMove> moves,
                   std::span<const RowType> target_types) {
  Matrix out = inst.rows;
  // next unused position per (type, color) within the type's row list
  std::map<std::pair<int, int>, std::size_t> cursor;
  for (const auto& mv : moves) {
    const auto& rows = table.rows_of_type[mv.from_type];
    auto& pos = cursor[{mv.from_type, mv.color}];
    for (int x = 0; x < mv.count; ++x) {
      while (pos < rows.size() && inst.colors[rows[pos]] != mv.color) ++pos;
      if (pos == rows.size()) throw std::logic_error("apply_moves: not enough rows of the color");
      const RowType& dest = target_types.empty() ? table.types[mv.to_type] : target_types[mv.to_type];
      out.row(rows[pos]) = dest;
      ++pos;
    }
  }
  return out;
}

OracleResult solve_large_fairlet(const Instance& inst, const LargeFairletOptions& opts) {
  validate(inst);
  const int fairlet = fairlet_size(inst.colors);
  if (fairlet <= inst.k) {
    throw DomainError("large-fairlet solver requires fairlet size > k (fairlet " +
                      std::to_string(fairlet) + ", k " + std::to_string(inst.k) + ")");
  }
  const auto comp = fairlet_composition(inst.colors);
  const TypeTable table = tabulate(inst);
  const int k = inst.k;

  SizeBranch branch;
  int fair_types = 0;
  for (int t = 0; t < table.size(); ++t) {
    if (table.fair[t]) {
      ++fair_types;
    } else {
      branch.types.push_back(t);
    }
  }

  OracleResult res;
  const int unfair = static_cast<int>(branch.types.size());
  if (unfair > 2 * k) {
    res.counters["rejected_unfair_types"] = static_cast<std::uint64_t>(unfair);
    return res;
  }

  std::vector<std::vector<int>> options(unfair);
  for (int u = 0; u < unfair; ++u) {
    options[u] = candidate_sizes(static_cast<int>(table.rows_of_type[branch.types[u]].size()), k, fairlet);
    if (options[u].empty()) return res;
  }
  Eigen::MatrixXi distance(unfair, unfair);
  for (int a = 0; a < unfair; ++a) {
    for (int b = 0; b < unfair; ++b) distance(a, b) = table.distance(branch.types[a], branch.types[b]);
  }

  std::optional<HalfEdgeMatching> best;
  std::uint64_t branches = 0, matched = 0;
  std::vector<int> choice(unfair, 0);
  branch.target_size.assign(unfair, 0);
  while (true) {
    ++branches;
    int survivors = fair_types;
    for (int u = 0; u < unfair; ++u) {
      branch.target_size[u] = options[u][choice[u]];
      if (branch.target_size[u] > 0) ++survivors;
    }
    if (survivors <= inst.r) {
      const auto demand = branch_demand(table, comp, fairlet, branch);
      const long long incoming = demand.demand.cwiseMax(0).sum();
      if (incoming <= k) {
        auto matching = match_half_edges(demand, distance, opts.exhaustive_matching);
        if (matching && matching->cost <= k) {
          ++matched;
          if (!best || matching->cost < best->cost) best = std::move(matching);
        }
      }
    }
    int u = unfair - 1;
    while (u >= 0 && choice[u] + 1 == static_cast<int>(options[u].size())) choice[u--] = 0;
    if (u < 0) break;
    ++choice[u];
  }
  res.counters["branches"] = branches;
  res.counters["matched_branches"] = matched;
  if (!best) return res;

  Solution sol = make_solution(inst, apply_moves(inst, table, best->moves));
  if (sol.edit_count != best->cost || !verify_solution(inst, sol).feasible()) {
    throw std::logic_error("large-fairlet witness failed verification");
  }
  res.status = Status::Yes;
  res.optimum_edits = sol.edit_count;
  res.witness = std::move(sol);
  return res;
}

}  // namespace fdmc
