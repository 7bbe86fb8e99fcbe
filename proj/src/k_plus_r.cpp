#include "fdmc/k_plus_r.hpp"

#include "fdmc/large_fairlet.hpp"

#include <algorithm>
#include <map>

namespace fdmc {

int MigrationPattern::moved_rows() const {
  int total = 0;
  for (const auto& mv : moves) total += mv.count;
  return total;
}

namespace {

struct Kind {
  int source;
  int color;  // 1-based
  int destination;
};

// Depth-first enumeration of move multisets. Each multiset is visited once;
// slots are opened in canonical order (a new slot must be the lowest unused).
class PatternWalker {
 public:
  using Visit = std::function<void(const std::vector<MigrationMove>&, int slots_used)>;

  PatternWalker(const TypeTable& table, int colors, int k, std::uint64_t cap, bool prune_cost)
      : table_(table), k_(k), cap_(cap), prune_cost_(prune_cost) {
    const int types = table.size();
    slots_ = k / 2;
    for (int s = 0; s < types; ++s) {
      for (int z = 1; z <= colors; ++z) {
        if (table.color_counts(s, z - 1) == 0) continue;
        for (int d = 0; d < types + slots_; ++d) {
          if (d != s) kinds_.push_back({s, z, d});
        }
      }
    }
    used_ = Eigen::MatrixXi::Zero(types, colors);
    slot_sources_.assign(slots_, {});
  }

  std::uint64_t visited() const { return visited_; }

  void run(const Visit& visit) {
    visit_ = &visit;
    walk(0, 0, 0);
  }

 private:
  bool slots_valid() const {
    for (int j = 0; j < slots_used_; ++j) {
      int distinct = 0;
      for (const auto& [src, n] : slot_sources_[j]) distinct += n > 0 ? 1 : 0;
      if (distinct < 2) return false;
    }
    return true;
  }

  void walk(std::size_t start, int moved, long long cost) {
    if (slots_valid()) {
      if (++visited_ > cap_) {
        throw CapacityError("pattern enumeration exceeded cap of " + std::to_string(cap_), visited_);
      }
      (*visit_)(current_, slots_used_);
    }
    if (moved == k_) return;
    const int types = table_.size();
    for (std::size_t i = start; i < kinds_.size(); ++i) {
      const Kind& kd = kinds_[i];
      const bool to_slot = kd.destination >= types;
      const int slot = kd.destination - types;
      if (to_slot && slot > slots_used_) continue;
      const int avail = table_.color_counts(kd.source, kd.color - 1) - used_(kd.source, kd.color - 1);
      const int step = to_slot ? 0 : table_.distance(kd.source, kd.destination);
      const bool opens = to_slot && slot == slots_used_;
      for (int n = 1; n <= std::min(avail, k_ - moved); ++n) {
        const long long next_cost = cost + static_cast<long long>(n) * step;
        if (prune_cost_ && next_cost > k_) break;
        used_(kd.source, kd.color - 1) += n;
        if (opens) ++slots_used_;
        if (to_slot) slot_sources_[slot][kd.source] += n;
        current_.push_back({kd.source, kd.color, kd.destination, n});
        walk(i + 1, moved + n, next_cost);
        current_.pop_back();
        if (to_slot) slot_sources_[slot][kd.source] -= n;
        if (opens) --slots_used_;
        used_(kd.source, kd.color - 1) -= n;
      }
    }
  }

  const TypeTable& table_;
  int k_;
  std::uint64_t cap_;
  bool prune_cost_;
  int slots_ = 0;
  int slots_used_ = 0;
  std::vector<Kind> kinds_;
  Eigen::MatrixXi used_;
  std::vector<std::map<int, int>> slot_sources_;
  std::vector<MigrationMove> current_;
  std::uint64_t visited_ = 0;
  const Visit* visit_ = nullptr;
};

}  // namespace

std::vector<MigrationPattern> enumerate_patterns(const Instance& inst, std::uint64_t cap) {
  validate(inst);
  const TypeTable table = tabulate(inst);
  std::vector<MigrationPattern> out;
  PatternWalker walker(table, inst.c(), inst.k, cap, false);
  walker.run([&](const std::vector<MigrationMove>& moves, int slots) {
    out.push_back({moves, slots});
  });
  return out;
}

namespace {

struct Evaluation {
  long long cost = 0;
  std::vector<RowType> destinations;  // existing types then resolved slot centers
  std::vector<RowMove> moves;
};

// Resolves slot centers, merges colliding slots and checks the pattern.
std::optional<Evaluation> evaluate(const Instance& inst, const TypeTable& table,
                                   std::span<const int> global,
                                   const std::vector<MigrationMove>& moves, int slots_used, int r,
                                   long long budget) {
  const int types = table.size();
  const int c = inst.c();
  const int n = inst.n();

  Evaluation ev;
  ev.destinations = table.types;
  std::vector<int> slot_dest(slots_used, -1);
  for (int j = 0; j < slots_used; ++j) {
    RowType center(n);
    std::vector<int> votes(inst.p);
    for (int col = 0; col < n; ++col) {
      std::fill(votes.begin(), votes.end(), 0);
      for (const auto& mv : moves) {
        if (mv.destination == types + j) votes[table.types[mv.source_type](col)] += mv.count;
      }
      center(col) = static_cast<int>(std::max_element(votes.begin(), votes.end()) - votes.begin());
    }
    int dest = table.find(center);
    if (dest < 0) {
      for (int other = types; other < static_cast<int>(ev.destinations.size()); ++other) {
        if (same_type(ev.destinations[other], center)) dest = other;
      }
    }
    if (dest < 0) {
      dest = static_cast<int>(ev.destinations.size());
      ev.destinations.push_back(center);
    }
    slot_dest[j] = dest;
  }

  const int total = static_cast<int>(ev.destinations.size());
  Eigen::MatrixXi counts = Eigen::MatrixXi::Zero(total, c);
  counts.topRows(types) = table.color_counts;
  for (const auto& mv : moves) {
    const int dest = mv.destination >= types ? slot_dest[mv.destination - types] : mv.destination;
    const int dist = hamming(table.types[mv.source_type], ev.destinations[dest]);
    ev.cost += static_cast<long long>(dist) * mv.count;
    counts(mv.source_type, mv.color - 1) -= mv.count;
    counts(dest, mv.color - 1) += mv.count;
    if (dest != mv.source_type) ev.moves.push_back({mv.source_type, dest, mv.color, mv.count});
  }
  if (ev.cost > budget) return std::nullopt;

  int survivors = 0;
  std::vector<int> row(c);
  for (int t = 0; t < total; ++t) {
    for (int z = 0; z < c; ++z) row[z] = counts(t, z);
    if (counts.row(t).sum() == 0) continue;
    if (!is_fair_counts(row, global, inst.m())) return std::nullopt;
    ++survivors;
  }
  if (survivors > r) return std::nullopt;
  return ev;
}

}  // namespace

OracleResult solve_k_plus_r(const Instance& inst, const KPlusROptions& opts) {
  validate(inst);
  OracleResult res;
  const TypeTable table = tabulate(inst);
  const int dr = table.size();
  if (dr > inst.k + inst.r) {
    res.counters["rejected_types"] = static_cast<std::uint64_t>(dr);
    return res;
  }
  const int fairlet = fairlet_size(inst.colors);
  if (fairlet > inst.k) {
    res = solve_large_fairlet(inst);
    res.counters["delegated_large_fairlet"] = 1;
    return res;
  }
  const int r = std::min(inst.r, dr + inst.k / fairlet);
  const auto global = color_counts(inst.colors);

  std::optional<Evaluation> best;
  Matrix best_matrix;
  std::uint64_t feasible = 0;
  PatternWalker walker(table, inst.c(), inst.k, opts.cap, true);
  walker.run([&](const std::vector<MigrationMove>& moves, int slots) {
    const long long budget = best ? best->cost : inst.k;
    auto ev = evaluate(inst, table, global, moves, slots, r, budget);
    if (!ev) return;
    ++feasible;
    Matrix mat = apply_moves(inst, table, ev->moves, ev->destinations);
    if (!best || ev->cost < best->cost || matrix_less(mat, best_matrix)) {
      best = std::move(ev);
      best_matrix = std::move(mat);
    }
  });
  res.counters["patterns"] = walker.visited();
  res.counters["feasible_patterns"] = feasible;
  if (!best) return res;

  Solution sol = make_solution(inst, std::move(best_matrix));
  if (sol.edit_count != best->cost || !verify_solution(inst, sol).feasible()) {
    throw std::logic_error("k+r witness failed verification");
  }
  res.status = Status::Yes;
  res.optimum_edits = sol.edit_count;
  res.witness = std::move(sol);
  return res;
}

}  // namespace fdmc
