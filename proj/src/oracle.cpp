#include "fdmc/oracle.hpp"

#include <numeric>

namespace fdmc {

std::string to_string(Status s) {
  switch (s) {
    case Status::Yes: return "YES";
    case Status::No: return "NO";
    case Status::Unresolved: return "UNRESOLVED";
  }
  return "?";
}

bool fair_with_at_most(const Matrix& mat, std::span<const int> colors, int r) {
  const int m = static_cast<int>(mat.rows());
  std::vector<int> order(m);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](int a, int b) { return RowTypeLess{}(mat.row(a), mat.row(b)); });
  const auto global = color_counts(colors);
  std::vector<int> counts(global.size());
  int clusters = 0;
  for (int start = 0; start < m;) {
    int end = start;
    std::fill(counts.begin(), counts.end(), 0);
    while (end < m && (mat.row(order[end]).array() == mat.row(order[start]).array()).all()) {
      ++counts[colors[order[end]] - 1];
      ++end;
    }
    if (!is_fair_counts(counts, global, m)) return false;
    if (++clusters > r) return false;
    start = end;
  }
  return true;
}

namespace {

struct PartitionSearch {
  const Instance& inst;
  std::vector<int> global;
  std::vector<int> part_of;
  int best_cost = -1;
  Matrix best{};
  std::uint64_t visited = 0;
  std::uint64_t fair = 0;

  void leaf(int parts) {
    ++visited;
    const int m = inst.m();
    const int c = static_cast<int>(global.size());
    std::vector<std::vector<int>> members(parts);
    for (int i = 0; i < m; ++i) members[part_of[i]].push_back(i);
    std::vector<int> counts(c);
    for (const auto& rows : members) {
      std::fill(counts.begin(), counts.end(), 0);
      for (int i : rows) ++counts[inst.colors[i] - 1];
      if (!is_fair_counts(counts, global, m)) return;
    }
    ++fair;
    Matrix out(m, inst.n());
    for (const auto& rows : members) {
      const RowType center = majority_center(inst, rows);
      for (int i : rows) out.row(i) = center;
    }
    const int cost = edit_distance(inst.rows, out);
    if (best_cost < 0 || cost < best_cost || (cost == best_cost && matrix_less(out, best))) {
      best_cost = cost;
      best = std::move(out);
    }
  }

  void recurse(int i, int parts) {
    if (i == inst.m()) {
      leaf(parts);
      return;
    }
    for (int p = 0; p < parts; ++p) {
      part_of[i] = p;
      recurse(i + 1, parts);
    }
    if (parts < inst.r) {
      part_of[i] = parts;
      recurse(i + 1, parts + 1);
    }
  }
};

OracleResult finish(const Instance& inst, int cost, Matrix best) {
  OracleResult res;
  res.optimum_edits = cost;
  res.witness = make_solution(inst, std::move(best));
  res.status = cost <= inst.k ? Status::Yes : Status::No;
  return res;
}

}  // namespace

OracleResult solve_by_partitions(const Instance& inst, const PartitionSearchOptions& opts) {
  validate(inst);
  if (inst.m() > opts.max_rows) {
    throw CapacityError("partition oracle refuses m = " + std::to_string(inst.m()) +
                        " (cap " + std::to_string(opts.max_rows) + ")");
  }
  PartitionSearch search{inst, color_counts(inst.colors), std::vector<int>(inst.m(), 0)};
  search.recurse(0, 0);
  // the single-part partition is always fair, so an optimum exists
  OracleResult res = finish(inst, search.best_cost, std::move(search.best));
  res.counters["partitions"] = search.visited;
  res.counters["fair_partitions"] = search.fair;
  return res;
}

namespace {

struct EditSearch {
  const Instance& inst;
  int cells;
  std::uint64_t cap;
  std::uint64_t examined = 0;
  std::vector<int> chosen{};
  Matrix work{};
  std::optional<Matrix> best{};

  // Chooses `left` more cells with index >= from, then all value combinations.
  void cells_from(int from, int left) {
    if (left == 0) {
      values(0);
      return;
    }
    for (int cell = from; cell <= cells - left; ++cell) {
      chosen.push_back(cell);
      cells_from(cell + 1, left - 1);
      chosen.pop_back();
    }
  }

  void values(std::size_t idx) {
    if (idx == chosen.size()) {
      if (++examined > cap) {
        throw CapacityError("edit-set oracle exceeded cap of " + std::to_string(cap) + " edit sets");
      }
      if (fair_with_at_most(work, inst.colors, inst.r) && (!best || matrix_less(work, *best))) {
        best = work;
      }
      return;
    }
    const int cell = chosen[idx];
    const int i = cell / inst.n();
    const int j = cell % inst.n();
    const int original = inst.rows(i, j);
    for (int v = 0; v < inst.p; ++v) {
      if (v == original) continue;
      work(i, j) = v;
      values(idx + 1);
    }
    work(i, j) = original;
  }
};

}  // namespace

OracleResult solve_by_edits(const Instance& inst, const EditSearchOptions& opts) {
  validate(inst);
  const int cells = inst.m() * inst.n();
  const int depth = std::min(opts.max_edits.value_or(inst.k), cells);
  EditSearch search{inst, cells, opts.cap};
  search.work = inst.rows;
  OracleResult res;
  for (int size = 0; size <= depth; ++size) {
    search.cells_from(0, size);
    if (search.best) {
      res = finish(inst, size, std::move(*search.best));
      break;
    }
  }
  res.counters["edit_sets"] = search.examined;
  return res;
}

}  // namespace fdmc
