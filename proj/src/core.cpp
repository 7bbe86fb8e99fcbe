#include "fdmc/core.hpp"

#include <map>
#include <numeric>

namespace fdmc {

void validate(const Instance& inst) {
  if (inst.m() <= 0) throw InputError("instance has no rows");
  if (static_cast<int>(inst.colors.size()) != inst.m()) {
    throw InputError("coloring length " + std::to_string(inst.colors.size()) +
                     " does not match row count " + std::to_string(inst.m()));
  }
  if (inst.p < 1) throw InputError("domain size p must be positive");
  if (inst.k < 0) throw InputError("budget k must be non-negative");
  if (inst.r < 1) throw InputError("row bound r must be positive");
  if (inst.rows.size() > 0 && (inst.rows.minCoeff() < 0 || inst.rows.maxCoeff() >= inst.p)) {
    throw InputError("matrix entry outside 0.." + std::to_string(inst.p - 1));
  }
  const int c = inst.c();
  std::vector<bool> seen(static_cast<std::size_t>(std::max(c, 0)) + 1, false);
  for (int z : inst.colors) {
    if (z < 1) throw InputError("colors must be 1-based, got " + std::to_string(z));
    seen[static_cast<std::size_t>(z)] = true;
  }
  for (int z = 1; z <= c; ++z) {
    if (!seen[static_cast<std::size_t>(z)]) {
      throw InputError("color " + std::to_string(z) + " does not occur in the coloring");
    }
  }
}

Instance make_instance(Matrix rows, std::vector<int> colors, int p, int k, int r) {
  Instance inst{std::move(rows), std::move(colors), p, k, r};
  validate(inst);
  return inst;
}

std::vector<int> color_counts(std::span<const int> colors) {
  int c = 0;
  for (int z : colors) c = std::max(c, z);
  std::vector<int> counts(static_cast<std::size_t>(c), 0);
  for (int z : colors) ++counts[static_cast<std::size_t>(z - 1)];
  return counts;
}

int fairlet_size(std::span<const int> colors) {
  const auto counts = color_counts(colors);
  int g = 0;
  for (int x : counts) g = std::gcd(g, x);
  return g == 0 ? 0 : static_cast<int>(colors.size()) / g;
}

std::vector<int> fairlet_composition(std::span<const int> colors) {
  auto counts = color_counts(colors);
  int g = 0;
  for (int x : counts) g = std::gcd(g, x);
  for (int& x : counts) x /= g;
  return counts;
}

bool is_fair_counts(std::span<const int> counts, std::span<const int> global, int m) {
  long long size = 0;
  for (int x : counts) size += x;
  for (std::size_t z = 0; z < global.size(); ++z) {
    const long long have = z < counts.size() ? counts[z] : 0;
    if (have * m != static_cast<long long>(global[z]) * size) return false;
  }
  return true;
}

bool is_fair_cluster(std::span<const int> cluster, std::span<const int> colors) {
  const auto global = color_counts(colors);
  std::vector<int> counts(global.size(), 0);
  for (int i : cluster) ++counts[static_cast<std::size_t>(colors[static_cast<std::size_t>(i)] - 1)];
  return is_fair_counts(counts, global, static_cast<int>(colors.size()));
}

bool matrix_less(const Matrix& a, const Matrix& b) {
  return std::lexicographical_compare(a.data(), a.data() + a.size(), b.data(), b.data() + b.size());
}

int edit_distance(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw InputError("edit_distance: shape mismatch");
  }
  return static_cast<int>((a.array() != b.array()).count());
}

namespace {

// Cluster id per row, ids following lexicographic order of the row values.
std::vector<int> cluster_ids(const Matrix& mat, int* distinct) {
  std::map<RowType, int, RowTypeLess> ids;
  for (Eigen::Index i = 0; i < mat.rows(); ++i) ids.emplace(mat.row(i), 0);
  int next = 0;
  for (auto& [type, id] : ids) id = next++;
  std::vector<int> out(static_cast<std::size_t>(mat.rows()));
  for (Eigen::Index i = 0; i < mat.rows(); ++i) {
    out[static_cast<std::size_t>(i)] = ids.find(RowType(mat.row(i)))->second;
  }
  if (distinct) *distinct = next;
  return out;
}

}  // namespace

int distinct_rows(const Matrix& mat) {
  int d = 0;
  cluster_ids(mat, &d);
  return d;
}

Solution make_solution(const Instance& inst, Matrix edited) {
  if (edited.rows() != inst.rows.rows() || edited.cols() != inst.rows.cols()) {
    throw InputError("solution shape " + std::to_string(edited.rows()) + "x" +
                     std::to_string(edited.cols()) + " does not match instance " +
                     std::to_string(inst.m()) + "x" + std::to_string(inst.n()));
  }
  Solution sol;
  sol.cluster_of = cluster_ids(edited, &sol.distinct_types);
  sol.edit_count = edit_distance(inst.rows, edited);
  sol.edited_rows = std::move(edited);
  return sol;
}

Verdict verify_solution(const Instance& inst, const Solution& sol) {
  const Matrix& out = sol.edited_rows;
  if (out.rows() != inst.rows.rows() || out.cols() != inst.rows.cols()) {
    throw InputError("solution shape does not match instance");
  }
  if (out.size() > 0 && (out.minCoeff() < 0 || out.maxCoeff() >= inst.p)) {
    throw InputError("solution entry outside the instance domain");
  }
  int distinct = 0;
  const auto clusters = cluster_ids(out, &distinct);
  const int edits = edit_distance(inst.rows, out);
  if (sol.edit_count != edits || sol.distinct_types != distinct || sol.cluster_of != clusters) {
    throw InputError("solution metadata disagrees with its edited rows");
  }

  Verdict v;
  std::vector<std::vector<int>> members(static_cast<std::size_t>(distinct));
  for (int i = 0; i < inst.m(); ++i) members[static_cast<std::size_t>(clusters[static_cast<std::size_t>(i)])].push_back(i);
  for (std::size_t id = 0; id < members.size(); ++id) {
    if (!is_fair_cluster(members[id], inst.colors)) {
      v.unfair_cluster = true;
      v.violations.push_back("cluster " + std::to_string(id) + " (" +
                             std::to_string(members[id].size()) + " rows) is unfair");
    }
  }
  if (distinct > inst.r) {
    v.too_many_types = true;
    v.violations.push_back(std::to_string(distinct) + " distinct rows exceed r = " +
                           std::to_string(inst.r));
  }
  if (edits > inst.k) {
    v.over_budget = true;
    v.violations.push_back(std::to_string(edits) + " edits exceed k = " + std::to_string(inst.k));
  }
  return v;
}

int EditGraph::total_weight() const {
  int total = 0;
  for (const auto& e : edges) total += e.weight;
  return total;
}

std::vector<int> EditGraph::survivors() const {
  std::vector<bool> hit(vertices.size(), false);
  for (const auto& e : edges) hit[static_cast<std::size_t>(e.target)] = true;
  std::vector<int> out;
  for (std::size_t v = 0; v < hit.size(); ++v) {
    if (hit[v]) out.push_back(static_cast<int>(v));
  }
  return out;
}

EditGraph build_edit_graph(const Instance& inst, const Solution& sol) {
  if (sol.edited_rows.rows() != inst.rows.rows() || sol.edited_rows.cols() != inst.rows.cols()) {
    throw InputError("solution shape does not match instance");
  }
  std::map<RowType, int, RowTypeLess> index;
  for (int i = 0; i < inst.m(); ++i) {
    index.emplace(inst.rows.row(i), 0);
    index.emplace(sol.edited_rows.row(i), 0);
  }
  EditGraph g;
  for (auto& [type, id] : index) {
    id = static_cast<int>(g.vertices.size());
    g.vertices.push_back(type);
  }
  g.edges.reserve(static_cast<std::size_t>(inst.m()));
  for (int i = 0; i < inst.m(); ++i) {
    const RowType from = inst.rows.row(i);
    const RowType to = sol.edited_rows.row(i);
    g.edges.push_back({index.at(from), index.at(to), i, inst.colors[static_cast<std::size_t>(i)],
                       hamming(from, to)});
  }
  return g;
}

ReducedEditGraph reduce(const EditGraph& graph) {
  ReducedEditGraph out;
  out.vertices = graph.vertices;
  for (const auto& e : graph.edges) {
    if (e.source != e.target) out.edges.push_back({e.source, e.target, e.color, e.weight});
  }
  return out;
}

bool is_fair_edge_set(std::span<const EditEdge> edges, std::span<const int> colors) {
  const auto global = color_counts(colors);
  std::vector<int> counts(global.size(), 0);
  for (const auto& e : edges) ++counts[static_cast<std::size_t>(e.color - 1)];
  return is_fair_counts(counts, global, static_cast<int>(colors.size()));
}

RowType majority_center(const Instance& inst, std::span<const int> rows) {
  RowType center = RowType::Zero(inst.n());
  std::vector<int> votes(static_cast<std::size_t>(inst.p));
  for (int j = 0; j < inst.n(); ++j) {
    std::fill(votes.begin(), votes.end(), 0);
    for (int i : rows) ++votes[static_cast<std::size_t>(inst.rows(i, j))];
    // max_element returns the first maximum, i.e. the smallest winning value
    center(j) = static_cast<int>(std::max_element(votes.begin(), votes.end()) - votes.begin());
  }
  return center;
}

Solution majority_recenter(const Instance& inst, std::span<const int> part_of) {
  if (static_cast<int>(part_of.size()) != inst.m()) {
    throw InputError("partition does not cover all rows");
  }
  std::map<int, std::vector<int>> parts;
  for (int i = 0; i < inst.m(); ++i) {
    if (part_of[static_cast<std::size_t>(i)] < 0) throw InputError("negative part id");
    parts[part_of[static_cast<std::size_t>(i)]].push_back(i);
  }
  Matrix out(inst.m(), inst.n());
  for (const auto& [id, rows] : parts) {
    const RowType center = majority_center(inst, rows);
    for (int i : rows) out.row(i) = center;
  }
  return make_solution(inst, std::move(out));
}

int TypeTable::find(const RowType& t) const {
  const auto it = std::lower_bound(types.begin(), types.end(), t, RowTypeLess{});
  if (it == types.end() || !same_type(*it, t)) return -1;
  return static_cast<int>(it - types.begin());
}

TypeTable tabulate(const Instance& inst) {
  TypeTable table;
  std::map<RowType, std::vector<int>, RowTypeLess> groups;
  for (int i = 0; i < inst.m(); ++i) groups[inst.rows.row(i)].push_back(i);
  const int c = inst.c();
  const int d = static_cast<int>(groups.size());
  table.type_of_row.assign(static_cast<std::size_t>(inst.m()), -1);
  table.color_counts = Eigen::MatrixXi::Zero(d, c);
  const auto global = color_counts(inst.colors);
  for (auto& [type, rows] : groups) {
    const int id = static_cast<int>(table.types.size());
    table.types.push_back(type);
    for (int i : rows) {
      table.type_of_row[static_cast<std::size_t>(i)] = id;
      ++table.color_counts(id, inst.colors[static_cast<std::size_t>(i)] - 1);
    }
    table.rows_of_type.push_back(std::move(rows));
  }
  table.fair.resize(static_cast<std::size_t>(d));
  for (int t = 0; t < d; ++t) {
    std::vector<int> counts(static_cast<std::size_t>(c));
    for (int z = 0; z < c; ++z) counts[static_cast<std::size_t>(z)] = table.color_counts(t, z);
    table.fair[static_cast<std::size_t>(t)] = is_fair_counts(counts, global, inst.m());
  }
  table.distance.resize(d, d);
  for (int a = 0; a < d; ++a) {
    for (int b = a; b < d; ++b) {
      const int dist = hamming(table.types[static_cast<std::size_t>(a)], table.types[static_cast<std::size_t>(b)]);
      table.distance(a, b) = dist;
      table.distance(b, a) = dist;
    }
  }
  return table;
}

std::vector<RowType> unfair_types(const Instance& inst) {
  const auto table = tabulate(inst);
  std::vector<RowType> out;
  for (int t = 0; t < table.size(); ++t) {
    if (!table.fair[static_cast<std::size_t>(t)]) out.push_back(table.types[static_cast<std::size_t>(t)]);
  }
  return out;
}

}  // namespace fdmc
