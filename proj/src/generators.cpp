#include "fdmc/generators.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <string>

namespace fdmc {

namespace {

std::vector<int> shuffled_colors(std::span<const int> counts, std::mt19937_64& rng) {
  std::vector<int> colors;
  for (std::size_t z = 0; z < counts.size(); ++z) colors.insert(colors.end(), counts[z], static_cast<int>(z) + 1);
  std::shuffle(colors.begin(), colors.end(), rng);
  return colors;
}

std::int64_t choose2(std::int64_t q) { return q * (q - 1) / 2; }

}  // namespace

Instance gen_random(const RandomSpec& spec) {
  if (spec.m < 1 || spec.n < 1 || spec.p < 2) throw InputError("gen_random: need m >= 1, n >= 1, p >= 2");
  if (spec.k < 0 || spec.r < 1) throw InputError("gen_random: need k >= 0 and r >= 1");
  std::vector<int> counts = spec.color_counts.empty() ? std::vector<int>{spec.m} : spec.color_counts;
  if (std::any_of(counts.begin(), counts.end(), [](int x) { return x < 1; }))
    throw InputError("gen_random: every color needs at least one row");
  if (std::accumulate(counts.begin(), counts.end(), 0) != spec.m)
    throw InputError("gen_random: color counts must sum to m");

  std::mt19937_64 rng(spec.seed);
  std::uniform_int_distribution<int> value(0, spec.p - 1);
  Matrix rows(spec.m, spec.n);
  for (int i = 0; i < spec.m; ++i)
    for (int j = 0; j < spec.n; ++j) rows(i, j) = value(rng);
  auto colors = shuffled_colors(counts, rng);
  return make_instance(std::move(rows), std::move(colors), spec.p, spec.k, spec.r);
}

Instance gen_random(int m, int n, int p, int c, int k, int r, std::uint64_t seed) {
  if (c < 1 || c > m) throw InputError("gen_random: need 1 <= c <= m");
  RandomSpec spec{m, n, p, std::vector<int>(c, m / c), k, r, seed};
  for (int z = 0; z < m % c; ++z) ++spec.color_counts[z];
  return gen_random(spec);
}

std::pair<Instance, Solution> gen_planted(const std::vector<PlantedCluster>& clusters, int p, int noise_edits,
                                          std::uint64_t seed) {
  if (clusters.empty()) throw InputError("gen_planted: no clusters");
  if (p < 2) throw InputError("gen_planted: need p >= 2");
  const auto n = clusters.front().center.size();
  const auto c = clusters.front().color_counts.size();
  int m = 0;
  for (const auto& cl : clusters) {
    if (cl.center.size() != n || cl.color_counts.size() != c)
      throw InputError("gen_planted: clusters disagree in shape");
    if ((cl.center.array() < 0).any() || (cl.center.array() >= p).any())
      throw InputError("gen_planted: center entry outside [0, p)");
    m += std::accumulate(cl.color_counts.begin(), cl.color_counts.end(), 0);
  }

  std::vector<int> colors;
  Matrix planted(m, n);
  int at = 0;
  for (const auto& cl : clusters) {
    for (std::size_t z = 0; z < c; ++z) {
      for (int x = 0; x < cl.color_counts[z]; ++x) {
        planted.row(at++) = cl.center;
        colors.push_back(static_cast<int>(z) + 1);
      }
    }
  }
  if (noise_edits < 0 || static_cast<std::int64_t>(noise_edits) > static_cast<std::int64_t>(m) * n)
    throw InputError("gen_planted: noise exceeds the number of cells");

  std::mt19937_64 rng(seed);
  std::vector<int> cells(static_cast<std::size_t>(m) * n);
  std::iota(cells.begin(), cells.end(), 0);
  std::shuffle(cells.begin(), cells.end(), rng);
  Matrix noisy = planted;
  std::uniform_int_distribution<int> shift(1, p - 1);
  for (int e = 0; e < noise_edits; ++e) {
    const int i = cells[e] / static_cast<int>(n);
    const int j = cells[e] % static_cast<int>(n);
    noisy(i, j) = (noisy(i, j) + shift(rng)) % p;
  }

  const int r = distinct_rows(planted);
  Instance inst = make_instance(std::move(noisy), std::move(colors), p, noise_edits, r);
  Solution sol = make_solution(inst, planted);
  if (!verify_solution(inst, sol).feasible()) throw InputError("gen_planted: planted clusters are not fair");
  return {std::move(inst), std::move(sol)};
}

std::pair<Instance, Solution> gen_planted(int clusters, int n, std::span<const int> composition, int fairlets,
                                          int noise_edits, std::uint64_t seed) {
  if (clusters < 1 || n < 1 || fairlets < 1) throw InputError("gen_planted: need clusters, n, fairlets >= 1");
  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
  std::bernoulli_distribution bit(0.5);
  std::vector<PlantedCluster> planted;
  std::vector<int> counts(composition.begin(), composition.end());
  for (auto& x : counts) x *= fairlets;
  for (int u = 0; u < clusters; ++u) {
    RowType center(n);
    for (int j = 0; j < n; ++j) center(j) = bit(rng) ? 1 : 0;
    planted.push_back({center, counts});
  }
  return gen_planted(planted, 2, noise_edits, seed);
}

int ColoredGraph::colors() const { return color.empty() ? 0 : *std::max_element(color.begin(), color.end()); }

std::pair<ColoredGraph, std::vector<int>> gen_clique_graph(int q, int vertices, double edge_prob,
                                                           std::uint64_t seed) {
  if (q < 1 || vertices < q) throw InputError("gen_clique_graph: need 1 <= q <= vertices");
  ColoredGraph g;
  g.vertices = vertices;
  for (int v = 0; v < vertices; ++v) g.color.push_back(v % q + 1);
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution coin(edge_prob);
  for (int u = 0; u < vertices; ++u) {
    for (int v = u + 1; v < vertices; ++v) {
      if (g.color[u] == g.color[v]) continue;
      const bool planted = u < q && v < q;
      if (coin(rng) || planted) g.edges.emplace_back(u, v);
    }
  }
  std::vector<int> clique(q);
  std::iota(clique.begin(), clique.end(), 0);
  return {std::move(g), std::move(clique)};
}

std::int64_t Gadget::size() const { return std::accumulate(rows_per_color.begin(), rows_per_color.end(), std::int64_t{0}); }

int reduction_y(int q) { return static_cast<int>(3 * q * (q + 1) + 4 * choose2(q) * (2 * q - 2)); }

int reduction_k(int q) {
  const std::int64_t y = reduction_y(q);
  return static_cast<int>(2 * choose2(q) * (y + 1) + y);
}

int ReductionMeta::color_vertex(int i, int t) const {
  // 𝒱 types: q+1 per color i, t in {i} ∪ {q+1..2q}
  const int slot = t == i ? 0 : t - q;
  return (i - 1) * (q + 1) + slot;
}

int ReductionMeta::color_edge(int i, int j, int t) const {
  // pair index in lexicographic (i, j) order, then t over [2q] \ {i, j}
  int pair = 0;
  for (int a = 1; a < i; ++a) pair += q - a;
  pair += j - i - 1;
  const int slot = t - 1 - (t > i) - (t > j);
  return q * (q + 1) + pair * (2 * q - 2) + slot;
}

int ReductionMeta::vertex(int a) const { return q * (q + 1) + static_cast<int>(choose2(q)) * (2 * q - 2) + a; }

int ReductionMeta::edge(int a, int b) const {
  if (a > b) std::swap(a, b);
  const auto it = std::lower_bound(graph.edges.begin(), graph.edges.end(), std::make_pair(a, b));
  if (it == graph.edges.end() || *it != std::make_pair(a, b)) return -1;
  return vertex(graph.vertices) + static_cast<int>(it - graph.edges.begin());
}

ReductionMeta reduce_from_multicolored_clique(const ColoredGraph& g, std::optional<std::int64_t> multiplicity) {
  const int q = g.colors();
  if (q < 4) throw InputError("reduction: need q >= 4 colors, got " + std::to_string(q));
  if (static_cast<int>(g.color.size()) != g.vertices) throw InputError("reduction: one color per vertex required");
  std::vector<bool> seen(q + 1, false);
  for (int col : g.color) {
    if (col < 1) throw InputError("reduction: colors must be 1-based");
    seen[col] = true;
  }
  for (int i = 1; i <= q; ++i)
    if (!seen[i]) throw InputError("reduction: color " + std::to_string(i) + " has no vertex");

  ReductionMeta meta;
  meta.q = q;
  meta.y = reduction_y(q);
  meta.k = reduction_k(q);
  meta.colors = 2 * q;
  meta.n = q * meta.y + 8 * q + g.vertices;
  meta.multiplicity = multiplicity.value_or(meta.k);
  if (meta.multiplicity < 1) throw InputError("reduction: multiplicity must be positive");
  meta.graph = g;
  std::set<std::pair<int, int>> edges;
  for (auto [u, v] : g.edges) {
    if (u == v || u < 0 || v < 0 || u >= g.vertices || v >= g.vertices)
      throw InputError("reduction: bad edge endpoint");
    if (g.color[u] == g.color[v]) throw InputError("reduction: coloring is not proper");
    edges.insert(std::minmax(u, v));
  }
  meta.graph.edges.assign(edges.begin(), edges.end());

  const ReductionLayout lay{q, meta.y};
  const std::int64_t base = meta.multiplicity;
  const auto blank = [&] { return RowType::Zero(meta.n); };
  const auto fill_block = [&](RowType& row, int i) { row.segment(lay.color_block(i), meta.y).setOnes(); };
  const auto counts = [&](int t, int delta) {
    std::vector<std::int64_t> out(meta.colors, base);
    if (t > 0) out[t - 1] += delta;
    return out;
  };

  for (int i = 1; i <= q; ++i) {
    std::vector<int> ts{i};
    for (int t = q + 1; t <= 2 * q; ++t) ts.push_back(t);
    for (int t : ts) {
      Gadget gd{GadgetKind::ColorVertex, i, 0, t, -1, -1, blank(), counts(t, +1)};
      fill_block(gd.row, i);
      gd.row.segment(lay.first_code(t), 2).setOnes();
      meta.gadgets.push_back(std::move(gd));
    }
  }
  for (int i = 1; i <= q; ++i) {
    for (int j = i + 1; j <= q; ++j) {
      for (int t = 1; t <= 2 * q; ++t) {
        if (t == i || t == j) continue;
        Gadget gd{GadgetKind::ColorEdge, i, j, t, -1, -1, blank(), counts(t, -1)};
        fill_block(gd.row, i);
        fill_block(gd.row, j);
        gd.row.segment(lay.second_code(t), 2).setOnes();
        meta.gadgets.push_back(std::move(gd));
      }
    }
  }
  for (int a = 0; a < g.vertices; ++a) {
    Gadget gd{GadgetKind::Vertex, g.color[a], 0, 0, a, -1, blank(), counts(0, 0)};
    fill_block(gd.row, g.color[a]);
    gd.row(lay.vertex_column(a)) = 1;
    meta.gadgets.push_back(std::move(gd));
  }
  for (auto [a, b] : meta.graph.edges) {
    Gadget gd{GadgetKind::Edge, g.color[a], g.color[b], 0, a, b, blank(), counts(0, 0)};
    fill_block(gd.row, g.color[a]);
    fill_block(gd.row, g.color[b]);
    gd.row(lay.vertex_column(a)) = 1;
    gd.row(lay.vertex_column(b)) = 1;
    meta.gadgets.push_back(std::move(gd));
  }

  for (const auto& gd : meta.gadgets) meta.rows += gd.size();
  const std::int64_t per = 2 * base * q;
  meta.aggregate_rows = q * (per + 1) + choose2(q) * (per - 1) +
                        per * (g.vertices + static_cast<std::int64_t>(meta.graph.edges.size()));
  return meta;
}

void for_each_reduction_row(const ReductionMeta& meta, const std::function<void(int, int)>& visit) {
  for (std::size_t u = 0; u < meta.gadgets.size(); ++u) {
    const auto& gd = meta.gadgets[u];
    for (int z = 0; z < meta.colors; ++z)
      for (std::int64_t x = 0; x < gd.rows_per_color[z]; ++x) visit(static_cast<int>(u), z + 1);
  }
}

Instance materialize(const ReductionMeta& meta, std::int64_t max_cells) {
  if (meta.rows * meta.n > max_cells)
    throw CapacityError("materialize: " + std::to_string(meta.rows) + " x " + std::to_string(meta.n) +
                        " exceeds the cell cap");
  Matrix rows(meta.rows, meta.n);
  std::vector<int> colors;
  colors.reserve(meta.rows);
  Eigen::Index at = 0;
  for_each_reduction_row(meta, [&](int u, int z) {
    rows.row(at++) = meta.gadgets[u].row;
    colors.push_back(z);
  });
  return make_instance(std::move(rows), std::move(colors), 2, meta.k, static_cast<int>(meta.gadgets.size()));
}

std::vector<GadgetMove> clique_witness_moves(const ReductionMeta& meta, const std::vector<int>& clique) {
  const int q = meta.q;
  if (static_cast<int>(clique.size()) != q) throw InputError("clique: need exactly q vertices");
  for (int i = 1; i <= q; ++i) {
    const int v = clique[i - 1];
    if (v < 0 || v >= meta.graph.vertices || meta.graph.color[v] != i)
      throw InputError("clique: vertex " + std::to_string(i) + " must have color " + std::to_string(i));
  }
  std::vector<GadgetMove> moves;
  for (int i = 1; i <= q; ++i) {
    const int target = meta.vertex(clique[i - 1]);
    moves.push_back({meta.color_vertex(i, i), target, i, 1});
    for (int t = q + 1; t <= 2 * q; ++t) moves.push_back({meta.color_vertex(i, t), target, t, 1});
  }
  for (int i = 1; i <= q; ++i) {
    for (int j = i + 1; j <= q; ++j) {
      const int e = meta.edge(clique[i - 1], clique[j - 1]);
      if (e < 0) throw InputError("clique: vertices are not adjacent");
      moves.push_back({e, meta.vertex(clique[j - 1]), i, 1});
      moves.push_back({e, meta.vertex(clique[i - 1]), j, 1});
      for (int t = 1; t <= 2 * q; ++t) {
        if (t == i || t == j) continue;
        moves.push_back({e, meta.color_edge(i, j, t), t, 1});
      }
    }
  }
  return moves;
}

CompressedVerdict verify_moves(const ReductionMeta& meta, const std::vector<GadgetMove>& moves) {
  const auto types = meta.gadgets.size();
  std::vector<std::vector<std::int64_t>> counts(types);
  for (std::size_t u = 0; u < types; ++u) counts[u] = meta.gadgets[u].rows_per_color;
  CompressedVerdict out;
  for (const auto& mv : moves) {
    if (mv.from < 0 || mv.to < 0 || static_cast<std::size_t>(mv.from) >= types ||
        static_cast<std::size_t>(mv.to) >= types || mv.color < 1 || mv.color > meta.colors || mv.count < 0)
      throw InputError("verify_moves: malformed move");
    auto& src = counts[mv.from][mv.color - 1];
    if (src < mv.count) throw InputError("verify_moves: move takes more rows than available");
    src -= mv.count;
    counts[mv.to][mv.color - 1] += mv.count;
    out.cost += mv.count * hamming(meta.gadgets[mv.from].row, meta.gadgets[mv.to].row);
  }

  std::vector<std::int64_t> global(meta.colors, 0);
  for (const auto& gd : meta.gadgets)
    for (int z = 0; z < meta.colors; ++z) global[z] += gd.rows_per_color[z];
  const std::int64_t g = std::accumulate(global.begin(), global.end(), std::int64_t{0},
                                         [](std::int64_t a, std::int64_t b) { return std::gcd(a, b); });
  for (std::size_t u = 0; u < types; ++u) {
    const std::int64_t size = std::accumulate(counts[u].begin(), counts[u].end(), std::int64_t{0});
    if (size == 0) continue;
    ++out.survivors;
    // fair iff counts[u] = (size / c̃) · (global / g)
    const std::int64_t fairlet = meta.rows / g;
    bool fair = size % fairlet == 0;
    for (int z = 0; fair && z < meta.colors; ++z) fair = counts[u][z] == size / fairlet * (global[z] / g);
    if (!fair) out.unfair.push_back(static_cast<int>(u));
  }
  return out;
}

Solution build_clique_witness(const ReductionMeta& meta, const Instance& inst, const std::vector<int>& clique) {
  if (inst.m() != meta.rows || inst.n() != meta.n) throw InputError("witness: instance does not match meta");
  const auto moves = clique_witness_moves(meta, clique);

  // first row of every (gadget, color) block
  std::map<std::pair<int, int>, std::int64_t> start, taken;
  std::int64_t at = 0;
  for (std::size_t u = 0; u < meta.gadgets.size(); ++u) {
    for (int z = 0; z < meta.colors; ++z) {
      start[{static_cast<int>(u), z + 1}] = at;
      at += meta.gadgets[u].rows_per_color[z];
    }
  }
  Matrix edited = inst.rows;
  for (const auto& mv : moves) {
    auto& used = taken[{mv.from, mv.color}];
    if (used + mv.count > meta.gadgets[mv.from].rows_per_color[mv.color - 1])
      throw InputError("witness: not enough rows to move");
    for (std::int64_t x = 0; x < mv.count; ++x) {
      const auto row = start[{mv.from, mv.color}] + used++;
      edited.row(row) = meta.gadgets[mv.to].row;
    }
  }
  return make_solution(inst, std::move(edited));
}

Solution build_clique_witness(const ReductionMeta& meta, const std::vector<int>& clique) {
  return build_clique_witness(meta, materialize(meta), clique);
}

}  // namespace fdmc
