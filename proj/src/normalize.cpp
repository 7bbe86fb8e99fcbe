#include "fdmc/normalize.hpp"

#include "fdmc/matching.hpp"

#include <algorithm>
#include <numeric>

namespace fdmc {

double normal_form_ratio(int fairlet) { return 5.0 - 3.0 / fairlet; }

namespace {

struct Work {
  const Instance& inst;
  EditGraph graph;
  std::vector<int> source;  // per row, vertex index of its type in M
  std::vector<int> target;  // per row, current vertex index
  std::vector<char> in_m;   // vertex is a type of M
  std::vector<char> fair;   // vertex is an M-fair type of M
  Eigen::MatrixXi dist;

  int weight() const {
    int w = 0;
    for (std::size_t i = 0; i < target.size(); ++i) w += dist(source[i], target[i]);
    return w;
  }

  std::vector<char> surviving() const {
    std::vector<char> s(graph.vertices.size());
    for (int t : target) s[t] = 1;
    return s;
  }
};

// Fair types that both send and receive rows trade one out-edge and one
// in-edge of the same color; by the triangle inequality cost never grows.
void reroute_fair_types(Work& w) {
  const int m = w.inst.m();
  for (bool changed = true; changed;) {
    changed = false;
    for (int tau = 0; tau < static_cast<int>(w.graph.vertices.size()) && !changed; ++tau) {
      if (!w.fair[tau]) continue;
      for (int z = 1; z <= w.inst.c() && !changed; ++z) {
        int out = -1, in = -1;
        for (int i = 0; i < m; ++i) {
          if (w.inst.colors[i] != z || w.source[i] == w.target[i]) continue;
          if (out < 0 && w.source[i] == tau) out = i;
          if (in < 0 && w.target[i] == tau) in = i;
        }
        if (out < 0 || in < 0) continue;
        w.target[in] = w.target[out];
        w.target[out] = tau;
        changed = true;
      }
    }
  }
  for (int tau = 0; tau < static_cast<int>(w.graph.vertices.size()); ++tau) {
    if (!w.fair[tau]) continue;
    bool sends = false, receives = false;
    for (int i = 0; i < m; ++i) {
      if (w.source[i] == w.target[i]) continue;
      sends |= w.source[i] == tau;
      receives |= w.target[i] == tau;
    }
    if (sends && receives) throw std::logic_error("fair type still sends and receives after rerouting");
  }
}

// Splits `rows` (one fair multiset) into fairlets: part j holds the j-th
// block of comp[z] rows of each color z.
void chunk(const Instance& inst, std::span<const int> comp, const std::vector<int>& rows,
           int first_part, std::vector<int>& part_of) {
  std::vector<int> seen(comp.size());
  for (int i : rows) {
    const int z = inst.colors[i] - 1;
    part_of[i] = first_part + seen[z]++ / comp[z];
  }
}

struct Aux {
  std::vector<int> minus_of;  // per row
  std::vector<int> plus_of;   // per row
  std::vector<int> plus_type;
  std::vector<char> minus_fair;
  std::vector<int> minus_type;  // -1 for unfair (-)-nodes
  std::vector<std::vector<int>> matchings;  // sorted by weight
  std::vector<int> matching_of;             // per row
};

Aux build_aux(const Work& w, std::span<const int> comp, int fairlet) {
  const int m = w.inst.m();
  const int nv = static_cast<int>(w.graph.vertices.size());
  Aux a;
  a.minus_of.assign(m, -1);
  a.plus_of.assign(m, -1);

  int parts = 0;
  for (int rho = 0; rho < nv; ++rho) {
    std::vector<int> rows;
    for (int i = 0; i < m; ++i) {
      if (w.target[i] == rho) rows.push_back(i);
    }
    if (rows.empty()) continue;
    chunk(w.inst, comp, rows, parts, a.plus_of);
    const int count = static_cast<int>(rows.size()) / fairlet;
    a.plus_type.insert(a.plus_type.end(), count, rho);
    parts += count;
  }

  int minus = 0;
  std::vector<int> unfair_rows;
  for (int tau = 0; tau < nv; ++tau) {
    std::vector<int> rows;
    for (int i = 0; i < m; ++i) {
      if (w.source[i] == tau) (w.fair[tau] ? rows : unfair_rows).push_back(i);
    }
    if (rows.empty()) continue;
    chunk(w.inst, comp, rows, minus, a.minus_of);
    const int count = static_cast<int>(rows.size()) / fairlet;
    a.minus_type.insert(a.minus_type.end(), count, tau);
    a.minus_fair.insert(a.minus_fair.end(), count, 1);
    minus += count;
  }
  chunk(w.inst, comp, unfair_rows, minus, a.minus_of);
  const int unfair_parts = static_cast<int>(unfair_rows.size()) / fairlet;
  a.minus_type.insert(a.minus_type.end(), unfair_parts, -1);
  a.minus_fair.insert(a.minus_fair.end(), unfair_parts, 0);
  minus += unfair_parts;
  if (minus != parts) throw std::logic_error("auxiliary graph sides differ");

  std::vector<std::vector<int>> all;
  for (int z = 1; z <= w.inst.c(); ++z) {
    BipartiteMultigraph h{minus, parts, {}};
    std::vector<int> rows;
    for (int i = 0; i < m; ++i) {
      if (w.inst.colors[i] != z) continue;
      rows.push_back(i);
      h.edges.push_back({a.minus_of[i], a.plus_of[i], i, w.dist(w.source[i], w.target[i])});
    }
    for (auto& ids : decompose_regular_bipartite(h)) {
      for (int& id : ids) id = rows[id];
      all.push_back(std::move(ids));
    }
  }
  if (static_cast<int>(all.size()) != fairlet) throw std::logic_error("expected one matching per fairlet slot");
  std::vector<long long> weight(all.size());
  for (std::size_t j = 0; j < all.size(); ++j) {
    for (int i : all[j]) weight[j] += w.dist(w.source[i], w.target[i]);
  }
  std::vector<int> order(all.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int x, int y) { return weight[x] < weight[y]; });
  a.matching_of.assign(m, -1);
  for (int j : order) {
    for (int i : all[j]) a.matching_of[i] = static_cast<int>(a.matchings.size());
    a.matchings.push_back(std::move(all[j]));
  }
  return a;
}

// Alternating-path rewiring until every fair (-)-node has all its edges at
// its M_1 neighbor. Returns the number of shifts.
int align_fair_nodes(Work& w, Aux& a) {
  const int nodes = static_cast<int>(a.plus_type.size());
  const int mats = static_cast<int>(a.matchings.size());
  // edge of matching j at each node
  std::vector<std::vector<int>> at_minus(mats, std::vector<int>(nodes, -1));
  std::vector<std::vector<int>> at_plus(mats, std::vector<int>(nodes, -1));
  for (int j = 0; j < mats; ++j) {
    for (int i : a.matchings[j]) {
      at_minus[j][a.minus_of[i]] = i;
      at_plus[j][a.plus_of[i]] = i;
    }
  }
  // canonical order: by type, then part index
  std::vector<int> order;
  for (int v = 0; v < nodes; ++v) {
    if (a.minus_fair[v]) order.push_back(v);
  }
  std::stable_sort(order.begin(), order.end(), [&](int x, int y) { return a.minus_type[x] < a.minus_type[y]; });

  int shifts = 0;
  for (bool changed = true; changed;) {
    changed = false;
    for (int v1 : order) {
      for (int j = 1; j < mats; ++j) {
        const int v0 = a.plus_of[at_minus[j][v1]];
        if (v0 == a.plus_of[at_minus[0][v1]]) continue;
        std::vector<int> path{v1};
        while (true) {
          const int plus = a.plus_of[at_minus[0][path.back()]];
          if (plus == v0) break;
          const int next = a.minus_of[at_plus[j][plus]];
          path.push_back(next);
          if (!a.minus_fair[next]) break;
        }
        std::vector<std::pair<int, int>> moves;  // (row, new plus node)
        for (std::size_t idx = 0; idx < path.size(); ++idx) {
          const int dest = idx + 1 < path.size() ? a.plus_of[at_minus[0][path[idx]]] : v0;
          moves.emplace_back(at_minus[j][path[idx]], dest);
        }
        for (const auto& [row, dest] : moves) {
          a.plus_of[row] = dest;
          at_plus[j][dest] = row;
          w.target[row] = a.plus_type[dest];
        }
        ++shifts;
        changed = true;
      }
    }
  }
  for (int v1 : order) {
    for (int j = 1; j < mats; ++j) {
      if (a.plus_of[at_minus[j][v1]] != a.plus_of[at_minus[0][v1]]) {
        throw std::logic_error("fair (-)-node left unaligned");
      }
    }
  }
  return shifts;
}

int nearest(const Work& w, int from, const std::vector<char>& allowed) {
  int best = -1;
  for (int v = 0; v < static_cast<int>(allowed.size()); ++v) {
    if (allowed[v] && (best < 0 || w.dist(from, v) < w.dist(from, best))) best = v;
  }
  return best;
}

}  // namespace

NormalizeReport normalize_with_report(const Instance& inst, const Solution& sol) {
  validate(inst);
  Instance relaxed = inst;
  relaxed.k = inst.m() * inst.n();
  const Verdict v = verify_solution(relaxed, sol);
  if (!v.feasible()) {
    throw InputError("normalize_solution needs a fair solution with at most r rows: " + v.violations.front());
  }

  NormalizeReport rep;
  rep.input_cost = sol.edit_count;
  rep.input_survivors = sol.distinct_types;
  rep.fairlet = fairlet_size(inst.colors);
  const auto comp = fairlet_composition(inst.colors);

  Work w{inst, build_edit_graph(inst, sol), {}, {}, {}, {}, {}};
  const int m = inst.m();
  const int nv = static_cast<int>(w.graph.vertices.size());
  w.in_m.assign(nv, 0);
  w.fair.assign(nv, 0);
  for (const auto& e : w.graph.edges) {
    w.source.push_back(e.source);
    w.target.push_back(e.target);
    w.in_m[e.source] = 1;
  }
  std::vector<int> members;
  for (int tau = 0; tau < nv; ++tau) {
    if (!w.in_m[tau]) continue;
    members.clear();
    for (int i = 0; i < m; ++i) {
      if (w.source[i] == tau) members.push_back(i);
    }
    w.fair[tau] = is_fair_cluster(members, inst.colors);
  }
  w.dist.resize(nv, nv);
  for (int a = 0; a < nv; ++a) {
    for (int b = 0; b < nv; ++b) w.dist(a, b) = hamming(w.graph.vertices[a], w.graph.vertices[b]);
  }

  reroute_fair_types(w);
  rep.rerouted_cost = w.weight();
  const std::vector<int> base_target = w.target;
  const std::vector<char> base_survivors = w.surviving();

  Aux aux = build_aux(w, comp, rep.fairlet);
  for (int i : aux.matchings.front()) rep.lightest_matching_weight += w.dist(w.source[i], w.target[i]);
  rep.path_shifts = align_fair_nodes(w, aux);

  for (int tau = 0; tau < nv; ++tau) {
    if (!w.fair[tau]) continue;
    const int dest = nearest(w, tau, base_survivors);
    for (int i = 0; i < m; ++i) {
      if (w.source[i] == tau) w.target[i] = dest;
    }
  }

  const std::vector<char> after_redirect = w.surviving();
  for (int tau = 0; tau < nv; ++tau) {
    if (w.in_m[tau] || !after_redirect[tau]) continue;
    std::vector<char> in_neighbors(nv, 0);
    for (int i = 0; i < m; ++i) {
      if (base_target[i] == tau) in_neighbors[w.source[i]] = 1;
    }
    const int dest = nearest(w, tau, in_neighbors);
    for (int i = 0; i < m; ++i) {
      if (w.target[i] == tau) w.target[i] = dest;
    }
  }

  Matrix out(m, inst.n());
  for (int i = 0; i < m; ++i) out.row(i) = w.graph.vertices[w.target[i]];
  rep.solution = make_solution(inst, std::move(out));

  const Verdict after = verify_solution(relaxed, rep.solution);
  if (after.unfair_cluster) throw std::logic_error("normal form is unfair");
  if (rep.solution.distinct_types > rep.input_survivors) throw std::logic_error("normal form has more survivors");
  for (int t : w.target) {
    if (!w.in_m[t]) throw std::logic_error("normal form keeps a new type");
  }
  const long long bound = 4LL * rep.rerouted_cost + static_cast<long long>(rep.fairlet - 3) * rep.lightest_matching_weight;
  if (rep.solution.edit_count > bound) throw std::logic_error("normal form exceeds its charging bound");
  return rep;
}

Solution normalize_solution(const Instance& inst, const Solution& sol) {
  return normalize_with_report(inst, sol).solution;
}

}  // namespace fdmc
