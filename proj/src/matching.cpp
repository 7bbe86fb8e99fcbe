#include "fdmc/matching.hpp"

#include "fdmc/core.hpp"

#include <algorithm>

namespace fdmc {

int regular_degree(const BipartiteMultigraph& graph) {
  if (graph.left_count < 0 || graph.right_count < 0) throw InputError("negative side size");
  std::vector<int> left(graph.left_count), right(graph.right_count);
  for (const auto& e : graph.edges) {
    if (e.left < 0 || e.left >= graph.left_count || e.right < 0 || e.right >= graph.right_count) {
      throw InputError("bipartite edge endpoint out of range (" + std::to_string(e.left) + ", " +
                       std::to_string(e.right) + ")");
    }
    ++left[e.left];
    ++right[e.right];
  }
  if (graph.edges.empty()) return 0;
  if (graph.left_count != graph.right_count) throw InputError("regular bipartite graph needs equal sides");
  const int d = left.front();
  const auto off = [d](int x) { return x != d; };
  if (std::any_of(left.begin(), left.end(), off) || std::any_of(right.begin(), right.end(), off)) {
    throw InputError("bipartite graph is not regular");
  }
  return d;
}

namespace {

struct Decomposer {
  const BipartiteMultigraph& g;
  int n;

  // Kuhn's augmenting paths; a regular bipartite graph always has a perfect matching.
  std::vector<int> perfect_matching(const std::vector<int>& ids) const {
    std::vector<std::vector<int>> adj(n);
    for (int id : ids) adj[g.edges[id].left].push_back(id);
    std::vector<int> match_right(n, -1);
    std::vector<char> seen(n);
    auto augment = [&](auto&& self, int u) -> bool {
      for (int id : adj[u]) {
        const int w = g.edges[id].right;
        if (seen[w]) continue;
        seen[w] = 1;
        if (match_right[w] < 0 || self(self, g.edges[match_right[w]].left)) {
          match_right[w] = id;
          return true;
        }
      }
      return false;
    };
    for (int u = 0; u < n; ++u) {
      std::fill(seen.begin(), seen.end(), 0);
      if (!augment(augment, u)) throw std::logic_error("regular bipartite graph without perfect matching");
    }
    std::sort(match_right.begin(), match_right.end());
    return match_right;
  }

  // Splits an even-regular edge set into two halves along Euler circuits.
  std::pair<std::vector<int>, std::vector<int>> euler_split(const std::vector<int>& ids) const {
    std::vector<std::vector<int>> adj(2 * n);
    for (std::size_t i = 0; i < ids.size(); ++i) {
      const auto& e = g.edges[ids[i]];
      adj[e.left].push_back(static_cast<int>(i));
      adj[n + e.right].push_back(static_cast<int>(i));
    }
    std::vector<char> used(ids.size());
    std::vector<std::size_t> ptr(2 * n);
    std::pair<std::vector<int>, std::vector<int>> halves;
    for (int start = 0; start < 2 * n; ++start) {
      std::vector<std::pair<int, int>> stack{{start, -1}};
      std::vector<int> circuit;
      while (!stack.empty()) {
        const auto [v, via] = stack.back();
        while (ptr[v] < adj[v].size() && used[adj[v][ptr[v]]]) ++ptr[v];
        if (ptr[v] < adj[v].size()) {
          const int i = adj[v][ptr[v]];
          used[i] = 1;
          const auto& e = g.edges[ids[i]];
          stack.emplace_back(v == e.left ? n + e.right : e.left, i);
        } else {
          stack.pop_back();
          if (via >= 0) circuit.push_back(via);
        }
      }
      for (std::size_t pos = 0; pos < circuit.size(); ++pos) {
        (pos % 2 == 0 ? halves.first : halves.second).push_back(ids[circuit[pos]]);
      }
    }
    std::sort(halves.first.begin(), halves.first.end());
    std::sort(halves.second.begin(), halves.second.end());
    return halves;
  }

  void run(const std::vector<int>& ids, int d, std::vector<std::vector<int>>& out) const {
    if (d == 0) return;
    if (d == 1) {
      out.push_back(ids);
      return;
    }
    if (d % 2 == 1) {
      auto m = perfect_matching(ids);
      std::vector<int> rest;
      std::set_difference(ids.begin(), ids.end(), m.begin(), m.end(), std::back_inserter(rest));
      out.push_back(std::move(m));
      run(rest, d - 1, out);
      return;
    }
    const auto [a, b] = euler_split(ids);
    run(a, d / 2, out);
    run(b, d / 2, out);
  }
};

}  // namespace

std::vector<std::vector<int>> decompose_regular_bipartite(const BipartiteMultigraph& graph) {
  const int d = regular_degree(graph);
  std::vector<std::vector<int>> out;
  if (d == 0) return out;
  std::vector<int> ids(graph.edges.size());
  for (std::size_t i = 0; i < ids.size(); ++i) ids[i] = static_cast<int>(i);
  Decomposer{graph, graph.left_count}.run(ids, d, out);
  return out;
}

}  // namespace fdmc
