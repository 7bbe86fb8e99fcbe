#include "fdmc/tree_decomposition.hpp"

#include <algorithm>
#include <bit>
#include <istream>
#include <numeric>
#include <set>
#include <sstream>

namespace fdmc {

int PrimalGraph::edge_count() const {
  int total = 0;
  for (const auto& nb : adj) total += static_cast<int>(nb.size());
  return total / 2;
}

bool PrimalGraph::adjacent(int a, int b) const {
  return std::binary_search(adj[a].begin(), adj[a].end(), b);
}

PrimalGraph build_primal_graph(const Matrix& mat) {
  if (mat.size() > 0 && (mat.minCoeff() < 0 || mat.maxCoeff() > 1)) {
    throw DomainError("primal graph needs a binary matrix");
  }
  PrimalGraph g;
  g.vertices = static_cast<int>(mat.rows());
  g.adj.assign(g.vertices, {});
  std::vector<int> ones;
  for (Eigen::Index j = 0; j < mat.cols(); ++j) {
    ones.clear();
    for (int i = 0; i < g.vertices; ++i) {
      if (mat(i, j) == 1) ones.push_back(i);
    }
    for (int a : ones) {
      for (int b : ones) {
        if (a != b) g.adj[a].push_back(b);
      }
    }
  }
  for (auto& nb : g.adj) {
    std::sort(nb.begin(), nb.end());
    nb.erase(std::unique(nb.begin(), nb.end()), nb.end());
  }
  return g;
}

int TreeDecomposition::width() const {
  std::size_t largest = 0;
  for (const auto& b : bags) largest = std::max(largest, b.size());
  return static_cast<int>(largest) - 1;
}

int NiceTreeDecomposition::width() const {
  std::size_t largest = 0;
  for (const auto& n : nodes) largest = std::max(largest, n.bag.size());
  return static_cast<int>(largest) - 1;
}

std::vector<std::string> decomposition_errors(const PrimalGraph& g, const TreeDecomposition& td) {
  std::vector<std::string> errors;
  const int nb = static_cast<int>(td.bags.size());
  if (td.vertices != g.vertices) {
    errors.push_back("vertex count " + std::to_string(td.vertices) + " differs from graph (" +
                     std::to_string(g.vertices) + ")");
  }
  if (nb == 0) {
    if (g.vertices > 0) errors.push_back("no bags");
    return errors;
  }
  for (int b = 0; b < nb; ++b) {
    for (int v : td.bags[b]) {
      if (v < 0 || v >= g.vertices) {
        errors.push_back("bag " + std::to_string(b + 1) + " holds unknown vertex " + std::to_string(v + 1));
        return errors;
      }
    }
  }
  std::vector<std::vector<int>> tree(nb);
  for (const auto& [a, b] : td.edges) {
    if (a < 0 || a >= nb || b < 0 || b >= nb || a == b) {
      errors.push_back("tree edge with bad endpoints");
      return errors;
    }
    tree[a].push_back(b);
    tree[b].push_back(a);
  }
  {
    std::vector<char> seen(nb);
    std::vector<int> stack{0};
    seen[0] = 1;
    int count = 1;
    while (!stack.empty()) {
      const int x = stack.back();
      stack.pop_back();
      for (int y : tree[x]) {
        if (!seen[y]) {
          seen[y] = 1;
          ++count;
          stack.push_back(y);
        }
      }
    }
    if (count != nb || static_cast<int>(td.edges.size()) != nb - 1) errors.push_back("bags do not form a tree");
  }
  std::vector<std::vector<int>> holding(g.vertices);
  for (int b = 0; b < nb; ++b) {
    for (int v : td.bags[b]) holding[v].push_back(b);
  }
  for (int v = 0; v < g.vertices; ++v) {
    if (holding[v].empty()) {
      errors.push_back("vertex " + std::to_string(v + 1) + " is in no bag");
      continue;
    }
    std::set<int> mine(holding[v].begin(), holding[v].end());
    int inner = 0;
    for (const auto& [a, b] : td.edges) inner += mine.count(a) && mine.count(b) ? 1 : 0;
    if (inner != static_cast<int>(mine.size()) - 1) {
      errors.push_back("bags holding vertex " + std::to_string(v + 1) + " are not connected");
    }
  }
  for (int v = 0; v < g.vertices; ++v) {
    for (int u : g.adj[v]) {
      if (u < v) continue;
      bool covered = false;
      for (int b : holding[v]) {
        if (std::binary_search(td.bags[b].begin(), td.bags[b].end(), u)) covered = true;
      }
      if (!covered) {
        errors.push_back("edge " + std::to_string(v + 1) + "-" + std::to_string(u + 1) + " is in no bag");
      }
    }
  }
  return errors;
}

TreeDecomposition decomposition_from_order(const PrimalGraph& g, const std::vector<int>& order) {
  const int n = g.vertices;
  TreeDecomposition td;
  td.vertices = n;
  if (n == 0) {
    td.bags.push_back({});
    return td;
  }
  std::vector<int> pos(n);
  for (int i = 0; i < n; ++i) pos[order[i]] = i;
  std::vector<std::set<int>> nbrs(n);
  for (int v = 0; v < n; ++v) nbrs[v].insert(g.adj[v].begin(), g.adj[v].end());
  std::vector<int> parent(n, -1);
  for (int i = 0; i < n; ++i) {
    const int v = order[i];
    std::vector<int> bag(nbrs[v].begin(), nbrs[v].end());
    int next = -1;
    for (int u : bag) {
      if (next < 0 || pos[u] < pos[next]) next = u;
    }
    if (next >= 0) parent[i] = pos[next];
    for (int a : bag) {
      nbrs[a].erase(v);
      for (int b : bag) {
        if (a != b) nbrs[a].insert(b);
      }
    }
    bag.push_back(v);
    std::sort(bag.begin(), bag.end());
    td.bags.push_back(std::move(bag));
  }
  int last_root = -1;
  for (int i = 0; i < n; ++i) {
    if (parent[i] >= 0) {
      td.edges.emplace_back(i, parent[i]);
    } else {
      if (last_root >= 0) td.edges.emplace_back(last_root, i);
      last_root = i;
    }
  }
  return td;
}

std::vector<int> min_fill_order(const PrimalGraph& g) {
  const int n = g.vertices;
  std::vector<std::set<int>> nbrs(n);
  for (int v = 0; v < n; ++v) nbrs[v].insert(g.adj[v].begin(), g.adj[v].end());
  std::vector<char> done(n);
  std::vector<int> order;
  for (int step = 0; step < n; ++step) {
    int best = -1;
    long long best_fill = 0;
    for (int v = 0; v < n; ++v) {
      if (done[v]) continue;
      long long fill = 0;
      for (auto a = nbrs[v].begin(); a != nbrs[v].end(); ++a) {
        for (auto b = std::next(a); b != nbrs[v].end(); ++b) fill += nbrs[*a].count(*b) ? 0 : 1;
      }
      if (best < 0 || fill < best_fill) {
        best = v;
        best_fill = fill;
      }
    }
    done[best] = 1;
    order.push_back(best);
    std::vector<int> bag(nbrs[best].begin(), nbrs[best].end());
    for (int a : bag) {
      nbrs[a].erase(best);
      for (int b : bag) {
        if (a != b) nbrs[a].insert(b);
      }
    }
  }
  return order;
}

std::pair<int, std::vector<int>> exact_treewidth(const PrimalGraph& g, int max_vertices) {
  const int n = g.vertices;
  if (n > max_vertices || n > 24) {
    throw CapacityError("exact treewidth refuses " + std::to_string(n) + " vertices (cap " +
                        std::to_string(max_vertices) + ")");
  }
  if (n == 0) return {0, {}};
  std::vector<std::uint32_t> adj(n);
  for (int v = 0; v < n; ++v) {
    for (int u : g.adj[v]) adj[v] |= 1u << u;
  }
  // vertices outside S ∪ {v} reachable from v through S
  const auto q = [&](std::uint32_t s, int v) {
    std::uint32_t inside = 1u << v, nb = 0;
    while (true) {
      nb = 0;
      for (std::uint32_t x = inside; x; x &= x - 1) nb |= adj[std::countr_zero(x)];
      const std::uint32_t grown = inside | (nb & s);
      if (grown == inside) break;
      inside = grown;
    }
    return std::popcount(nb & ~(s | (1u << v)));
  };
  const std::uint32_t full = n == 32 ? ~0u : (1u << n) - 1;
  std::vector<int> tw(static_cast<std::size_t>(full) + 1, 0);
  std::vector<signed char> last(tw.size(), -1);
  tw[0] = -1;
  for (std::uint32_t s = 1; s <= full; ++s) {
    int best = n + 1;
    for (std::uint32_t x = s; x; x &= x - 1) {
      const int v = std::countr_zero(x);
      const std::uint32_t rest = s & ~(1u << v);
      const int val = std::max(tw[rest], q(rest, v));
      if (val < best) {
        best = val;
        last[s] = static_cast<signed char>(v);
      }
    }
    tw[s] = best;
  }
  std::vector<int> order;
  for (std::uint32_t s = full; s; s &= ~(1u << last[s])) order.push_back(last[s]);
  std::reverse(order.begin(), order.end());
  return {std::max(tw[full], 0), order};
}

std::string write_pace(const TreeDecomposition& td) {
  std::ostringstream out;
  out << "s td " << td.bags.size() << ' ' << td.width() + 1 << ' ' << td.vertices << '\n';
  for (std::size_t b = 0; b < td.bags.size(); ++b) {
    out << "b " << b + 1;
    for (int v : td.bags[b]) out << ' ' << v + 1;
    out << '\n';
  }
  for (const auto& [a, b] : td.edges) out << a + 1 << ' ' << b + 1 << '\n';
  return out.str();
}

TreeDecomposition read_pace(std::istream& in) {
  TreeDecomposition td;
  std::string line;
  int declared = -1;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream ls(line);
    std::string head;
    if (!(ls >> head) || head == "c") continue;
    const auto fail = [&](const std::string& why) {
      throw InputError("td line " + std::to_string(lineno) + ": " + why);
    };
    if (head == "s") {
      std::string kind;
      int bags = 0, largest = 0;
      if (!(ls >> kind >> bags >> largest >> td.vertices) || kind != "td" || bags < 0 || td.vertices < 0) {
        fail("bad solution line");
      }
      declared = bags;
      td.bags.assign(bags, {});
    } else if (head == "b") {
      if (declared < 0) fail("bag before solution line");
      int id = 0;
      if (!(ls >> id) || id < 1 || id > declared) fail("bad bag id");
      int v = 0;
      while (ls >> v) {
        if (v < 1 || v > td.vertices) fail("vertex " + std::to_string(v) + " out of range");
        td.bags[id - 1].push_back(v - 1);
      }
      std::sort(td.bags[id - 1].begin(), td.bags[id - 1].end());
      td.bags[id - 1].erase(std::unique(td.bags[id - 1].begin(), td.bags[id - 1].end()), td.bags[id - 1].end());
    } else {
      if (declared < 0) fail("edge before solution line");
      int a = 0, b = 0;
      try {
        a = std::stoi(head);
      } catch (const std::exception&) {
        fail("unrecognized line");
      }
      if (!(ls >> b) || a < 1 || a > declared || b < 1 || b > declared) fail("bad tree edge");
      td.edges.emplace_back(a - 1, b - 1);
    }
  }
  if (declared < 0) throw InputError("td input has no solution line");
  return td;
}

namespace {

struct NiceBuilder {
  const TreeDecomposition& td;
  std::vector<std::vector<int>> tree;
  NiceTreeDecomposition out;

  int add(NiceKind kind, std::vector<int> bag, int vertex, std::vector<int> children) {
    out.nodes.push_back({kind, std::move(bag), vertex, std::move(children)});
    return static_cast<int>(out.nodes.size()) - 1;
  }

  // Forgets then introduces vertices so that the chain above `node` ends at `to`.
  int transition(int node, const std::vector<int>& to) {
    std::vector<int> bag = out.nodes[node].bag;
    std::vector<int> drop, gain;
    std::set_difference(bag.begin(), bag.end(), to.begin(), to.end(), std::back_inserter(drop));
    std::set_difference(to.begin(), to.end(), bag.begin(), bag.end(), std::back_inserter(gain));
    for (int v : drop) {
      bag.erase(std::find(bag.begin(), bag.end(), v));
      node = add(NiceKind::Forget, bag, v, {node});
    }
    for (int v : gain) {
      bag.insert(std::upper_bound(bag.begin(), bag.end(), v), v);
      node = add(NiceKind::Introduce, bag, v, {node});
    }
    return node;
  }

  int build(int t, int parent) {
    std::vector<int> branches;
    for (int ch : tree[t]) {
      if (ch == parent) continue;
      branches.push_back(transition(build(ch, t), td.bags[t]));
    }
    if (branches.empty()) return transition(add(NiceKind::Leaf, {}, -1, {}), td.bags[t]);
    while (branches.size() > 1) {
      const int a = branches[branches.size() - 2];
      const int b = branches.back();
      branches.pop_back();
      branches.back() = add(NiceKind::Join, td.bags[t], -1, {a, b});
    }
    return branches.front();
  }
};

}  // namespace

NiceTreeDecomposition make_nice(const TreeDecomposition& td) {
  NiceBuilder b{td, std::vector<std::vector<int>>(td.bags.size()), {}};
  if (td.bags.empty()) {
    b.out.root = b.add(NiceKind::Leaf, {}, -1, {});
    return b.out;
  }
  for (const auto& [x, y] : td.edges) {
    b.tree[x].push_back(y);
    b.tree[y].push_back(x);
  }
  for (auto& nb : b.tree) std::sort(nb.begin(), nb.end());
  b.out.root = b.transition(b.build(0, -1), {});
  return b.out;
}

std::vector<std::string> nice_errors(const PrimalGraph& g, const NiceTreeDecomposition& nice) {
  std::vector<std::string> errors;
  const int nn = static_cast<int>(nice.nodes.size());
  if (nice.root < 0 || nice.root >= nn) return {"missing root"};
  if (!nice.nodes[nice.root].bag.empty()) errors.push_back("root bag is not empty");
  TreeDecomposition td;
  td.vertices = g.vertices;
  for (int x = 0; x < nn; ++x) {
    const auto& node = nice.nodes[x];
    td.bags.push_back(node.bag);
    for (int ch : node.children) {
      if (ch < 0 || ch >= nn) return {"child index out of range"};
      td.edges.emplace_back(x, ch);
    }
    const std::string at = "node " + std::to_string(x) + ": ";
    if (!std::is_sorted(node.bag.begin(), node.bag.end())) errors.push_back(at + "bag not sorted");
    switch (node.kind) {
      case NiceKind::Leaf:
        if (!node.children.empty() || !node.bag.empty()) errors.push_back(at + "leaf must be empty and childless");
        break;
      case NiceKind::Introduce:
      case NiceKind::Forget: {
        if (node.children.size() != 1) {
          errors.push_back(at + "introduce/forget needs one child");
          break;
        }
        std::vector<int> expect = nice.nodes[node.children[0]].bag;
        const bool has = std::binary_search(expect.begin(), expect.end(), node.vertex);
        if (node.kind == NiceKind::Introduce) {
          if (has) errors.push_back(at + "introduced vertex already in child");
          expect.insert(std::upper_bound(expect.begin(), expect.end(), node.vertex), node.vertex);
        } else {
          if (!has) errors.push_back(at + "forgotten vertex missing from child");
          expect.erase(std::remove(expect.begin(), expect.end(), node.vertex), expect.end());
        }
        if (expect != node.bag) errors.push_back(at + "bag does not differ from child by its vertex");
        break;
      }
      case NiceKind::Join:
        if (node.children.size() != 2 || nice.nodes[node.children[0]].bag != node.bag ||
            nice.nodes[node.children[1]].bag != node.bag) {
          errors.push_back(at + "join needs two children with equal bags");
        }
        break;
    }
  }
  for (auto& e : decomposition_errors(g, td)) errors.push_back(std::move(e));
  return errors;
}

NiceTreeDecomposition decompose(const PrimalGraph& g, const std::optional<TreeDecomposition>& external,
                                const DecomposeOptions& opts) {
  if (external) {
    const auto errors = decomposition_errors(g, *external);
    if (!errors.empty()) {
      std::string msg = "invalid tree decomposition:";
      for (const auto& e : errors) msg += "\n  " + e;
      throw InputError(msg);
    }
    return make_nice(*external);
  }
  TreeDecomposition td = decomposition_from_order(g, min_fill_order(g));
  if (g.vertices <= opts.exact_up_to && g.vertices <= 16) {
    TreeDecomposition exact = decomposition_from_order(g, exact_treewidth(g).second);
    if (exact.width() < td.width()) td = std::move(exact);
  }
  return make_nice(td);
}

}  // namespace fdmc
