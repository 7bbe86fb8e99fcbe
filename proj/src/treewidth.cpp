#include "fdmc/treewidth.hpp"

#include <algorithm>
#include <numeric>
#include <unordered_map>

namespace fdmc {

int column_cost(int x, int y) {
  if (x == 0 || 2 * y <= x) return y;
  return x - y;
}

int nonzero_count(const Matrix& mat) { return static_cast<int>((mat.array() != 0).count()); }

namespace {

void require_binary(const Instance& inst) {
  if (inst.p != 2 || (inst.rows.size() > 0 && (inst.rows.minCoeff() < 0 || inst.rows.maxCoeff() > 1))) {
    throw DomainError("treewidth solver needs a binary instance (p = 2)");
  }
}

OracleResult finish(const Instance& inst, Matrix out) {
  OracleResult res;
  res.witness = make_solution(inst, std::move(out));
  res.optimum_edits = res.witness->edit_count;
  res.status = res.witness->edit_count <= inst.k ? Status::Yes : Status::No;
  return res;
}

struct VecHash {
  std::size_t operator()(const std::vector<int>& v) const noexcept {
    std::size_t h = v.size();
    for (int x : v) h ^= static_cast<std::size_t>(x) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    return h;
  }
};

// Bag rows are labeled 0 (set aside, all ones zeroed) or by a part id >= 1.
// Parts carry their final cluster size and the colors seen so far.
struct State {
  std::vector<int> label;
  std::vector<int> s0;
  std::vector<int> counts;  // part-major, c per part
  int a = 0, q = 0, h = 0;
  int from0 = -1, from1 = -1;
};

struct Table {
  std::vector<State> states;
  std::unordered_map<std::vector<int>, int, VecHash> index;
};

class TreewidthDP {
 public:
  TreewidthDP(const Instance& inst, const NiceTreeDecomposition& nice, const TreewidthOptions& opts)
      : inst_(inst), nice_(nice), opts_(opts) {
    c_ = inst.c();
    comp_ = fairlet_composition(inst.colors);
    fairlet_ = fairlet_size(inst.colors);
    max_size_ = 2 * (nice.width() + 1);
    words_ = (inst.n() + 63) / 64;
    cols_of_row_.assign(inst.m(), {});
    for (int i = 0; i < inst.m(); ++i) {
      for (int j = 0; j < inst.n(); ++j) {
        if (inst.rows(i, j) == 1) cols_of_row_[i].push_back(j);
      }
    }
    charged_.assign(inst.n(), 0);
  }

  OracleResult run(std::map<std::string, std::uint64_t>& counters) {
    const int nn = static_cast<int>(nice_.nodes.size());
    tables_.assign(nn, {});
    processed_.assign(nn, {});
    std::vector<int> order;
    {
      std::vector<std::pair<int, bool>> stack{{nice_.root, false}};
      while (!stack.empty()) {
        auto [x, expanded] = stack.back();
        stack.pop_back();
        if (expanded) {
          order.push_back(x);
          continue;
        }
        stack.emplace_back(x, true);
        for (int ch : nice_.nodes[x].children) stack.emplace_back(ch, false);
      }
    }
    std::uint64_t total = 0, largest = 0;
    for (int x : order) {
      process(x);
      total += tables_[x].states.size();
      largest = std::max<std::uint64_t>(largest, tables_[x].states.size());
    }
    for (int j = 0; j < inst_.n(); ++j) {
      if (charged_[j] != 1) {
        throw std::logic_error("column " + std::to_string(j) + " charged " + std::to_string(charged_[j]) +
                               " times");
      }
    }
    counters["states"] = total;
    counters["max_states"] = largest;
    counters["columns_charged"] = static_cast<std::uint64_t>(inst_.n());

    const auto& root = tables_[nice_.root].states;
    int best = -1;
    for (int s = 0; s < static_cast<int>(root.size()); ++s) {
      const State& st = root[s];
      if (st.q > inst_.r - 1 && st.a != inst_.m()) continue;
      if (best < 0 || st.h < root[best].h) best = s;
    }
    if (best < 0) throw std::logic_error("treewidth DP found no suitable root state");
    Matrix out = reconstruct(best);
    OracleResult res = finish(inst_, std::move(out));
    if (res.witness->edit_count != root[best].h) {
      throw std::logic_error("reconstructed witness costs " + std::to_string(res.witness->edit_count) +
                             ", DP optimum is " + std::to_string(root[best].h));
    }
    return res;
  }

 private:
  int bound(int s0, int z) const { return comp_[z] * s0 / fairlet_; }

  static void canonicalize(State& st, int c) {
    std::vector<int> remap(st.s0.size() + 1, 0);
    int next = 0;
    for (int& l : st.label) {
      if (l == 0) continue;
      if (remap[l] == 0) remap[l] = ++next;
      l = remap[l];
    }
    std::vector<int> s0(next), counts(static_cast<std::size_t>(next) * c);
    for (std::size_t old = 1; old < remap.size(); ++old) {
      const int nw = remap[old];
      if (nw == 0) continue;
      s0[nw - 1] = st.s0[old - 1];
      std::copy_n(st.counts.begin() + (old - 1) * c, c, counts.begin() + (nw - 1) * c);
    }
    st.s0 = std::move(s0);
    st.counts = std::move(counts);
  }

  std::vector<int> key(const State& st, bool shape_only) const {
    std::vector<int> k(st.label);
    k.push_back(-1);
    k.insert(k.end(), st.s0.begin(), st.s0.end());
    if (shape_only) return k;
    k.insert(k.end(), st.counts.begin(), st.counts.end());
    k.push_back(st.a);
    k.push_back(st.q);
    if (!opts_.dominance) k.push_back(st.h);
    return k;
  }

  void insert(int node, State st) {
    canonicalize(st, c_);
    Table& t = tables_[node];
    auto k = key(st, false);
    auto it = t.index.find(k);
    if (it != t.index.end()) {
      if (st.h < t.states[it->second].h) t.states[it->second] = std::move(st);
      return;
    }
    if (t.states.size() >= opts_.state_cap) {
      throw CapacityError("treewidth DP exceeded " + std::to_string(opts_.state_cap) + " states at one node",
                          t.states.size());
    }
    t.index.emplace(std::move(k), static_cast<int>(t.states.size()));
    t.states.push_back(std::move(st));
  }

  void process(int x) {
    const NiceNode& node = nice_.nodes[x];
    switch (node.kind) {
      case NiceKind::Leaf:
        processed_[x].assign(words_, 0);
        insert(x, State{});
        break;
      case NiceKind::Introduce:
        processed_[x] = processed_[node.children[0]];
        introduce(x, node);
        break;
      case NiceKind::Forget:
        forget(x, node);
        break;
      case NiceKind::Join:
        processed_[x] = processed_[node.children[0]];
        for (int w = 0; w < words_; ++w) processed_[x][w] |= processed_[node.children[1]][w];
        join(x, node);
        break;
    }
    // child tables stay alive for reconstruction; only their indexes go
    for (int ch : node.children) {
      tables_[ch].index.clear();
      tables_[ch].index.rehash(0);
    }
  }

  void introduce(int x, const NiceNode& node) {
    const int v = node.vertex;
    const int z = inst_.colors[v] - 1;
    const int pos = static_cast<int>(std::lower_bound(node.bag.begin(), node.bag.end(), v) - node.bag.begin());
    const auto& child = tables_[node.children[0]].states;
    for (int si = 0; si < static_cast<int>(child.size()); ++si) {
      const State& base = child[si];
      State st = base;
      st.from0 = si;
      st.from1 = -1;
      st.label.insert(st.label.begin() + pos, 0);
      insert(x, st);
      const int parts = static_cast<int>(base.s0.size());
      for (int p = 1; p <= parts; ++p) {
        if (base.counts[(p - 1) * c_ + z] + 1 > bound(base.s0[p - 1], z)) continue;
        State joined = st;
        joined.label[pos] = p;
        ++joined.counts[(p - 1) * c_ + z];
        insert(x, std::move(joined));
      }
      if (base.q + 1 > inst_.r) continue;
      for (int s0 = fairlet_; s0 <= max_size_ && base.a + s0 <= inst_.m(); s0 += fairlet_) {
        State opened = st;
        opened.label[pos] = parts + 1;
        opened.s0.push_back(s0);
        opened.counts.resize(opened.counts.size() + c_, 0);
        opened.counts[parts * c_ + z] = 1;
        opened.a += s0;
        opened.q += 1;
        insert(x, std::move(opened));
      }
    }
  }

  void forget(int x, const NiceNode& node) {
    const int ch = node.children[0];
    const int v = node.vertex;
    const auto& cbag = nice_.nodes[ch].bag;
    const int pos = static_cast<int>(std::lower_bound(cbag.begin(), cbag.end(), v) - cbag.begin());
    processed_[x] = processed_[ch];
    std::vector<int> fresh;
    for (int j : cols_of_row_[v]) {
      if (!(processed_[ch][j / 64] >> (j % 64) & 1ULL)) fresh.push_back(j);
    }
    for (int j : fresh) {
      processed_[x][j / 64] |= 1ULL << (j % 64);
      ++charged_[j];
    }
    const auto& child = tables_[ch].states;
    std::vector<int> ones;
    for (int si = 0; si < static_cast<int>(child.size()); ++si) {
      const State& base = child[si];
      State st = base;
      st.from0 = si;
      st.from1 = -1;
      const int parts = static_cast<int>(base.s0.size());
      for (int j : fresh) {
        ones.assign(parts + 1, 0);
        for (std::size_t b = 0; b < cbag.size(); ++b) ones[base.label[b]] += inst_.rows(cbag[b], j);
        st.h += column_cost(0, ones[0]);
        for (int p = 1; p <= parts; ++p) st.h += column_cost(base.s0[p - 1], ones[p]);
      }
      st.label.erase(st.label.begin() + pos);
      insert(x, std::move(st));
    }
  }

  void join(int x, const NiceNode& node) {
    const auto& left = tables_[node.children[0]].states;
    const auto& right = tables_[node.children[1]].states;
    std::unordered_map<std::vector<int>, std::vector<int>, VecHash> by_shape;
    for (int si = 0; si < static_cast<int>(right.size()); ++si) by_shape[key(right[si], true)].push_back(si);
    for (int li = 0; li < static_cast<int>(left.size()); ++li) {
      const State& l = left[li];
      const auto it = by_shape.find(key(l, true));
      if (it == by_shape.end()) continue;
      const int parts = static_cast<int>(l.s0.size());
      std::vector<int> in_bag(static_cast<std::size_t>(parts) * c_, 0);
      for (std::size_t b = 0; b < node.bag.size(); ++b) {
        if (l.label[b] > 0) ++in_bag[(l.label[b] - 1) * c_ + inst_.colors[node.bag[b]] - 1];
      }
      const int sized = std::accumulate(l.s0.begin(), l.s0.end(), 0);
      for (int ri : it->second) {
        const State& r = right[ri];
        State st = l;
        st.from0 = li;
        st.from1 = ri;
        bool ok = true;
        for (int p = 0; p < parts && ok; ++p) {
          for (int z = 0; z < c_; ++z) {
            const int idx = p * c_ + z;
            st.counts[idx] = l.counts[idx] + r.counts[idx] - in_bag[idx];
            if (st.counts[idx] > bound(l.s0[p], z)) ok = false;
          }
        }
        st.a = l.a + r.a - sized;
        st.q = l.q + r.q - parts;
        st.h = l.h + r.h;
        if (!ok || st.a > inst_.m() || st.q > inst_.r) continue;
        insert(x, std::move(st));
      }
    }
  }

  // Top-down walk assigning every row to the set-aside pool (-1) or a cluster.
  Matrix reconstruct(int root_state) {
    const int m = inst_.m();
    std::vector<int> cluster_of(m, -2);
    std::vector<int> cluster_size;
    struct Frame {
      int node, state;
      std::vector<int> global;  // local part id - 1 -> cluster id
    };
    std::vector<Frame> stack{{nice_.root, root_state, {}}};
    while (!stack.empty()) {
      Frame f = std::move(stack.back());
      stack.pop_back();
      const NiceNode& node = nice_.nodes[f.node];
      const State& st = tables_[f.node].states[f.state];
      if (node.kind == NiceKind::Leaf) continue;
      if (node.kind == NiceKind::Join) {
        stack.push_back({node.children[0], st.from0, f.global});
        stack.push_back({node.children[1], st.from1, f.global});
        continue;
      }
      const int ch = node.children[0];
      const auto& cbag = nice_.nodes[ch].bag;
      const State& cst = tables_[ch].states[st.from0];
      std::vector<int> global(cst.s0.size(), -1);
      for (std::size_t b = 0; b < cbag.size(); ++b) {
        if (cst.label[b] == 0 || cbag[b] == node.vertex) continue;
        const auto at = std::lower_bound(node.bag.begin(), node.bag.end(), cbag[b]) - node.bag.begin();
        global[cst.label[b] - 1] = f.global[st.label[at] - 1];
      }
      if (node.kind == NiceKind::Introduce) {
        const auto at = std::lower_bound(node.bag.begin(), node.bag.end(), node.vertex) - node.bag.begin();
        const int l = st.label[at];
        cluster_of[node.vertex] = l == 0 ? -1 : f.global[l - 1];
      } else {
        const auto at = std::lower_bound(cbag.begin(), cbag.end(), node.vertex) - cbag.begin();
        const int l = cst.label[at];
        if (l > 0 && global[l - 1] < 0) {
          global[l - 1] = static_cast<int>(cluster_size.size());
          cluster_size.push_back(cst.s0[l - 1]);
        }
      }
      stack.push_back({ch, st.from0, std::move(global)});
    }

    // fill each cluster up to its fair composition from the set-aside pool
    const int clusters = static_cast<int>(cluster_size.size());
    std::vector<std::vector<int>> members(clusters);
    std::vector<int> pool;
    for (int i = 0; i < m; ++i) {
      if (cluster_of[i] == -2) throw std::logic_error("row missing from every bag");
      if (cluster_of[i] >= 0) {
        members[cluster_of[i]].push_back(i);
      } else {
        pool.push_back(i);
      }
    }
    for (int g = 0; g < clusters; ++g) {
      for (int z = 0; z < c_; ++z) {
        int have = 0;
        for (int i : members[g]) have += inst_.colors[i] == z + 1 ? 1 : 0;
        for (auto it = pool.begin(); it != pool.end() && have < bound(cluster_size[g], z);) {
          if (inst_.colors[*it] == z + 1) {
            members[g].push_back(*it);
            it = pool.erase(it);
            ++have;
          } else {
            ++it;
          }
        }
        if (have != bound(cluster_size[g], z)) throw std::logic_error("set-aside rows cannot fill a cluster");
      }
    }
    Matrix out = Matrix::Zero(m, inst_.n());
    for (int g = 0; g < clusters; ++g) {
      const RowType center = majority_center(inst_, members[g]);
      for (int i : members[g]) out.row(i) = center;
    }
    return out;
  }

  const Instance& inst_;
  const NiceTreeDecomposition& nice_;
  const TreewidthOptions& opts_;
  int c_ = 1;
  std::vector<int> comp_;
  int fairlet_ = 1;
  int max_size_ = 0;
  int words_ = 0;
  std::vector<std::vector<int>> cols_of_row_;
  std::vector<int> charged_;
  std::vector<Table> tables_;
  std::vector<std::vector<std::uint64_t>> processed_;
};

}  // namespace

std::optional<OracleResult> trivial_case(const Instance& inst, int treewidth) {
  validate(inst);
  require_binary(inst);
  if (2 * treewidth + 2 > fairlet_size(inst.colors)) return std::nullopt;
  OracleResult res = finish(inst, Matrix::Zero(inst.m(), inst.n()));
  res.counters["trivial"] = 1;
  return res;
}

OracleResult solve_treewidth(const Instance& inst, const TreewidthOptions& opts) {
  validate(inst);
  require_binary(inst);
  const PrimalGraph g = build_primal_graph(inst.rows);
  const NiceTreeDecomposition nice = decompose(g, opts.external, opts.decompose);
  const int width = std::max(0, nice.width());

  if (auto trivial = trivial_case(inst, width)) {
    trivial->counters["width"] = static_cast<std::uint64_t>(width);
    return *trivial;
  }

  std::vector<int> keep;
  for (int j = 0; j < inst.n(); ++j) {
    if (inst.rows.col(j).any()) keep.push_back(j);
  }
  Instance stripped = inst;
  stripped.rows = Matrix(inst.m(), static_cast<int>(keep.size()));
  for (std::size_t j = 0; j < keep.size(); ++j) stripped.rows.col(static_cast<Eigen::Index>(j)) = inst.rows.col(keep[j]);

  std::map<std::string, std::uint64_t> counters;
  TreewidthDP dp(stripped, nice, opts);
  OracleResult sub = dp.run(counters);

  Matrix out = Matrix::Zero(inst.m(), inst.n());
  for (std::size_t j = 0; j < keep.size(); ++j) out.col(keep[j]) = sub.witness->edited_rows.col(static_cast<Eigen::Index>(j));
  OracleResult res = finish(inst, std::move(out));
  if (res.witness->edit_count != *sub.optimum_edits) throw std::logic_error("column stripping changed the cost");
  Instance relaxed = inst;
  relaxed.k = std::max(inst.k, res.witness->edit_count);
  if (!verify_solution(relaxed, *res.witness).feasible()) throw std::logic_error("treewidth witness is infeasible");
  res.counters = std::move(counters);
  res.counters["width"] = static_cast<std::uint64_t>(width);
  return res;
}

}  // namespace fdmc
