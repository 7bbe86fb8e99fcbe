#include "fdmc/approx.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <set>

namespace fdmc {

int num_codes_for(int k, int fairlet) {
  const long long num = 2LL * (5LL * fairlet - 3) * k;
  return static_cast<int>((num + fairlet - 1) / fairlet);
}

int weight_budget(int k, int fairlet) {
  return static_cast<int>((5LL * fairlet - 3) * k / fairlet);
}

std::uint64_t coding_trials(int set_size, int num_codes, double delta) {
  if (set_size <= 1) return 1;
  if (set_size > num_codes) throw InputError("colorful set larger than the number of codes");
  // probability that a uniform coding is injective on a fixed set
  double log_p = 0;
  for (int i = 0; i < set_size; ++i) log_p += std::log(static_cast<double>(num_codes - i) / num_codes);
  const double trials = std::ceil(std::log(1.0 / delta) / std::exp(log_p));
  return static_cast<std::uint64_t>(std::max(1.0, trials));
}

std::vector<CodeAssignment> generate_codings(int num_fair_types, int num_codes, std::uint64_t seed,
                                             std::uint64_t trials) {
  if (num_codes < 1) throw InputError("need at least one code");
  std::vector<CodeAssignment> out;
  if (num_fair_types <= num_codes) {
    CodeAssignment identity{std::vector<int>(num_fair_types), num_codes};
    std::iota(identity.code_of.begin(), identity.code_of.end(), 1);
    out.push_back(std::move(identity));
    return out;
  }
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> pick(1, num_codes);
  for (std::uint64_t t = 0; t < trials; ++t) {
    CodeAssignment a{std::vector<int>(num_fair_types), num_codes};
    for (int& code : a.code_of) code = pick(rng);
    out.push_back(std::move(a));
  }
  return out;
}

std::vector<CodeAssignment> exhaustive_codings(int num_fair_types, int num_codes) {
  std::vector<CodeAssignment> out;
  CodeAssignment a{std::vector<int>(num_fair_types, 1), num_codes};
  while (true) {
    out.push_back(a);
    int i = num_fair_types - 1;
    while (i >= 0 && a.code_of[i] == num_codes) a.code_of[i--] = 1;
    if (i < 0) break;
    ++a.code_of[i];
  }
  return out;
}

int Template::total_weight() const {
  int w = 0;
  for (const auto& e : edges) w += e.count * e.weight;
  return w;
}

TemplateContext make_template_context(const Instance& inst) {
  TemplateContext ctx;
  ctx.inst = &inst;
  ctx.table = tabulate(inst);
  for (int t = 0; t < ctx.table.size(); ++t) (ctx.table.fair[t] ? ctx.fair : ctx.unfair).push_back(t);
  ctx.comp = fairlet_composition(inst.colors);
  ctx.fairlet = fairlet_size(inst.colors);
  return ctx;
}

namespace {

// Number of fairlets in `counts`, or -1 if it is not a fair multiple.
int fairlet_multiple(std::span<const int> counts, std::span<const int> comp) {
  const int t = counts[0] / comp[0];
  for (std::size_t z = 0; z < comp.size(); ++z) {
    if (counts[z] != t * comp[z]) return -1;
  }
  return t;
}

// Final per-color counts of every template vertex relative to its original
// cluster: labeled vertices start from their cluster, unlabeled from zero.
Eigen::MatrixXi balance(const TemplateContext& ctx, const Template& tmpl) {
  const int c = static_cast<int>(ctx.comp.size());
  Eigen::MatrixXi b = Eigen::MatrixXi::Zero(tmpl.vertex_count(), c);
  for (int u = 0; u < tmpl.labeled; ++u) b.row(u) = ctx.table.color_counts.row(ctx.unfair[u]);
  for (const auto& e : tmpl.edges) {
    b(e.from, e.color - 1) -= e.count;
    b(e.to, e.color - 1) += e.count;
  }
  return b;
}

std::vector<int> row_of(const Eigen::MatrixXi& m, int r) {
  std::vector<int> out(m.cols());
  for (int z = 0; z < m.cols(); ++z) out[z] = m(r, z);
  return out;
}

}  // namespace

std::string check_template(const TemplateContext& ctx, const Template& tmpl, int budget) {
  const int nv = tmpl.vertex_count();
  const int c = static_cast<int>(ctx.comp.size());
  if (tmpl.labeled != static_cast<int>(ctx.unfair.size())) return "labeled vertices must be the unfair types";
  std::set<int> codes(tmpl.codes.begin(), tmpl.codes.end());
  if (codes.size() != tmpl.codes.size()) return "codes must be unique";
  std::vector<int> degree(nv), out_deg(nv), in_deg(nv);
  std::vector<std::set<int>> out_nbrs(nv);
  for (const auto& e : tmpl.edges) {
    if (e.from < 0 || e.from >= nv || e.to < 0 || e.to >= nv || e.from == e.to) return "bad edge endpoints";
    if (e.color < 1 || e.color > c) return "edge color out of range";
    if (e.count < 1 || e.weight < 1) return "edges need positive count and weight";
    if (e.from < tmpl.labeled && e.to < tmpl.labeled &&
        e.weight != ctx.table.distance(ctx.unfair[e.from], ctx.unfair[e.to])) {
      return "labeled edge weight differs from the type distance";
    }
    degree[e.from] += e.count;
    degree[e.to] += e.count;
    out_deg[e.from] += e.count;
    in_deg[e.to] += e.count;
    out_nbrs[e.from].insert(e.to);
  }
  if (tmpl.total_weight() > budget) return "total weight exceeds the budget";
  for (int v = 0; v < nv; ++v) {
    if (degree[v] == 0) return "isolated vertex";
    if (v >= tmpl.labeled && out_deg[v] > 0 && (in_deg[v] > 0 || out_nbrs[v].size() > 1)) {
      return "unlabeled vertex must be a single-target source or a sink";
    }
  }
  for (const auto& e : tmpl.edges) {
    if (e.from >= tmpl.labeled && e.to >= tmpl.labeled && out_deg[e.to] > 0) return "unlabeled edges must form in-stars";
  }
  const Eigen::MatrixXi b = balance(ctx, tmpl);
  for (int v = 0; v < nv; ++v) {
    if (v >= tmpl.labeled && out_deg[v] > 0) {
      std::vector<int> sent(c);
      for (int z = 0; z < c; ++z) sent[z] = -b(v, z);
      if (fairlet_multiple(sent, ctx.comp) < 1) return "source must send whole fairlets";
      continue;
    }
    if (fairlet_multiple(row_of(b, v), ctx.comp) < 0) return "vertex ends unfair";
  }
  return {};
}

namespace {

class TemplateWalker {
 public:
  TemplateWalker(const TemplateContext& ctx, const CodeAssignment& coding, int budget, std::uint64_t cap,
                 const std::function<bool(const Template&)>& visit)
      : ctx_(ctx), budget_(budget), cap_(cap), visit_(visit) {
    labeled_ = static_cast<int>(ctx.unfair.size());
    colors_ = static_cast<int>(ctx.comp.size());
    std::vector<std::vector<int>> by_code(coding.num_codes + 1);
    for (std::size_t i = 0; i < ctx.fair.size(); ++i) by_code[coding.code_of[i]].push_back(ctx.fair[i]);
    for (int code = 1; code <= coding.num_codes; ++code) {
      if (by_code[code].empty()) continue;
      live_codes_.push_back(code);
      code_types_.push_back(std::move(by_code[code]));
    }
    role_.assign(live_codes_.size(), Unused);
    for (int u = 0; u < labeled_; ++u) {
      for (int z = 0; z < colors_; ++z) {
        if (ctx.table.color_counts(ctx.unfair[u], z) > 0) slots_.emplace_back(u, z);
      }
    }
  }

  TemplateEnumeration run() {
    roles(0, 0, 0);
    return result_;
  }

 private:
  enum Role { Unused, Sink, Source };
  struct SourceChoice {
    int code_idx;
    int target;  // labeled vertex, or labeled_ + sink position
    int fairlets;
    int weight;
  };
  struct Move {
    int from;  // labeled vertex
    int to;    // labeled vertex, or labeled_ + sink position
    int color;
    int count;
    int weight;
  };

  bool halted() const { return result_.capped || result_.stopped; }

  std::vector<int> weights_between(const std::vector<int>& a, const std::vector<int>& b) const {
    std::set<int> w;
    for (int x : a) {
      for (int y : b) {
        if (x != y) w.insert(ctx_.table.distance(x, y));
      }
    }
    return {w.begin(), w.end()};
  }

  const std::vector<int>& target_types(int target) {
    if (target < labeled_) {
      single_ = {ctx_.unfair[target]};
      return single_;
    }
    return code_types_[sinks_[target - labeled_]];
  }

  void roles(std::size_t ci, int nsink, int nsrc) {
    if (halted()) return;
    if (ci == live_codes_.size()) {
      sinks_.clear();
      sources_.clear();
      for (std::size_t i = 0; i < role_.size(); ++i) {
        if (role_[i] == Sink) sinks_.push_back(static_cast<int>(i));
        if (role_[i] == Source) sources_.push_back(static_cast<int>(i));
      }
      sink_weight_ = Eigen::MatrixXi::Zero(labeled_, static_cast<int>(sinks_.size()));
      sink_refs_ = sink_weight_;
      chosen_.clear();
      place_sources(0, 0);
      return;
    }
    const auto fits = [&](int s, int src) {
      return ctx_.fairlet * src + std::max(0, s - src) <= budget_;
    };
    role_[ci] = Unused;
    roles(ci + 1, nsink, nsrc);
    if (fits(nsink + 1, nsrc)) {
      role_[ci] = Sink;
      roles(ci + 1, nsink + 1, nsrc);
    }
    if (fits(nsink, nsrc + 1)) {
      role_[ci] = Source;
      roles(ci + 1, nsink, nsrc + 1);
    }
    role_[ci] = Unused;
  }

  void place_sources(std::size_t si, int spent) {
    if (halted()) return;
    if (si == sources_.size()) {
      moves_.clear();
      distribute(0, 0, slots_.empty() ? 0 : avail(0), spent);
      return;
    }
    const int code_idx = sources_[si];
    int largest = 0;
    for (int t : code_types_[code_idx]) {
      largest = std::max(largest, static_cast<int>(ctx_.table.rows_of_type[t].size()));
    }
    const int targets = labeled_ + static_cast<int>(sinks_.size());
    for (int target = 0; target < targets; ++target) {
      for (int w : weights_between(code_types_[code_idx], target_types(target))) {
        for (int j = 1; j * ctx_.fairlet <= largest && spent + j * ctx_.fairlet * w <= budget_; ++j) {
          chosen_.push_back({code_idx, target, j, w});
          place_sources(si + 1, spent + j * ctx_.fairlet * w);
          chosen_.pop_back();
        }
      }
    }
  }

  int avail(std::size_t si) const {
    return ctx_.table.color_counts(ctx_.unfair[slots_[si].first], slots_[si].second);
  }

  // Destinations of labeled vertex u: other labeled vertices, then sinks.
  int dest_count() const { return labeled_ - 1 + static_cast<int>(sinks_.size()); }
  int dest(int u, int di) const {
    if (di < labeled_ - 1) return di < u ? di : di + 1;
    return labeled_ + (di - (labeled_ - 1));
  }

  void distribute(std::size_t si, int di, int remaining, int spent) {
    if (halted()) return;
    if (si == slots_.size()) {
      leaf();
      return;
    }
    const auto [u, z] = slots_[si];
    if (di == dest_count() || remaining == 0) {
      distribute(si + 1, 0, si + 1 < slots_.size() ? avail(si + 1) : 0, spent);
      return;
    }
    distribute(si, di + 1, remaining, spent);
    const int d = dest(u, di);
    std::vector<int> options;
    const int sink = d - labeled_;
    if (d < labeled_) {
      options.push_back(ctx_.table.distance(ctx_.unfair[u], ctx_.unfair[d]));
    } else if (sink_refs_(u, sink) > 0) {
      options.push_back(sink_weight_(u, sink));
    } else {
      options = weights_between({ctx_.unfair[u]}, code_types_[sinks_[sink]]);
    }
    for (int w : options) {
      for (int count = 1; count <= remaining && spent + count * w <= budget_; ++count) {
        if (d >= labeled_) {
          ++sink_refs_(u, sink);
          sink_weight_(u, sink) = w;
        }
        moves_.push_back({u, d, z + 1, count, w});
        distribute(si, di + 1, remaining - count, spent + count * w);
        moves_.pop_back();
        if (d >= labeled_) --sink_refs_(u, sink);
      }
    }
  }

  void leaf() {
    // vertex ids: labeled first, then used codes in code order
    std::vector<int> vertex_of_code(live_codes_.size(), -1);
    Template t;
    t.labeled = labeled_;
    for (std::size_t i = 0; i < live_codes_.size(); ++i) {
      if (role_[i] == Unused) continue;
      vertex_of_code[i] = labeled_ + static_cast<int>(t.codes.size());
      t.codes.push_back(live_codes_[i]);
    }
    const auto vertex = [&](int target) {
      return target < labeled_ ? target : vertex_of_code[sinks_[target - labeled_]];
    };
    for (const auto& mv : moves_) t.edges.push_back({mv.from, vertex(mv.to), mv.color, mv.count, mv.weight});
    for (const auto& s : chosen_) {
      for (int z = 0; z < colors_; ++z) {
        t.edges.push_back({vertex_of_code[s.code_idx], vertex(s.target), z + 1, s.fairlets * ctx_.comp[z], s.weight});
      }
    }

    const Eigen::MatrixXi b = balance(ctx_, t);
    for (int u = 0; u < labeled_; ++u) {
      if (fairlet_multiple(row_of(b, u), ctx_.comp) < 0) return;
    }
    for (int s : sinks_) {
      if (fairlet_multiple(row_of(b, vertex_of_code[s]), ctx_.comp) < 1) return;
    }
    std::sort(t.edges.begin(), t.edges.end());
    if (++result_.templates > cap_) {
      result_.capped = true;
      return;
    }
    if (visit_(t)) result_.stopped = true;
  }

  const TemplateContext& ctx_;
  int budget_;
  std::uint64_t cap_;
  const std::function<bool(const Template&)>& visit_;
  int labeled_ = 0;
  int colors_ = 0;
  std::vector<int> live_codes_;
  std::vector<std::vector<int>> code_types_;
  std::vector<Role> role_;
  std::vector<int> sinks_, sources_;
  std::vector<SourceChoice> chosen_;
  std::vector<std::pair<int, int>> slots_;
  std::vector<Move> moves_;
  Eigen::MatrixXi sink_weight_, sink_refs_;
  std::vector<int> single_;
  TemplateEnumeration result_;
};

}  // namespace

TemplateEnumeration enumerate_templates(const TemplateContext& ctx, const CodeAssignment& coding, int budget,
                                        std::uint64_t cap, const std::function<bool(const Template&)>& visit) {
  if (coding.code_of.size() != ctx.fair.size()) throw InputError("coding does not cover the fair types");
  return TemplateWalker(ctx, coding, budget, cap, visit).run();
}

std::optional<Solution> assign_types_to_template(const TemplateContext& ctx, const Template& tmpl,
                                                 const CodeAssignment& coding) {
  const Instance& inst = *ctx.inst;
  const TypeTable& table = ctx.table;
  const int nv = tmpl.vertex_count();
  const int c = static_cast<int>(ctx.comp.size());

  Eigen::MatrixXi out = Eigen::MatrixXi::Zero(nv, c);
  std::vector<int> target(nv, -1), leaf_weight(nv, 0);
  for (const auto& e : tmpl.edges) {
    out(e.from, e.color - 1) += e.count;
    if (e.from >= tmpl.labeled) {
      target[e.from] = e.to;
      leaf_weight[e.from] = e.weight;
    }
  }

  // filters (i) row availability and (ii) exact distances to labeled neighbors
  std::vector<std::vector<int>> cand(nv);
  for (int v = tmpl.labeled; v < nv; ++v) {
    for (std::size_t i = 0; i < ctx.fair.size(); ++i) {
      if (coding.code_of[i] != tmpl.codes[v - tmpl.labeled]) continue;
      const int t = ctx.fair[i];
      bool ok = (table.color_counts.row(t).array() >= out.row(v).array()).all();
      for (const auto& e : tmpl.edges) {
        if (!ok) break;
        if (e.from == v && e.to < tmpl.labeled) ok = table.distance(t, ctx.unfair[e.to]) == e.weight;
        if (e.to == v && e.from < tmpl.labeled) ok = table.distance(t, ctx.unfair[e.from]) == e.weight;
      }
      if (ok) cand[v].push_back(t);
    }
    if (cand[v].empty()) return std::nullopt;
  }

  const auto empties = [&](int v, int t) {
    return static_cast<int>(table.rows_of_type[t].size()) == out.row(v).sum();
  };
  std::vector<int> chosen(nv, -1);
  for (int u = 0; u < tmpl.labeled; ++u) chosen[u] = ctx.unfair[u];
  int emptied = 0;

  // pick a leaf type compatible with `center` (or any, if center < 0),
  // preferring one whose cluster is emptied
  const auto pick_leaf = [&](int v, int center) {
    int first = -1;
    for (int t : cand[v]) {
      if (center >= 0 && table.distance(t, center) != leaf_weight[v]) continue;
      if (empties(v, t)) return t;
      if (first < 0) first = t;
    }
    return first;
  };

  for (int v = tmpl.labeled; v < nv; ++v) {
    if (out.row(v).sum() > 0) {
      if (target[v] < tmpl.labeled) {
        chosen[v] = pick_leaf(v, -1);
        emptied += empties(v, chosen[v]) ? 1 : 0;
      }
      continue;
    }
    std::vector<int> leaves;
    for (int l = tmpl.labeled; l < nv; ++l) {
      if (target[l] == v) leaves.push_back(l);
    }
    int best_center = -1, best_emptied = -1;
    for (int center : cand[v]) {
      int count = 0;
      bool ok = true;
      for (int l : leaves) {
        const int t = pick_leaf(l, center);
        if (t < 0) {
          ok = false;
          break;
        }
        count += empties(l, t) ? 1 : 0;
      }
      if (ok && count > best_emptied) {
        best_emptied = count;
        best_center = center;
      }
    }
    if (best_center < 0) return std::nullopt;
    chosen[v] = best_center;
    for (int l : leaves) chosen[l] = pick_leaf(l, best_center);
    emptied += best_emptied;
  }

  const Eigen::MatrixXi b = balance(ctx, tmpl);
  int survivors = static_cast<int>(ctx.fair.size()) - emptied;
  for (int u = 0; u < tmpl.labeled; ++u) survivors += b.row(u).sum() > 0 ? 1 : 0;
  if (survivors > inst.r) return std::nullopt;

  std::vector<RowMove> moves;
  for (const auto& e : tmpl.edges) moves.push_back({chosen[e.from], chosen[e.to], e.color, e.count});
  std::sort(moves.begin(), moves.end());
  Solution sol = make_solution(inst, apply_moves(inst, table, moves));
  Instance relaxed = inst;
  relaxed.k = std::max(inst.k, sol.edit_count);
  if (sol.edit_count != tmpl.total_weight() || !verify_solution(relaxed, sol).feasible()) {
    throw std::logic_error("template assignment produced an invalid witness");
  }
  return sol;
}

ApproxResult solve_approx(const Instance& inst, const ApproxOptions& opts) {
  validate(inst);
  ApproxResult res;
  {
    Solution same = make_solution(inst, inst.rows);
    if (verify_solution(inst, same).feasible()) {
      res.status = Status::Yes;
      res.witness = std::move(same);
      return res;
    }
  }
  const int fairlet = fairlet_size(inst.colors);
  if (fairlet > inst.k) {
    OracleResult exact = solve_large_fairlet(inst);
    res.exact_path = true;
    res.status = exact.status;
    res.witness = std::move(exact.witness);
    res.counters = std::move(exact.counters);
    if (res.witness) res.budget_level = res.witness->edit_count;
    return res;
  }

  const TemplateContext ctx = make_template_context(inst);
  const int fair_types = static_cast<int>(ctx.fair.size());
  std::uint64_t templates = 0, codings_tried = 0, assignments = 0;
  bool certified = true;
  for (int level = 1; level <= inst.k; ++level) {
    const int budget = weight_budget(level, fairlet);
    const int codes = num_codes_for(level, fairlet);
    std::vector<CodeAssignment> family;
    certified = true;
    if (fair_types <= codes) {
      family = generate_codings(fair_types, codes, opts.seed, 1);
    } else if (opts.exhaustive_codings && std::pow(static_cast<double>(codes), fair_types) <= 1e6) {
      family = exhaustive_codings(fair_types, codes);
    } else {
      const int set_size = std::min({fair_types, codes, 2 * budget});
      const std::uint64_t trials = std::min(coding_trials(set_size, codes, opts.delta), opts.max_trials);
      family = generate_codings(fair_types, codes, opts.seed + static_cast<std::uint64_t>(level), trials);
      certified = false;
    }

    for (const auto& coding : family) {
      ++codings_tried;
      std::optional<Solution> found;
      const auto run = enumerate_templates(ctx, coding, budget, opts.template_cap - templates,
                                           [&](const Template& t) {
                                             ++assignments;
                                             found = assign_types_to_template(ctx, t, coding);
                                             return found.has_value();
                                           });
      templates += run.templates;
      if (found) {
        res.status = Status::Yes;
        res.witness = std::move(found);
        res.budget_level = level;
        break;
      }
      if (run.capped) {
        res.status = Status::Unresolved;
        break;
      }
    }
    if (res.status != Status::No) break;
  }
  if (res.status == Status::No && !certified) res.status = Status::Unresolved;
  res.counters["codings"] = codings_tried;
  res.counters["templates"] = templates;
  res.counters["assignments"] = assignments;
  return res;
}

}  // namespace fdmc
