#include "cli.hpp"

#include "fdmc/approx.hpp"
#include "fdmc/generators.hpp"
#include "fdmc/io.hpp"
#include "fdmc/k_plus_r.hpp"
#include "fdmc/large_fairlet.hpp"
#include "fdmc/treewidth.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

namespace fdmc::cli {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;
using Clock = std::chrono::steady_clock;

int exit_for(Status s) {
  switch (s) {
    case Status::Yes: return kYes;
    case Status::No: return kNo;
    case Status::Unresolved: return kUnresolved;
  }
  return kUnresolved;
}

std::uint64_t cap_or(const SolveSettings& s, std::uint64_t fallback) { return s.cap.value_or(fallback); }

OracleResult run_bruteforce(const Instance& inst, const SolveSettings& s) {
  if (inst.m() <= PartitionSearchOptions{}.max_rows) return solve_by_partitions(inst);
  EditSearchOptions opts;
  opts.cap = cap_or(s, opts.cap);
  return solve_by_edits(inst, opts);
}

OracleResult run_treewidth(const Instance& inst, const SolveSettings& s) {
  TreewidthOptions opts;
  opts.external = s.td;
  opts.state_cap = cap_or(s, opts.state_cap);
  return solve_treewidth(inst, opts);
}

RunReport from_oracle(std::string algo, OracleResult res) {
  RunReport rep;
  rep.algo = std::move(algo);
  rep.status = res.status;
  if (res.status == Status::Yes) rep.witness = std::move(res.witness);
  rep.counters = std::move(res.counters);
  return rep;
}

// auto: already feasible, c̃ > k, k+r gates, treewidth, approx
std::string choose(const Instance& inst, const SolveSettings& s) {
  if (verify_solution(inst, make_solution(inst, inst.rows)).feasible()) return "trivial";
  if (fairlet_size(inst.colors) > inst.k) return "large-fairlet";
  const int dr = distinct_rows(inst.rows);
  if (dr > inst.k + inst.r || inst.k + inst.r <= s.k_plus_r_gate) return "k-plus-r";
  if (inst.p == 2) {
    const auto g = build_primal_graph(inst.rows);
    const auto width = s.td ? s.td->width() : decomposition_from_order(g, min_fill_order(g)).width();
    if (width <= s.treewidth_gate) return "treewidth";
  }
  return "approx";
}

RunReport dispatch(const std::string& algo, const Instance& inst, const SolveSettings& s) {
  if (algo == "auto") {
    const auto pick = choose(inst, s);
    if (pick == "trivial") {
      RunReport rep;
      rep.algo = "trivial";
      rep.status = Status::Yes;
      rep.witness = make_solution(inst, inst.rows);
      return rep;
    }
    RunReport rep = dispatch(pick, inst, s);
    rep.note = "auto";
    return rep;
  }
  if (algo == "bruteforce") return from_oracle(algo, run_bruteforce(inst, s));
  if (algo == "large-fairlet") return from_oracle(algo, solve_large_fairlet(inst));
  if (algo == "k-plus-r") {
    KPlusROptions opts;
    opts.cap = cap_or(s, opts.cap);
    return from_oracle(algo, solve_k_plus_r(inst, opts));
  }
  if (algo == "treewidth") return from_oracle(algo, run_treewidth(inst, s));
  if (algo == "approx") {
    ApproxOptions opts;
    opts.seed = s.seed;
    opts.max_trials = s.trials.value_or(opts.max_trials);
    opts.template_cap = cap_or(s, opts.template_cap);
    ApproxResult res = solve_approx(inst, opts);
    RunReport rep;
    rep.algo = algo;
    rep.status = res.status;
    rep.witness = std::move(res.witness);
    rep.counters = std::move(res.counters);
    rep.counters["budget_level"] = static_cast<std::uint64_t>(res.budget_level);
    if (res.exact_path) rep.note = "exact path";
    return rep;
  }
  throw InputError("unknown algorithm '" + algo + "'");
}

/// Fairness and row bound; the budget is relaxed for approximate witnesses.
bool witness_ok(const Instance& inst, const RunReport& rep) {
  if (!rep.witness) return false;
  Instance relaxed = inst;
  if (rep.algo == "approx") relaxed.k = std::max(inst.k, rep.witness->edit_count);
  return verify_solution(relaxed, *rep.witness).feasible();
}

json report_json(const RunReport& rep, bool deterministic, const std::string& witness_path) {
  json doc;
  doc["algo"] = rep.algo;
  doc["status"] = to_string(rep.status);
  doc["edits"] = rep.witness ? json(rep.witness->edit_count) : json(nullptr);
  doc["distinct_types"] = rep.witness ? json(rep.witness->distinct_types) : json(nullptr);
  doc["seconds"] = deterministic ? 0.0 : rep.seconds;
  doc["counters"] = rep.counters;
  if (!witness_path.empty()) doc["witness"] = witness_path;
  if (!rep.note.empty()) doc["note"] = rep.note;
  return doc;
}

std::uint64_t parse_u64(const std::string& text) {
  std::size_t used = 0;
  const auto v = std::stoull(text, &used);
  if (used != text.size()) throw std::invalid_argument(text);
  return v;
}

std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) out.push_back(std::stoi(item));
  return out;
}

// ---- bench -----------------------------------------------------------------

struct BenchJob {
  std::size_t instance = 0;
  std::string algo;  // "oracle" fills the opt column
};

struct BenchResult {
  std::string status = "UNRESOLVED";
  std::optional<int> edits;
  std::string counters;
  double seconds = 0;
};

BenchResult run_child(const Instance& inst, const std::string& algo, const SolveSettings& s) {
  BenchResult out;
  const RunReport rep = run_algorithm(algo == "oracle" ? "bruteforce" : algo, inst, s);
  out.status = rep.exit_code == kInvalid        ? "INVALID"
               : rep.exit_code == kInapplicable ? "INAPPLICABLE"
                                                : to_string(rep.status);
  if (rep.witness && rep.status == Status::Yes) out.edits = rep.witness->edit_count;
  out.counters = format_counters(rep.counters);
  return out;
}

std::vector<BenchResult> run_pool(const std::vector<Instance>& instances, const std::vector<BenchJob>& jobs,
                                  const SolveSettings& s, double timeout, int workers) {
  std::vector<BenchResult> results(jobs.size());
  struct Active {
    pid_t pid;
    int fd;
    std::size_t job;
    Clock::time_point start;
    std::string data;
  };
  std::vector<Active> active;
  std::size_t next = 0;
  while (next < jobs.size() || !active.empty()) {
    while (next < jobs.size() && static_cast<int>(active.size()) < workers) {
      int fds[2];
      if (pipe(fds) != 0) throw std::runtime_error("bench: pipe failed");
      std::cout.flush();
      std::cerr.flush();
      const pid_t pid = fork();
      if (pid < 0) throw std::runtime_error("bench: fork failed");
      if (pid == 0) {
        close(fds[0]);
        const auto start = Clock::now();
        const BenchResult res = run_child(instances[jobs[next].instance], jobs[next].algo, s);
        json doc{{"status", res.status},
                 {"edits", res.edits ? json(*res.edits) : json(nullptr)},
                 {"counters", res.counters},
                 {"seconds", std::chrono::duration<double>(Clock::now() - start).count()}};
        const std::string line = doc.dump();
        std::size_t off = 0;
        while (off < line.size()) {
          const auto w = write(fds[1], line.data() + off, line.size() - off);
          if (w <= 0) break;
          off += static_cast<std::size_t>(w);
        }
        close(fds[1]);
        _exit(0);
      }
      close(fds[1]);
      active.push_back({pid, fds[0], next, Clock::now(), {}});
      ++next;
    }

    std::vector<pollfd> polls;
    for (const auto& a : active) polls.push_back({a.fd, POLLIN, 0});
    poll(polls.data(), polls.size(), 5);
    for (std::size_t x = 0; x < active.size();) {
      auto& a = active[x];
      bool done = false;
      if (polls[x].revents & (POLLIN | POLLHUP)) {
        char buf[4096];
        const auto got = read(a.fd, buf, sizeof buf);
        if (got > 0) {
          a.data.append(buf, static_cast<std::size_t>(got));
        } else {
          done = true;
        }
      }
      const double elapsed = std::chrono::duration<double>(Clock::now() - a.start).count();
      auto& res = results[a.job];
      if (done) {
        waitpid(a.pid, nullptr, 0);
        try {
          const auto doc = json::parse(a.data);
          res.status = doc["status"].get<std::string>();
          if (!doc["edits"].is_null()) res.edits = doc["edits"].get<int>();
          res.counters = doc["counters"].get<std::string>();
          res.seconds = doc["seconds"].get<double>();
        } catch (const std::exception&) {
          res.status = "UNRESOLVED";
          res.counters = "crashed=1";
          res.seconds = elapsed;
        }
      } else if (timeout > 0 && elapsed > timeout) {
        kill(a.pid, SIGKILL);
        waitpid(a.pid, nullptr, 0);
        res.status = "UNRESOLVED";
        res.counters = "timeout=1";
        res.seconds = elapsed;
        done = true;
      }
      if (done) {
        close(a.fd);
        active.erase(active.begin() + static_cast<std::ptrdiff_t>(x));
        polls.erase(polls.begin() + static_cast<std::ptrdiff_t>(x));
      } else {
        ++x;
      }
    }
  }
  return results;
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

int cmd_bench(const std::string& suite, const std::vector<std::string>& algos, const std::string& csv_path,
              double timeout, int workers, bool oracle, bool deterministic, const SolveSettings& s,
              std::ostream& out, std::ostream& err) {
  if (!fs::is_directory(suite)) {
    err << "bench: suite directory '" << suite << "' not found\n";
    return kInvalid;
  }
  for (const auto& a : algos) {
    if (a != "auto" && std::find(algorithm_names().begin(), algorithm_names().end(), a) == algorithm_names().end()) {
      err << "bench: unknown algorithm '" << a << "'\n";
      return kInvalid;
    }
  }
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(suite))
    if (entry.is_regular_file()) files.push_back(entry.path());
  std::sort(files.begin(), files.end());

  std::vector<Instance> instances;
  std::vector<std::string> names;
  for (const auto& f : files) {
    try {
      instances.push_back(load_instance(f).instance);
      names.push_back(f.filename().string());
    } catch (const InputError& e) {
      err << "bench: skipping " << f.filename().string() << ": " << e.what() << "\n";
    }
  }
  std::vector<BenchJob> jobs;
  for (std::size_t i = 0; i < instances.size(); ++i) {
    if (oracle) jobs.push_back({i, "oracle"});
    for (const auto& a : algos) jobs.push_back({i, a});
  }
  const auto results = run_pool(instances, jobs, s, timeout, std::max(1, workers));

  std::ostringstream csv;
  csv << "instance,algo,status,edits,opt,ratio,seconds,counters\n";
  int opt = -1;  // oracle optimum of the current instance, -1 if unknown
  for (std::size_t x = 0; x < jobs.size(); ++x) {
    const auto& job = jobs[x];
    const auto& res = results[x];
    if (job.algo == "oracle") {
      opt = res.status == "YES" && res.edits ? *res.edits : -1;
      continue;
    }
    if (!oracle) opt = -1;
    std::string ratio;
    if (res.edits && opt >= 0) {
      ratio = opt == 0 ? (*res.edits == 0 ? format_double(1.0) : "inf")
                       : format_double(static_cast<double>(*res.edits) / opt);
    }
    csv << names[job.instance] << ',' << job.algo << ',' << res.status << ','
        << (res.edits ? std::to_string(*res.edits) : "") << ',' << (opt >= 0 ? std::to_string(opt) : "") << ','
        << ratio << ',' << format_double(deterministic ? 0.0 : res.seconds) << ',' << res.counters << '\n';
  }
  if (csv_path.empty() || csv_path == "-") {
    out << csv.str();
  } else {
    std::ofstream f(csv_path);
    if (!f) {
      err << "bench: cannot write " << csv_path << "\n";
      return kInvalid;
    }
    f << csv.str();
  }
  return kYes;
}

}  // namespace

const std::vector<std::string>& algorithm_names() {
  static const std::vector<std::string> names{"auto",      "bruteforce", "large-fairlet",
                                              "k-plus-r",  "approx",     "treewidth"};
  return names;
}

std::optional<std::uint64_t> env_cap() {
  const char* v = std::getenv("FDMC_CAP");
  if (!v || !*v) return std::nullopt;
  try {
    const auto cap = parse_u64(v);
    if (cap > 0) return cap;
  } catch (const std::exception&) {
  }
  return std::nullopt;
}

std::string format_counters(const std::map<std::string, std::uint64_t>& counters) {
  std::string out;
  for (const auto& [key, value] : counters) {
    if (!out.empty()) out += ';';
    out += key + '=' + std::to_string(value);
  }
  return out;
}

RunReport run_algorithm(const std::string& algo, const Instance& inst, const SolveSettings& settings) {
  SolveSettings s = settings;
  if (!s.cap) s.cap = env_cap();
  const auto start = Clock::now();
  RunReport rep;
  try {
    rep = dispatch(algo, inst, s);
    rep.exit_code = exit_for(rep.status);
    if (rep.status == Status::Yes && !witness_ok(inst, rep)) {
      rep.status = Status::Unresolved;
      rep.exit_code = kUnresolved;
      rep.note = "witness failed verification";
    }
  } catch (const InputError& e) {
    rep.algo = algo;
    rep.note = e.what();
    rep.exit_code = kInvalid;
  } catch (const DomainError& e) {
    rep.algo = algo;
    rep.note = e.what();
    rep.exit_code = kInapplicable;
  } catch (const CapacityError& e) {
    rep.algo = algo;
    rep.note = e.what();
    rep.status = Status::Unresolved;
    rep.exit_code = kUnresolved;
    rep.counters["pruned"] = e.pruned();
  }
  rep.seconds = std::chrono::duration<double>(Clock::now() - start).count();
  return rep;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Fair discrete means clustering toolkit", "fdmc"};
  app.require_subcommand(1);

  // solve
  auto* solve = app.add_subcommand("solve", "Solve an instance");
  std::string algo = "auto", in_path, out_path, td_path, cap_text;
  SolveSettings settings;
  std::uint64_t trials = 0;
  bool deterministic = false;
  solve->add_option("--algo", algo, "Solver")->check(CLI::IsMember(algorithm_names()));
  solve->add_option("--in", in_path, "Instance file")->required();
  solve->add_option("--out", out_path, "Witness output file");
  solve->add_option("--td", td_path, "Tree decomposition (PACE .td)");
  solve->add_option("--seed", settings.seed, "Random seed");
  solve->add_option("--trials", trials, "Maximum number of random codings");
  solve->add_option("--cap", cap_text, "Enumeration cap");
  solve->add_option("--k-plus-r-gate", settings.k_plus_r_gate, "auto: largest k + r for the k+r solver");
  solve->add_option("--treewidth-gate", settings.treewidth_gate, "auto: largest width for the treewidth DP");
  solve->add_flag("--deterministic", deterministic, "Report zero wall time");

  // verify
  auto* verify = app.add_subcommand("verify", "Check a solution");
  std::string solution_path;
  verify->add_option("--in", in_path, "Instance file")->required();
  verify->add_option("--solution", solution_path, "Solution file")->required();

  // gen
  auto* gen = app.add_subcommand("gen", "Generate instances");
  gen->require_subcommand(1);
  std::uint64_t seed = 1;
  std::string gen_out;
  int m = 6, n = 3, p = 2, c = 2, k = 2, r = 2;
  std::string counts_text;
  auto* g_random = gen->add_subcommand("random", "Uniform random instance");
  g_random->add_option("--m", m);
  g_random->add_option("--n", n);
  g_random->add_option("--p", p);
  g_random->add_option("--c", c, "Number of colors (spread evenly)");
  g_random->add_option("--counts", counts_text, "Rows per color, comma separated");
  g_random->add_option("--k", k);
  g_random->add_option("--r", r);
  int clusters = 2, fairlets = 1, noise = 1;
  std::string composition_text = "1,1";
  auto* g_planted = gen->add_subcommand("planted", "Planted fair clustering plus noise");
  g_planted->add_option("--clusters", clusters);
  g_planted->add_option("--n", n);
  g_planted->add_option("--composition", composition_text, "Fairlet composition, comma separated");
  g_planted->add_option("--fairlets", fairlets, "Fairlets per cluster");
  g_planted->add_option("--noise", noise, "Number of flipped cells (the budget k)");
  std::string graph_path, graph_out, witness_out;
  int q = 4, vertices = 8;
  double edge_prob = 0.3;
  std::int64_t multiplicity = 0;
  auto* g_clique = gen->add_subcommand("clique-reduction", "Multicolored Clique reduction");
  g_clique->add_option("--graph", graph_path, "Source graph file; random planted graph if absent");
  g_clique->add_option("--q", q, "Colors of the random graph");
  g_clique->add_option("--vertices", vertices, "Vertices of the random graph");
  g_clique->add_option("--edge-prob", edge_prob, "Edge probability of the random graph");
  g_clique->add_option("--multiplicity", multiplicity, "Rows per color and type (default k)");
  g_clique->add_option("--graph-out", graph_out, "Write the source graph here");
  g_clique->add_option("--witness", witness_out, "Write the planted clique witness (random graph only)");
  for (auto* sub : {g_random, g_planted, g_clique}) {
    sub->add_option("--seed", seed);
    sub->add_option("--out", gen_out, "Output file (stdout if absent)");
  }

  // bench
  auto* bench = app.add_subcommand("bench", "Run solvers over a suite");
  std::string suite, algos_text = "auto", csv_path;
  double timeout = 60;
  int workers = 1;
  bool with_oracle = false;
  bench->add_option("--suite", suite, "Directory of instance files")->required();
  bench->add_option("--algos", algos_text, "Comma separated solvers");
  bench->add_option("--csv", csv_path, "CSV output (stdout if absent)");
  bench->add_option("--timeout", timeout, "Seconds per run");
  bench->add_option("--jobs", workers, "Parallel workers");
  bench->add_option("--seed", settings.seed, "Random seed");
  bench->add_option("--cap", cap_text, "Enumeration cap");
  bench->add_flag("--oracle", with_oracle, "Run the brute-force oracle for the opt column");
  bench->add_flag("--deterministic", deterministic, "Report zero wall time");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kYes;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n";
    return kInvalid;
  }

  try {
    if (!cap_text.empty()) settings.cap = parse_u64(cap_text);
    if (trials > 0) settings.trials = trials;

    if (*solve) {
      const auto file = load_instance(in_path);
      if (!td_path.empty()) {
        std::ifstream td(td_path);
        if (!td) throw InputError("cannot open " + td_path);
        settings.td = read_pace(td);
      }
      RunReport rep = run_algorithm(algo, file.instance, settings);
      if (rep.exit_code == kYes && !out_path.empty()) {
        save_solution(out_path, *rep.witness);
        Instance relaxed = file.instance;
        if (rep.algo == "approx") relaxed.k = std::max(relaxed.k, rep.witness->edit_count);
        const Solution back = load_solution(out_path, file.instance);
        if (!verify_solution(relaxed, back).feasible()) {
          err << "witness written to " << out_path << " does not verify\n";
          rep.exit_code = kUnresolved;
        }
      }
      if (!rep.note.empty() && rep.exit_code >= kInvalid) err << rep.note << "\n";
      out << report_json(rep, deterministic, rep.exit_code == kYes ? out_path : "").dump(2) << "\n";
      return rep.exit_code;
    }

    if (*verify) {
      const auto file = load_instance(in_path);
      const Solution sol = load_solution(solution_path, file.instance);
      const Verdict v = verify_solution(file.instance, sol);
      out << "edits " << sol.edit_count << ", distinct types " << sol.distinct_types << "\n";
      for (const auto& msg : v.violations) out << "violation: " << msg << "\n";
      out << (v.feasible() ? "feasible" : "infeasible") << "\n";
      return v.feasible() ? kYes : kNo;
    }

    if (*gen) {
      std::ofstream file;
      if (!gen_out.empty()) {
        file.open(gen_out);
        if (!file) throw InputError("cannot write " + gen_out);
      }
      std::ostream& sink = gen_out.empty() ? out : file;
      if (*g_random) {
        RandomSpec spec{m, n, p, {}, k, r, seed};
        if (!counts_text.empty()) {
          spec.color_counts = parse_int_list(counts_text);
        } else {
          if (c < 1 || c > m) throw InputError("need 1 <= c <= m");
          spec.color_counts.assign(c, m / c);
          for (int z = 0; z < m % c; ++z) ++spec.color_counts[z];
        }
        write_instance(sink, gen_random(spec),
                       {{"generator", "random"}, {"seed", std::to_string(seed)}});
      } else if (*g_planted) {
        const auto comp = parse_int_list(composition_text);
        auto [inst, sol] = gen_planted(clusters, n, comp, fairlets, noise, seed);
        write_instance(sink, inst,
                       {{"generator", "planted"},
                        {"seed", std::to_string(seed)},
                        {"planted_edits", std::to_string(sol.edit_count)}});
      } else {
        ColoredGraph graph;
        std::vector<int> clique;
        if (!graph_path.empty()) {
          std::ifstream gin(graph_path);
          if (!gin) throw InputError("cannot open " + graph_path);
          graph = read_graph(gin);
        } else {
          std::tie(graph, clique) = gen_clique_graph(q, vertices, edge_prob, seed);
        }
        const auto meta = reduce_from_multicolored_clique(
            graph, multiplicity > 0 ? std::optional<std::int64_t>(multiplicity) : std::nullopt);
        if (!graph_out.empty()) {
          std::ofstream gout(graph_out);
          if (!gout) throw InputError("cannot write " + graph_out);
          write_graph(gout, graph);
        }
        stream_reduction_instance(sink, meta);
        if (!witness_out.empty()) {
          if (clique.empty()) throw InputError("--witness needs the random planted graph");
          save_solution(witness_out, build_clique_witness(meta, clique));
        }
      }
      return kYes;
    }

    if (*bench) {
      std::vector<std::string> algos;
      std::stringstream list(algos_text);
      for (std::string a; std::getline(list, a, ',');)
        if (!a.empty()) algos.push_back(a);
      return cmd_bench(suite, algos, csv_path, timeout, workers, with_oracle, deterministic, settings, out, err);
    }
  } catch (const InputError& e) {
    err << "invalid input: " << e.what() << "\n";
    return kInvalid;
  } catch (const DomainError& e) {
    err << "inapplicable: " << e.what() << "\n";
    return kInapplicable;
  } catch (const CapacityError& e) {
    err << "capacity: " << e.what() << "\n";
    return kUnresolved;
  } catch (const std::invalid_argument& e) {
    err << "invalid argument: " << e.what() << "\n";
    return kInvalid;
  } catch (const std::out_of_range& e) {
    err << "invalid argument: " << e.what() << "\n";
    return kInvalid;
  }
  return kInvalid;
}

}  // namespace fdmc::cli
