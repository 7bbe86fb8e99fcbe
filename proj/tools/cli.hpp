#pragma once

// Command-line front end: solve, verify, gen and bench subcommands.

#include "fdmc/oracle.hpp"
#include "fdmc/tree_decomposition.hpp"

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace fdmc::cli {

enum Exit { kYes = 0, kNo = 1, kInvalid = 2, kInapplicable = 3, kUnresolved = 4 };

struct SolveSettings {
  std::uint64_t seed = 1;
  std::optional<std::uint64_t> trials;
  /// Enumeration cap; FDMC_CAP supplies the default.
  std::optional<std::uint64_t> cap;
  std::optional<TreeDecomposition> td;
  /// auto uses the k+r solver when k + r is at most this.
  int k_plus_r_gate = 8;
  /// auto uses the treewidth DP when the heuristic width is at most this.
  int treewidth_gate = 6;
};

struct RunReport {
  std::string algo;  // the solver that ran
  Status status = Status::Unresolved;
  std::optional<Solution> witness;
  double seconds = 0;
  std::map<std::string, std::uint64_t> counters;
  std::string note;
  int exit_code = kUnresolved;
};

const std::vector<std::string>& algorithm_names();

/// Runs one solver; solver exceptions become exit codes 2, 3 or 4.
RunReport run_algorithm(const std::string& algo, const Instance& inst, const SolveSettings& settings);

/// Cap from FDMC_CAP, if set to a positive integer.
std::optional<std::uint64_t> env_cap();

std::string format_counters(const std::map<std::string, std::uint64_t>& counters);

/// Entry point; returns the process exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace fdmc::cli
