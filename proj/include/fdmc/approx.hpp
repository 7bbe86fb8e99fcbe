#pragma once

// Approximate solver with ratio 5 - 3/c̃: color coding over the M-fair types,
// enumeration of small edge templates, and a star-by-star assignment of fair
// types to the unlabeled template vertices.

#include "fdmc/large_fairlet.hpp"
#include "fdmc/oracle.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace fdmc {

/// Code (1..num_codes) of every M-fair type, indexed like TemplateContext::fair.
struct CodeAssignment {
  std::vector<int> code_of;
  int num_codes = 1;
};

/// ⌈2(5 - 3/fairlet)k⌉.
int num_codes_for(int k, int fairlet);

/// ⌊(5 - 3/fairlet)k⌋, the template weight ceiling.
int weight_budget(int k, int fairlet);

/// Random codings needed so that a fixed set of `set_size` types is colorful
/// in at least one member with probability >= 1 - delta.
std::uint64_t coding_trials(int set_size, int num_codes, double delta);

/// One injective coding when num_fair_types <= num_codes, otherwise `trials`
/// uniform random codings drawn from a generator seeded with `seed`.
std::vector<CodeAssignment> generate_codings(int num_fair_types, int num_codes, std::uint64_t seed,
                                             std::uint64_t trials);

/// Every coding of num_fair_types types with num_codes codes.
std::vector<CodeAssignment> exhaustive_codings(int num_fair_types, int num_codes);

struct TemplateEdge {
  int from = 0;  // vertex id
  int to = 0;
  int color = 0;
  int count = 0;  // parallel edges
  int weight = 0;  // per edge

  auto operator<=>(const TemplateEdge&) const = default;
};

/// Vertices 0..labeled-1 are the M-unfair types (in lexicographic order);
/// vertex labeled + i is unlabeled with code codes[i].
struct Template {
  int labeled = 0;
  std::vector<int> codes;
  std::vector<TemplateEdge> edges;

  int vertex_count() const { return labeled + static_cast<int>(codes.size()); }
  int total_weight() const;
};

/// Type data shared by template enumeration and assignment.
struct TemplateContext {
  const Instance* inst = nullptr;
  TypeTable table;
  std::vector<int> unfair;  // type indices of M-unfair types
  std::vector<int> fair;    // type indices of M-fair types
  std::vector<int> comp;
  int fairlet = 1;
};

TemplateContext make_template_context(const Instance& inst);

/// Structural template rules plus balance: labeled types end fair, every
/// unlabeled sink receives a fair multiset. Returns an empty string when
/// valid, otherwise the first violated rule.
std::string check_template(const TemplateContext& ctx, const Template& tmpl, int budget);

struct TemplateEnumeration {
  std::uint64_t templates = 0;
  bool capped = false;
  bool stopped = false;
};

/// Enumerates balanced templates of weight at most `budget` whose unlabeled
/// vertices use codes present in `coding`. `visit` returns true to stop.
TemplateEnumeration enumerate_templates(const TemplateContext& ctx, const CodeAssignment& coding, int budget,
                                        std::uint64_t cap, const std::function<bool(const Template&)>& visit);

/// Picks fair types for the unlabeled vertices and materializes a witness
/// with at most r distinct rows, or returns nullopt.
std::optional<Solution> assign_types_to_template(const TemplateContext& ctx, const Template& tmpl,
                                                 const CodeAssignment& coding);

struct ApproxOptions {
  std::uint64_t seed = 1;
  double delta = 1e-6;
  std::uint64_t max_trials = 100'000;
  std::uint64_t template_cap = 50'000'000;
  bool exhaustive_codings = false;
};

struct ApproxResult {
  Status status = Status::No;
  std::optional<Solution> witness;
  /// Budget level at which the witness was found (0 for already feasible).
  int budget_level = 0;
  bool exact_path = false;
  std::map<std::string, std::uint64_t> counters;
};

/// YES with a witness of cost at most (5 - 3/c̃)·OPT, NO only when the
/// instance has no solution within k, or UNRESOLVED when random codings or
/// the template cap prevent a certified NO.
ApproxResult solve_approx(const Instance& inst, const ApproxOptions& opts = {});

}  // namespace fdmc
