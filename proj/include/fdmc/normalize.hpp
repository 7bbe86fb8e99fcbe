#pragma once

// Constructive normal form for feasible solutions: no new types survive, every
// M-fair type either only receives or sends its rows to a single type, and the
// edit count grows by a bounded factor.

#include "fdmc/core.hpp"

namespace fdmc {

struct NormalizeReport {
  Solution solution;
  int input_cost = 0;
  /// Cost after rerouting fair types that both send and receive rows.
  int rerouted_cost = 0;
  /// Weight of the lightest of the fairlet matchings, measured on the rerouted graph.
  int lightest_matching_weight = 0;
  int input_survivors = 0;
  int fairlet = 1;
  /// Number of alternating-path rewirings.
  int path_shifts = 0;
};

/// Normalizes a fair solution with at most r distinct rows. The budget k of
/// `inst` is ignored. Throws InputError if `sol` is unfair or has too many rows.
NormalizeReport normalize_with_report(const Instance& inst, const Solution& sol);

Solution normalize_solution(const Instance& inst, const Solution& sol);

/// Multiplicative cost bound of the normal form: 5 - 3/fairlet.
double normal_form_ratio(int fairlet);

}  // namespace fdmc
