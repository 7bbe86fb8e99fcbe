#pragma once

// Independent checks of the clique reduction's type table.

#include "fdmc/generators.hpp"

#include <string>
#include <vector>

namespace fdmc::fixtures {

/// Expected minimum distance between related types of the two kinds.
int expected_min_distance(GadgetKind a, GadgetKind b, int y);

/// Colors of the graph a gadget refers to: {i} for 𝒱_it, {i, j} for ℰ_ijt,
/// {col(a)} for V_a and {col(a), col(b)} for E_ab.
std::vector<int> gadget_colors(const Gadget& g);

/// Compares, for each pair of kinds, the minimum distance over related
/// distinct types against the table, and checks that unrelated pairs are no
/// closer. Returns one message per mismatch. `require_all` also fails kind
/// pairs with no related example.
std::vector<std::string> audit_distances(const ReductionMeta& meta, bool require_all);

/// +1 of color t at 𝒱_it, -1 of color t at ℰ_ijt, multiplicity elsewhere.
std::vector<std::string> audit_color_pattern(const ReductionMeta& meta);

}  // namespace fdmc::fixtures
