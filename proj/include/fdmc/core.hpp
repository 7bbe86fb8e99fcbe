#pragma once

// Domain model for fair discrete means clustering: colored instances,
// fairness predicates, edit graphs, majority recentering and verification.

#include <Eigen/Core>

#include <algorithm>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace fdmc {

/// Row-major integer matrix; entries are domain values 0..p-1.
using Matrix = Eigen::Matrix<int, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
/// A row type: the value vector of one row.
using RowType = Eigen::Matrix<int, 1, Eigen::Dynamic>;

class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when a solver is called outside the regime it supports.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Raised when an enumeration exceeds its configured size cap.
class CapacityError : public std::runtime_error {
 public:
  explicit CapacityError(const std::string& what, std::uint64_t pruned = 0)
      : std::runtime_error(what), pruned_(pruned) {}
  std::uint64_t pruned() const noexcept { return pruned_; }

 private:
  std::uint64_t pruned_;
};

/// Hamming distance of two equally sized row expressions.
template <typename A, typename B>
int hamming(const Eigen::MatrixBase<A>& a, const Eigen::MatrixBase<B>& b) {
  if (a.size() != b.size()) {
    throw InputError("hamming: length mismatch (" + std::to_string(a.size()) + " vs " +
                     std::to_string(b.size()) + ")");
  }
  return static_cast<int>((a.derived().array() != b.derived().array()).count());
}

struct RowTypeLess {
  template <typename A, typename B>
  bool operator()(const Eigen::MatrixBase<A>& a, const Eigen::MatrixBase<B>& b) const {
    const auto n = std::min(a.size(), b.size());
    for (Eigen::Index j = 0; j < n; ++j) {
      if (a(j) != b(j)) return a(j) < b(j);
    }
    return a.size() < b.size();
  }
};

inline bool same_type(const RowType& a, const RowType& b) {
  return a.size() == b.size() && (a.array() == b.array()).all();
}

/// A colored matrix with an edit budget and a bound on distinct rows.
///
/// Colors are 1-based (1..c) and every color must occur at least once.
struct Instance {
  Matrix rows;
  std::vector<int> colors;
  int p = 2;
  int k = 0;
  int r = 1;

  int m() const { return static_cast<int>(rows.rows()); }
  int n() const { return static_cast<int>(rows.cols()); }
  int c() const { return colors.empty() ? 0 : *std::max_element(colors.begin(), colors.end()); }
  RowType row(int i) const { return rows.row(i); }
};

/// Throws InputError if the instance violates any structural invariant.
void validate(const Instance& inst);

Instance make_instance(Matrix rows, std::vector<int> colors, int p, int k, int r);

/// |γ|_z for z = 1..c, stored at index z-1.
std::vector<int> color_counts(std::span<const int> colors);

/// Minimum size of a fair row set: m / gcd(|γ|_1, ..., |γ|_c).
int fairlet_size(std::span<const int> colors);

/// Number of rows of each color in one fairlet (index z-1).
std::vector<int> fairlet_composition(std::span<const int> colors);

/// True iff `counts` (per color) is proportional to `global` with total `m`.
bool is_fair_counts(std::span<const int> counts, std::span<const int> global, int m);

/// True iff the rows in `cluster` witness the color distribution of `colors`.
/// The empty cluster is fair.
bool is_fair_cluster(std::span<const int> cluster, std::span<const int> colors);

/// An edited matrix together with its derived clustering.
struct Solution {
  Matrix edited_rows;
  std::vector<int> cluster_of;  // cluster ids follow lexicographic type order
  int edit_count = 0;
  int distinct_types = 0;
};

Solution make_solution(const Instance& inst, Matrix edited);

/// Number of cells in which two equally shaped matrices differ.
int edit_distance(const Matrix& a, const Matrix& b);

/// Number of distinct rows.
int distinct_rows(const Matrix& mat);

struct Verdict {
  bool unfair_cluster = false;
  bool too_many_types = false;
  bool over_budget = false;
  std::vector<std::string> violations;

  bool feasible() const { return !unfair_cluster && !too_many_types && !over_budget; }
};

/// Checks fairness of every cluster, the distinct row bound and the budget.
Verdict verify_solution(const Instance& inst, const Solution& sol);

struct EditEdge {
  int source = 0;  // vertex index
  int target = 0;
  int row = 0;  // 0-based row index (the edge label)
  int color = 0;
  int weight = 0;
};

struct EditGraph {
  std::vector<RowType> vertices;  // types of M and M', lexicographically sorted
  std::vector<EditEdge> edges;    // edge i belongs to row i

  int total_weight() const;
  /// Vertex indices with at least one incoming edge.
  std::vector<int> survivors() const;
};

struct ReducedEdge {
  int source = 0;
  int target = 0;
  int color = 0;
  int weight = 0;
};

struct ReducedEditGraph {
  std::vector<RowType> vertices;
  std::vector<ReducedEdge> edges;
};

EditGraph build_edit_graph(const Instance& inst, const Solution& sol);
ReducedEditGraph reduce(const EditGraph& graph);

/// True iff the edge multiset has the color distribution of `colors`.
bool is_fair_edge_set(std::span<const EditEdge> edges, std::span<const int> colors);

/// Column-wise majority center per part; ties go to the smallest value.
/// `part_of[i]` is the part id of row i (any non-negative integers).
Solution majority_recenter(const Instance& inst, std::span<const int> part_of);

/// Majority center of the given rows.
RowType majority_center(const Instance& inst, std::span<const int> rows);

/// Types of M whose cluster is unfair, in lexicographic order.
std::vector<RowType> unfair_types(const Instance& inst);

/// Distinct types of an instance with per-type row lists, color counts and
/// pairwise distances. Types are sorted lexicographically.
struct TypeTable {
  std::vector<RowType> types;
  std::vector<int> type_of_row;
  std::vector<std::vector<int>> rows_of_type;
  Eigen::MatrixXi color_counts;  // types x c
  std::vector<bool> fair;
  Eigen::MatrixXi distance;

  int size() const { return static_cast<int>(types.size()); }
  int find(const RowType& t) const;  // -1 if absent
};

TypeTable tabulate(const Instance& inst);

/// Lexicographic comparison of whole matrices (row-major order).
bool matrix_less(const Matrix& a, const Matrix& b);

}  // namespace fdmc
