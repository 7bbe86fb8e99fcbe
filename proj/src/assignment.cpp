#include "fdmc/assignment.hpp"

#include <limits>
#include <stdexcept>

namespace fdmc {

Assignment min_cost_assignment(const Eigen::MatrixXi& cost) {
  if (cost.rows() != cost.cols()) throw std::invalid_argument("assignment: cost matrix not square");
  const int n = static_cast<int>(cost.rows());
  Assignment out;
  out.column_of_row.assign(n, -1);
  if (n == 0) return out;

  // potentials and matching use 1-based indices with a virtual column 0
  constexpr long long inf = std::numeric_limits<long long>::max() / 4;
  std::vector<long long> u(n + 1, 0), v(n + 1, 0);
  std::vector<int> row_of_col(n + 1, 0), way(n + 1, 0);
  for (int i = 1; i <= n; ++i) {
    row_of_col[0] = i;
    int j0 = 0;
    std::vector<long long> minv(n + 1, inf);
    std::vector<bool> used(n + 1, false);
    do {
      used[j0] = true;
      const int i0 = row_of_col[j0];
      long long delta = inf;
      int j1 = 0;
      for (int j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const long long cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[j]) {
          u[row_of_col[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (row_of_col[j0] != 0);
    do {
      const int j1 = way[j0];
      row_of_col[j0] = row_of_col[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  for (int j = 1; j <= n; ++j) {
    out.column_of_row[row_of_col[j] - 1] = j - 1;
    out.cost += cost(row_of_col[j] - 1, j - 1);
  }
  return out;
}

}  // namespace fdmc
