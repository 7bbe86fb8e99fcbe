#pragma once

#include <Eigen/Core>

#include <vector>

namespace fdmc {

struct Assignment {
  long long cost = 0;
  std::vector<int> column_of_row;
};

/// Minimum-cost perfect assignment on a square cost matrix (Hungarian method).
Assignment min_cost_assignment(const Eigen::MatrixXi& cost);

}  // namespace fdmc
