#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace swad {

struct Assignment {
  std::vector<std::size_t> row_to_col;
  double cost = 0.0;  // sum of cost[i][row_to_col[i]] in row order
};

// Minimum-cost perfect matching on an n x n row-major cost matrix
// (Hungarian method with potentials, O(n^3)).
Assignment solve_assignment(std::span<const double> cost, std::size_t n);

}  // namespace swad
