#include "swad/assignment.hpp"

#include <algorithm>
#include <limits>

#include "swad/error.hpp"

namespace swad {

Assignment solve_assignment(std::span<const double> cost, std::size_t n) {
  if (cost.size() != n * n) {
    throw InvalidArgument("solve_assignment: cost matrix is not n x n");
  }
  Assignment result;
  if (n == 0) return result;

  constexpr double kInf = std::numeric_limits<double>::infinity();
  // 1-based potentials; column 0 is a virtual column holding the row being inserted.
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<std::size_t> match(n + 1, 0), way(n + 1, 0);
  std::vector<double> min_slack(n + 1);
  std::vector<char> used(n + 1);

  for (std::size_t row = 1; row <= n; ++row) {
    match[0] = row;
    std::size_t col0 = 0;
    std::fill(min_slack.begin(), min_slack.end(), kInf);
    std::fill(used.begin(), used.end(), 0);
    do {
      used[col0] = 1;
      const std::size_t i0 = match[col0];
      double delta = kInf;
      std::size_t col1 = 0;
      for (std::size_t j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double reduced = cost[(i0 - 1) * n + (j - 1)] - u[i0] - v[j];
        if (reduced < min_slack[j]) {
          min_slack[j] = reduced;
          way[j] = col0;
        }
        if (min_slack[j] < delta) {
          delta = min_slack[j];
          col1 = j;
        }
      }
      for (std::size_t j = 0; j <= n; ++j) {
        if (used[j]) {
          u[match[j]] += delta;
          v[j] -= delta;
        } else {
          min_slack[j] -= delta;
        }
      }
      col0 = col1;
    } while (match[col0] != 0);
    // Augment along the alternating path.
    do {
      const std::size_t col1 = way[col0];
      match[col0] = match[col1];
      col0 = col1;
    } while (col0 != 0);
  }

  result.row_to_col.assign(n, 0);
  for (std::size_t j = 1; j <= n; ++j) result.row_to_col[match[j] - 1] = j - 1;
  // Recompute from the matching rather than trusting the potentials.
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) total += cost[i * n + result.row_to_col[i]];
  result.cost = total;
  return result;
}

}  // namespace swad
