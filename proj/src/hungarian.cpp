#include "cropclust/hungarian.hpp"

#include <limits>

namespace cropclust {
namespace {

// Minimum-cost assignment of every row of an n x m cost matrix (n <= m),
// 1-based potentials formulation. Returns the column of each row.
template <typename Cost>
std::vector<int> min_cost_rows(std::size_t n, std::size_t m, Cost cost) {
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(m + 1, 0.0);
  std::vector<std::size_t> owner(m + 1, 0), way(m + 1, 0);

  for (std::size_t i = 1; i <= n; ++i) {
    owner[0] = i;
    std::size_t j0 = 0;
    std::vector<double> minv(m + 1, inf);
    std::vector<char> used(m + 1, 0);
    do {
      used[j0] = 1;
      const std::size_t i0 = owner[j0];
      double delta = inf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= m; ++j) {
        if (used[j]) continue;
        const double cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= m; ++j) {
        if (used[j]) {
          u[owner[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (owner[j0] != 0);
    do {
      const std::size_t j1 = way[j0];
      owner[j0] = owner[j1];
      j0 = j1;
    } while (j0 != 0);
  }

  std::vector<int> col_of_row(n, -1);
  for (std::size_t j = 1; j <= m; ++j) {
    if (owner[j] != 0) col_of_row[owner[j] - 1] = static_cast<int>(j - 1);
  }
  return col_of_row;
}

}  // namespace

std::vector<int> max_weight_assignment(const WeightMatrix& weights) {
  const std::size_t rows = weights.rows();
  const std::size_t cols = weights.cols();
  std::vector<int> result(rows, -1);
  if (rows == 0 || cols == 0) return result;

  if (rows <= cols) {
    return min_cost_rows(rows, cols,
                         [&](std::size_t r, std::size_t c) { return -weights(r, c); });
  }
  const std::vector<int> row_of_col = min_cost_rows(
      cols, rows, [&](std::size_t c, std::size_t r) { return -weights(r, c); });
  for (std::size_t c = 0; c < cols; ++c) {
    if (row_of_col[c] >= 0) result[static_cast<std::size_t>(row_of_col[c])] = static_cast<int>(c);
  }
  return result;
}

}  // namespace cropclust
