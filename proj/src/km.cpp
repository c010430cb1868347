#include "satdomain/km.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace satdomain {

double hungarian_min_cost(const std::vector<double>& cost, std::size_t n, std::vector<int>* col_of_row) {
  // Potentials formulation, 1-based with a virtual column 0.
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<std::size_t> p(n + 1, 0), way(n + 1, 0);
  for (std::size_t i = 1; i <= n; ++i) {
    p[0] = i;
    std::size_t j0 = 0;
    std::vector<double> minv(n + 1, inf);
    std::vector<char> used(n + 1, 0);
    do {
      used[j0] = 1;
      const std::size_t i0 = p[j0];
      double delta = inf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = cost[(i0 - 1) * n + (j - 1)] - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= n; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const std::size_t j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  std::vector<int> assign(n, -1);
  for (std::size_t j = 1; j <= n; ++j) assign[p[j] - 1] = static_cast<int>(j - 1);
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) total += cost[i * n + static_cast<std::size_t>(assign[i])];
  if (col_of_row) *col_of_row = std::move(assign);
  return total;
}

namespace {

// Sub-problem value with rows [0, fixed) removed and their columns blocked.
double residual_optimum(const std::vector<double>& sq, std::size_t n, const std::vector<char>& row_done,
                        const std::vector<char>& col_done) {
  std::vector<std::size_t> rs, cs;
  for (std::size_t i = 0; i < n; ++i) {
    if (!row_done[i]) rs.push_back(i);
    if (!col_done[i]) cs.push_back(i);
  }
  const std::size_t k = rs.size();
  if (k == 0) return 0.0;
  std::vector<double> sub(k * k);
  for (std::size_t a = 0; a < k; ++a) {
    for (std::size_t b = 0; b < k; ++b) sub[a * k + b] = sq[rs[a] * n + cs[b]];
  }
  return hungarian_min_cost(sub, k);
}

}  // namespace

Matching km_match(const std::vector<double>& cost, std::size_t rows, std::size_t cols) {
  if (cost.size() != rows * cols) throw std::invalid_argument("km_match: cost size mismatch");
  Matching m;
  if (rows == 0) return m;
  const std::size_t n = std::max(rows, cols);

  double finite_max = 0.0;
  for (double c : cost) {
    if (std::isnan(c)) throw std::invalid_argument("km_match: NaN cost");
    if (c < 0.0) throw std::invalid_argument("km_match: negative cost");
    if (std::isfinite(c)) finite_max = std::max(finite_max, c);
  }
  const double sentinel = (finite_max + 1.0) * static_cast<double>(n + 1) * 1e3;
  std::vector<double> sq(n * n, 0.0);
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) {
      const double c = cost[i * cols + j];
      sq[i * n + j] = std::isfinite(c) ? c : sentinel;
    }
  }

  const double best = hungarian_min_cost(sq, n);
  const double tol = 1e-12 * std::max(1.0, std::abs(best));

  // Lexicographic refinement: fix each row to the smallest column that keeps optimality.
  std::vector<char> row_done(n, 0), col_done(n, 0);
  std::vector<int> pick(n, -1);
  double fixed = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    row_done[i] = 1;
    bool placed = false;
    for (std::size_t j = 0; j < n && !placed; ++j) {
      if (col_done[j]) continue;
      col_done[j] = 1;
      const double total = fixed + sq[i * n + j] + residual_optimum(sq, n, row_done, col_done);
      if (total <= best + tol) {
        pick[i] = static_cast<int>(j);
        fixed += sq[i * n + j];
        placed = true;
      } else {
        col_done[j] = 0;
      }
    }
    if (!placed) throw std::logic_error("km_match: refinement lost optimality");
  }

  m.col_of_row.assign(rows, -1);
  for (std::size_t i = 0; i < rows; ++i) {
    const auto j = static_cast<std::size_t>(pick[i]);
    if (j >= cols) continue;
    m.col_of_row[i] = static_cast<int>(j);
    const double c = cost[i * cols + j];
    if (!std::isfinite(c)) m.feasible = false;
    m.cost += c;
  }
  return m;
}

}  // namespace satdomain
