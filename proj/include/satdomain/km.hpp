#pragma once

#include <limits>
#include <vector>

namespace satdomain {

inline constexpr double kInfeasible = std::numeric_limits<double>::infinity();

struct Matching {
  std::vector<int> col_of_row;  // -1 for rows left unmatched (more rows than columns)
  double cost = 0.0;            // sum over matched rows in row order
  bool feasible = true;         // no matched pair carries an infinite cost
};

/// Minimum-cost assignment on a rows x cols matrix (row-major). Rectangular inputs are
/// padded with zero-cost dummies; infinite entries are replaced by a large sentinel.
/// Among optimal matchings the lexicographically smallest col_of_row is returned.
Matching km_match(const std::vector<double>& cost, std::size_t rows, std::size_t cols);

/// Optimal value only, no tie-break refinement.
double hungarian_min_cost(const std::vector<double>& cost, std::size_t n, std::vector<int>* col_of_row = nullptr);

}  // namespace satdomain
