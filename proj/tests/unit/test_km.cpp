#include <cmath>

#include "doctest.h"
#include "oracles.hpp"
#include "satdomain/km.hpp"
#include "satdomain/rng.hpp"

using namespace satdomain;
using satdomain::testing::permutation_minimum;

TEST_CASE("KM: single pairing") {
  const auto m = km_match({3.5}, 1, 1);
  CHECK(m.col_of_row == std::vector<int>{0});
  CHECK(m.cost == 3.5);
}

TEST_CASE("KM equals the permutation minimum") {
  Rng rng(2024);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t m = 1 + rng.below(6);
    std::vector<double> c(m * m);
    for (auto& v : c) v = std::floor(rng.uniform() * 1000.0) / 10.0;
    const auto r = km_match(c, m, m);
    CHECK(r.cost == permutation_minimum(c, m));
    double recomputed = 0.0;
    std::vector<int> used(m, 0);
    for (std::size_t i = 0; i < m; ++i) {
      recomputed += c[i * m + static_cast<std::size_t>(r.col_of_row[i])];
      used[static_cast<std::size_t>(r.col_of_row[i])]++;
    }
    CHECK(recomputed == r.cost);
    for (int u : used) CHECK(u == 1);
  }
}

TEST_CASE("KM: identity-dominant matrix gives the identity") {
  const std::vector<double> c{1, 5, 6, 7, 2, 9, 8, 9, 3};
  CHECK(km_match(c, 3, 3).col_of_row == std::vector<int>{0, 1, 2});
}

TEST_CASE("KM: ties resolve to the lexicographically smallest matching") {
  const std::vector<double> c(9, 1.0);
  CHECK(km_match(c, 3, 3).col_of_row == std::vector<int>{0, 1, 2});
  const std::vector<double> d{1, 1, 2, 2};  // both matchings cost 3
  CHECK(km_match(d, 2, 2).col_of_row == std::vector<int>{0, 1});
}

TEST_CASE("KM: infeasible entries and rectangular inputs") {
  const double inf = kInfeasible;
  const std::vector<double> c{inf, 1, 2, inf};
  const auto r = km_match(c, 2, 2);
  CHECK(r.feasible);
  CHECK(r.col_of_row == std::vector<int>{1, 0});
  const std::vector<double> all_inf{inf, inf, inf, inf};
  CHECK_FALSE(km_match(all_inf, 2, 2).feasible);
  // Three rows, two columns: one row stays unmatched.
  const auto rect = km_match({5, 1, 1, 5, 9, 9}, 3, 2);
  CHECK(rect.col_of_row == std::vector<int>{1, 0, -1});
  CHECK(rect.cost == 2.0);
}
