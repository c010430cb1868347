#include <cmath>

#include "doctest.h"
#include "satdomain/eigen_solver.hpp"
#include "satdomain/rng.hpp"
#include "satdomain/spectral.hpp"

using namespace satdomain;

namespace {

// Normalized Laplacian of a ring with random chords.
Eigen::SparseMatrix<double> random_laplacian(int n, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<Eigen::Triplet<double>> t;
  for (int i = 0; i < n; ++i) {
    t.emplace_back(i, i, 1.0);
    const int j = (i + 1) % n;
    const double w = 0.2 + rng.uniform();
    t.emplace_back(i, j, w);
    t.emplace_back(j, i, w);
    if (rng.uniform() < 0.1) {
      const int k = static_cast<int>(rng.below(static_cast<std::uint64_t>(n)));
      if (k != i) {
        const double v = 0.2 * rng.uniform();
        t.emplace_back(i, k, v);
        t.emplace_back(k, i, v);
      }
    }
  }
  Eigen::SparseMatrix<double> s(n, n);
  s.setFromTriplets(t.begin(), t.end());
  return normalized_laplacian(s);
}

}  // namespace

TEST_CASE("dense solver: smallest eigenpairs of a small matrix") {
  Eigen::MatrixXd a(3, 3);
  a << 2, -1, 0, -1, 2, -1, 0, -1, 2;
  const auto p = smallest_eigenpairs_dense(a, 2);
  CHECK(p.values(0) == doctest::Approx(2.0 - std::sqrt(2.0)));
  CHECK(p.values(1) == doctest::Approx(2.0));
  CHECK(p.max_residual < 1e-12);
  CHECK_FALSE(p.iterative);
}

TEST_CASE("block Lanczos agrees with the dense solver") {
  for (int n : {600, 900}) {
    const auto l = random_laplacian(n, static_cast<std::uint64_t>(n));
    for (int m : {2, 5}) {
      LanczosOptions opt;
      opt.seed = 7;
      const auto it = smallest_eigenpairs_lanczos(l, m, opt);
      REQUIRE(it.values.size() == m);
      CHECK(it.iterative);
      CHECK(it.max_residual < 1e-8);
      CHECK(eigen_residual(l, it) < 1e-8);
      const auto dense = smallest_eigenpairs_dense(Eigen::MatrixXd(l), m);
      for (int j = 0; j < m; ++j) CHECK(std::abs(it.values(j) - dense.values(j)) < 1e-8);
      const Eigen::MatrixXd gram = it.vectors.transpose() * it.vectors;
      CHECK((gram - Eigen::MatrixXd::Identity(m, m)).cwiseAbs().maxCoeff() < 1e-9);

      // A warm start from the converged block reproduces the same spectrum.
      LanczosOptions warm = opt;
      warm.initial = it.vectors;
      const auto again = smallest_eigenpairs_lanczos(l, m, warm);
      for (int j = 0; j < m; ++j) CHECK(std::abs(again.values(j) - dense.values(j)) < 1e-8);
    }
  }
}

TEST_CASE("dispatcher uses dense below the limit") {
  const auto l = random_laplacian(50, 3);
  CHECK_FALSE(smallest_eigenpairs(l, 3, 512).iterative);
  CHECK(smallest_eigenpairs(random_laplacian(600, 4), 3, 512).iterative);
}
