#include <cmath>

#include "doctest.h"
#include "oracles.hpp"
#include "satdomain/spectral.hpp"

using namespace satdomain;
using namespace satdomain::testing;

namespace {

Eigen::SparseMatrix<double> from_dense(const Eigen::MatrixXd& d) { return d.sparseView(); }

}  // namespace

TEST_CASE("normalized Laplacian is symmetric PSD with one zero per component") {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const Corg g = random_two_component_corg(seed);
    const auto l = normalized_laplacian(similarity(g).s);
    const Eigen::MatrixXd d(l);
    CHECK((d - d.transpose()).cwiseAbs().maxCoeff() < 1e-15);
    const auto eig = smallest_eigenpairs_dense(d, static_cast<int>(g.size()));
    CHECK(eig.values.minCoeff() >= -1e-9);
    int zeros = 0;
    for (int j = 0; j < eig.values.size(); ++j) zeros += std::abs(eig.values(j)) < 1e-9;
    CHECK(zeros == 2);
    const Eigen::MatrixXd gram = eig.vectors.transpose() * eig.vectors;
    CHECK((gram - Eigen::MatrixXd::Identity(gram.rows(), gram.cols())).cwiseAbs().maxCoeff() < 1e-9);
  }
}

TEST_CASE("disconnected graphs: clusters are the components") {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const Corg g = random_two_component_corg(seed);
    const auto r = spectral_cluster(g, 2, seed);
    CHECK_FALSE(r.conflict_unresolved);
    CHECK(r.retries == 0);
    // Component membership by construction: the first chain holds the first virtual node.
    const int left = r.labels[g.num_leos];
    for (const auto& e : g.edges) CHECK(r.labels[e.a] == r.labels[e.b]);
    CHECK(r.labels[g.num_leos + 1] != left);
    CHECK(r.virtuals[0].size() == 1);
    CHECK(r.virtuals[1].size() == 1);
  }
}

TEST_CASE("barbell: matches the minimum normalized cut") {
  // Two triangles joined by one weak bridge; a virtual node in each triangle.
  Eigen::MatrixXd s = Eigen::MatrixXd::Identity(6, 6);
  auto link = [&](int a, int b, double w) { s(a, b) = s(b, a) = w; };
  link(0, 1, 0.9);
  link(0, 4, 0.8);
  link(1, 4, 0.7);
  link(2, 3, 0.85);
  link(2, 5, 0.75);
  link(3, 5, 0.95);
  link(1, 2, 0.05);
  const std::vector<bool> virt{false, false, false, false, true, true};
  const auto r = spectral_cluster_similarity(from_dense(s), virt, 2, 1);
  const auto oracle = min_ncut_bipartition(from_dense(s));
  CHECK(canonical(r.labels) == oracle);
  CHECK(oracle == std::vector<int>{0, 0, 1, 1, 0, 1});
  CHECK(r.members[static_cast<std::size_t>(r.labels[0])] == std::vector<std::size_t>{0, 1});
}

TEST_CASE("conflict resolution separates co-clustered controllers") {
  // Both virtual nodes hang off one tight clique and a loose pair sits apart.
  Eigen::MatrixXd s = Eigen::MatrixXd::Identity(6, 6);
  auto link = [&](int a, int b, double w) { s(a, b) = s(b, a) = w; };
  link(0, 1, 0.9);
  link(0, 4, 0.9);
  link(1, 5, 0.9);
  link(4, 5, 0.0);
  link(0, 5, 0.8);
  link(1, 4, 0.8);
  link(2, 3, 0.9);
  link(1, 2, 0.01);
  const std::vector<bool> virt{false, false, false, false, true, true};
  const auto r = spectral_cluster_similarity(from_dense(s), virt, 2, 3);
  CHECK_FALSE(r.conflict_unresolved);
  CHECK(r.retries > 0);
  CHECK(r.labels[4] != r.labels[5]);
}

TEST_CASE("spectral clustering is deterministic for a fixed seed") {
  const Corg g = random_six_node_corg(42);
  const auto a = spectral_cluster(g, 2, 9);
  const auto b = spectral_cluster(g, 2, 9);
  CHECK(a.labels == b.labels);
  CHECK(a.retries == b.retries);
  CHECK_THROWS(spectral_cluster(g, 0, 1));
}
