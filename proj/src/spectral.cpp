#include "satdomain/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "satdomain/rng.hpp"

namespace satdomain {

Eigen::SparseMatrix<double> normalized_laplacian(const Eigen::SparseMatrix<double>& s) {
  const Eigen::Index n = s.rows();
  Eigen::VectorXd deg = Eigen::VectorXd::Zero(n);
  for (Eigen::Index c = 0; c < s.outerSize(); ++c) {
    for (Eigen::SparseMatrix<double>::InnerIterator it(s, c); it; ++it) deg(it.row()) += it.value();
  }
  Eigen::VectorXd inv_sqrt(n);
  for (Eigen::Index i = 0; i < n; ++i) inv_sqrt(i) = deg(i) > 0.0 ? 1.0 / std::sqrt(deg(i)) : 0.0;
  std::vector<Eigen::Triplet<double>> t;
  t.reserve(static_cast<std::size_t>(s.nonZeros() + n));
  for (Eigen::Index i = 0; i < n; ++i) t.emplace_back(i, i, deg(i) > 0.0 ? 1.0 : 0.0);
  for (Eigen::Index c = 0; c < s.outerSize(); ++c) {
    for (Eigen::SparseMatrix<double>::InnerIterator it(s, c); it; ++it) {
      t.emplace_back(it.row(), it.col(), -it.value() * inv_sqrt(it.row()) * inv_sqrt(it.col()));
    }
  }
  Eigen::SparseMatrix<double> l(n, n);
  l.setFromTriplets(t.begin(), t.end());
  l.prune(0.0);
  return l;
}

Embedding spectral_embedding(const Eigen::SparseMatrix<double>& s, int m, std::uint64_t seed,
                             std::size_t dense_limit, const Eigen::MatrixXd& warm_start) {
  Embedding e;
  LanczosOptions lo;
  lo.seed = seed;
  lo.initial = warm_start;
  e.eig = smallest_eigenpairs(normalized_laplacian(s), m, dense_limit, lo);
  const auto n = static_cast<std::size_t>(s.rows());
  const auto mm = static_cast<std::size_t>(m);
  e.rows.assign(n * mm, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    double len = 0.0;
    for (std::size_t j = 0; j < mm; ++j) {
      const double v = e.eig.vectors(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
      len += v * v;
    }
    len = std::sqrt(len);
    if (len == 0.0) continue;
    for (std::size_t j = 0; j < mm; ++j) {
      e.rows[i * mm + j] = e.eig.vectors(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) / len;
    }
  }
  return e;
}

std::vector<std::size_t> SpectralResult::conflicted_clusters() const {
  std::vector<std::size_t> out;
  for (std::size_t c = 0; c < virtuals.size(); ++c) {
    if (virtuals[c].size() >= 2) out.push_back(c);
  }
  return out;
}

namespace {

void fill_groups(SpectralResult& r, const std::vector<bool>& is_virtual, std::size_t m) {
  r.members.assign(m, {});
  r.virtuals.assign(m, {});
  for (std::size_t i = 0; i < r.labels.size(); ++i) {
    (is_virtual[i] ? r.virtuals : r.members)[static_cast<std::size_t>(r.labels[i])].push_back(i);
  }
}

// Highest-similarity off-diagonal entry in a row set; ties go to the lowest (row, col).
bool remove_strongest_edge(Eigen::SparseMatrix<double>& s, const std::vector<std::size_t>& nodes) {
  double best = -1.0;
  Eigen::Index br = -1, bc = -1;
  for (std::size_t node : nodes) {
    const auto col = static_cast<Eigen::Index>(node);
    // Symmetric storage: column `col` lists the row's neighbors.
    for (Eigen::SparseMatrix<double>::InnerIterator it(s, col); it; ++it) {
      if (it.row() == col || it.value() <= 0.0) continue;
      const Eigen::Index a = std::min(it.row(), col), b = std::max(it.row(), col);
      if (it.value() > best || (it.value() == best && std::pair{a, b} < std::pair{br, bc})) {
        best = it.value();
        br = a;
        bc = b;
      }
    }
  }
  if (br < 0) return false;
  s.coeffRef(br, bc) = 0.0;
  s.coeffRef(bc, br) = 0.0;
  s.prune(0.0);
  return true;
}

}  // namespace

SpectralResult spectral_cluster_similarity(Eigen::SparseMatrix<double> s, const std::vector<bool>& is_virtual,
                                           std::size_t m, std::uint64_t seed, const SpectralOptions& opt) {
  const auto n = static_cast<std::size_t>(s.rows());
  if (m == 0 || m > n) throw std::invalid_argument("spectral_cluster: need 1 <= m <= n");
  if (is_virtual.size() != n) throw std::invalid_argument("spectral_cluster: virtual flag size mismatch");
  const int max_retries = opt.max_retries < 0 ? static_cast<int>(n) : opt.max_retries;

  SpectralResult r;
  for (int attempt = 0;; ++attempt) {
    // Retries change a single edge, so the previous eigenvectors are a close starting block.
    const Eigen::MatrixXd warm = r.eig.iterative ? r.eig.vectors : Eigen::MatrixXd();
    Embedding e = spectral_embedding(s, static_cast<int>(m), combine_seed(seed, 0x5eed), opt.dense_limit, warm);
    KMeansResult km = kmeans(e.rows, n, m, m, combine_seed(seed, static_cast<std::uint64_t>(attempt)), opt.kmeans);
    r.labels = std::move(km.labels);
    r.eig = std::move(e.eig);
    fill_groups(r, is_virtual, m);
    const auto conflicted = r.conflicted_clusters();
    if (conflicted.empty()) break;
    std::vector<std::size_t> nodes;
    for (std::size_t c : conflicted) nodes.insert(nodes.end(), r.virtuals[c].begin(), r.virtuals[c].end());
    if (attempt >= max_retries || !remove_strongest_edge(s, nodes)) {
      r.conflict_unresolved = true;
      break;
    }
    ++r.retries;
    ++r.edges_removed;
  }
  return r;
}

SpectralResult spectral_cluster(const Corg& g, std::size_t m, std::uint64_t seed, const SpectralOptions& opt) {
  return spectral_cluster_similarity(similarity(g).s, g.virtual_flags, m, seed, opt);
}

}  // namespace satdomain
