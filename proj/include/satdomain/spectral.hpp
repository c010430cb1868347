#pragma once

#include <cstdint>
#include <vector>

#include "satdomain/corg.hpp"
#include "satdomain/eigen_solver.hpp"
#include "satdomain/kmeans.hpp"

namespace satdomain {

/// I - D^-1/2 S D^-1/2 with D the row sums of S (self loops included).
Eigen::SparseMatrix<double> normalized_laplacian(const Eigen::SparseMatrix<double>& s);

struct Embedding {
  std::vector<double> rows;  // row-major n x m, each row unit length (zero rows stay zero)
  EigenPairs eig;
};

/// `warm_start`, when it has one row per node, seeds the iterative solver.
Embedding spectral_embedding(const Eigen::SparseMatrix<double>& s, int m, std::uint64_t seed,
                             std::size_t dense_limit = 512, const Eigen::MatrixXd& warm_start = {});

struct SpectralOptions {
  int max_retries = -1;            // -1: one per graph node
  std::size_t dense_limit = 512;
  KMeansOptions kmeans;
};

struct SpectralResult {
  std::vector<int> labels;                        // per CORG node, in [0, m)
  std::vector<std::vector<std::size_t>> members;  // LEO local indices per cluster, virtual nodes stripped
  std::vector<std::vector<std::size_t>> virtuals; // virtual local indices per cluster
  int retries = 0;
  bool conflict_unresolved = false;
  std::size_t edges_removed = 0;
  EigenPairs eig;

  /// Clusters holding two or more virtual controller nodes.
  std::vector<std::size_t> conflicted_clusters() const;
};

/// Normalized spectral clustering into m groups. While a cluster holds more than one
/// virtual controller node, the highest-similarity edge incident to such a node is
/// removed and the embedding is recomputed.
SpectralResult spectral_cluster(const Corg& g, std::size_t m, std::uint64_t seed, const SpectralOptions& opt = {});

/// Clusters an explicit similarity matrix; `is_virtual` marks controller nodes.
SpectralResult spectral_cluster_similarity(Eigen::SparseMatrix<double> s, const std::vector<bool>& is_virtual,
                                           std::size_t m, std::uint64_t seed, const SpectralOptions& opt = {});

}  // namespace satdomain
