#pragma once

#include <cstdint>
#include <vector>

namespace satdomain {

struct KMeansOptions {
  int max_iterations = 100;
  int restarts = 8;  // independent k-means++ starts; lowest inertia wins
};

struct KMeansResult {
  std::vector<int> labels;
  std::vector<double> centroids;  // row-major k x dim
  double inertia = 0.0;
  int iterations = 0;
};

/// Lloyd iterations from k-means++ seeding. Points are row-major (n x dim).
/// Nearest-centroid ties go to the lowest index; an emptied cluster is reseeded with
/// the point farthest from its centroid (lowest index on ties).
KMeansResult kmeans(const std::vector<double>& points, std::size_t n, std::size_t dim, std::size_t k,
                    std::uint64_t seed, const KMeansOptions& opt = {});

}  // namespace satdomain
