#include "satdomain/kmeans.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

#include "satdomain/kernels/kernels.hpp"
#include "satdomain/rng.hpp"

namespace satdomain {

namespace {

KMeansResult run_once(const std::vector<double>& points, const std::vector<double>& dim_major, std::size_t n,
                      std::size_t dim, std::size_t k, Rng& rng, int max_iterations) {
  KMeansResult r;
  r.centroids.assign(k * dim, 0.0);
  auto set_centroid = [&](std::size_t c, std::size_t i) {
    std::copy_n(points.begin() + static_cast<long>(i * dim), dim, r.centroids.begin() + static_cast<long>(c * dim));
  };

  // k-means++ seeding.
  std::vector<double> d2(n, std::numeric_limits<double>::infinity());
  std::size_t first = static_cast<std::size_t>(rng.below(n));
  set_centroid(0, first);
  for (std::size_t c = 1; c < k; ++c) {
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double s = 0.0;
      for (std::size_t d = 0; d < dim; ++d) {
        const double diff = points[i * dim + d] - r.centroids[(c - 1) * dim + d];
        s += diff * diff;
      }
      d2[i] = std::min(d2[i], s);
      total += d2[i];
    }
    std::size_t pick = 0;
    if (total > 0.0) {
      double u = rng.uniform() * total;
      pick = n - 1;
      for (std::size_t i = 0; i < n; ++i) {
        u -= d2[i];
        if (u < 0.0 && d2[i] > 0.0) {
          pick = i;
          break;
        }
      }
    } else {
      pick = static_cast<std::size_t>(rng.below(n));
    }
    set_centroid(c, pick);
  }

  r.labels.assign(n, -1);
  std::vector<int> labels(n);
  std::vector<double> dist2(n);
  std::vector<double> sums(k * dim);
  std::vector<std::size_t> counts(k);
  for (int it = 0; it < max_iterations; ++it) {
    kernels::nearest_centroid({dim_major.data(), n, dim, r.centroids.data(), k}, labels, dist2);
    r.iterations = it + 1;
    const bool changed = labels != r.labels;
    r.labels = labels;
    std::fill(sums.begin(), sums.end(), 0.0);
    std::fill(counts.begin(), counts.end(), 0);
    for (std::size_t i = 0; i < n; ++i) {
      const auto c = static_cast<std::size_t>(labels[i]);
      ++counts[c];
      for (std::size_t d = 0; d < dim; ++d) sums[c * dim + d] += points[i * dim + d];
    }
    bool reseeded = false;
    for (std::size_t c = 0; c < k; ++c) {
      if (counts[c] == 0) {
        std::size_t far = 0;
        for (std::size_t i = 1; i < n; ++i) {
          if (dist2[i] > dist2[far]) far = i;
        }
        set_centroid(c, far);
        dist2[far] = 0.0;
        reseeded = true;
      } else {
        for (std::size_t d = 0; d < dim; ++d) r.centroids[c * dim + d] = sums[c * dim + d] / static_cast<double>(counts[c]);
      }
    }
    if (!changed && !reseeded) break;
  }
  kernels::nearest_centroid({dim_major.data(), n, dim, r.centroids.data(), k}, labels, dist2);
  r.labels = labels;
  r.inertia = 0.0;
  for (double v : dist2) r.inertia += v;
  return r;
}

}  // namespace

KMeansResult kmeans(const std::vector<double>& points, std::size_t n, std::size_t dim, std::size_t k,
                    std::uint64_t seed, const KMeansOptions& opt) {
  if (k == 0 || k > n) throw std::invalid_argument("kmeans: need 1 <= k <= n");
  if (points.size() != n * dim) throw std::invalid_argument("kmeans: point buffer size mismatch");
  std::vector<double> dim_major(n * dim);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t d = 0; d < dim; ++d) dim_major[d * n + i] = points[i * dim + d];
  }
  Rng rng(seed);
  KMeansResult best;
  bool have = false;
  for (int r = 0; r < std::max(1, opt.restarts); ++r) {
    KMeansResult cur = run_once(points, dim_major, n, dim, k, rng, opt.max_iterations);
    if (!have || cur.inertia < best.inertia) {
      best = std::move(cur);
      have = true;
    }
  }
  return best;
}

}  // namespace satdomain
