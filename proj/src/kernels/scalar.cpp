#include <cmath>
#include <limits>

#include "satdomain/kernels/kernels.hpp"

namespace satdomain::kernels::scalar {

void elevation_sine_from(const Vec3& observer, PointsSoA targets, std::span<double> out) {
  const double on = std::sqrt(observer.x * observer.x + observer.y * observer.y + observer.z * observer.z);
  for (std::size_t i = 0; i < targets.size(); ++i) {
    const double dx = targets.x[i] - observer.x;
    const double dy = targets.y[i] - observer.y;
    const double dz = targets.z[i] - observer.z;
    const double num = dx * observer.x + dy * observer.y + dz * observer.z;
    const double den = std::sqrt(dx * dx + dy * dy + dz * dz) * on;
    out[i] = den == 0.0 ? 1.0 : num / den;
  }
}

void elevation_sine_toward(const Vec3& target, PointsSoA observers, std::span<double> out) {
  for (std::size_t i = 0; i < observers.size(); ++i) {
    const double px = observers.x[i];
    const double py = observers.y[i];
    const double pz = observers.z[i];
    const double dx = target.x - px;
    const double dy = target.y - py;
    const double dz = target.z - pz;
    const double num = dx * px + dy * py + dz * pz;
    const double den = std::sqrt(dx * dx + dy * dy + dz * dz) * std::sqrt(px * px + py * py + pz * pz);
    out[i] = den == 0.0 ? 1.0 : num / den;
  }
}

void nearest_centroid(const CentroidProblem& prob, std::span<int> labels, std::span<double> dist2) {
  for (std::size_t i = 0; i < prob.n; ++i) {
    double best = std::numeric_limits<double>::infinity();
    int best_c = 0;
    for (std::size_t c = 0; c < prob.k; ++c) {
      double s = 0.0;
      for (std::size_t d = 0; d < prob.dim; ++d) {
        const double t = prob.points[d * prob.n + i] - prob.centroids[c * prob.dim + d];
        s = s + t * t;
      }
      if (s < best) {
        best = s;
        best_c = static_cast<int>(c);
      }
    }
    labels[i] = best_c;
    dist2[i] = best;
  }
}

}  // namespace satdomain::kernels::scalar
