#pragma once
// Data-parallel inner loops with a scalar reference and an AVX2 variant.
//
// Every variant evaluates the same IEEE operations in the same order (no FMA),
// so results are bit-identical across variants and runs stay reproducible
// regardless of which one the dispatcher picks.

#include <cstddef>
#include <span>
#include <string_view>

#include "satdomain/geometry.hpp"

namespace satdomain::kernels {

/// Structure-of-arrays view over a batch of points.
struct PointsSoA {
  std::span<const double> x;
  std::span<const double> y;
  std::span<const double> z;
  std::size_t size() const { return x.size(); }
};

/// Row-major k x dim centroids against dim-major (dim x n) points.
struct CentroidProblem {
  const double* points = nullptr;     // points[d * n + i]
  std::size_t n = 0;
  std::size_t dim = 0;
  const double* centroids = nullptr;  // centroids[c * dim + d]
  std::size_t k = 0;
};

enum class Isa { Scalar, Avx2 };

std::string_view isa_name(Isa isa);

/// Best variant supported by this CPU and build (SATDOMAIN_ISA=scalar forces scalar).
Isa detected_isa();
/// Variant currently used by the dispatching entry points.
Isa active_isa();
/// Override the dispatch target; throws if the variant is unavailable.
void set_active_isa(Isa isa);
bool isa_available(Isa isa);

// sin(elevation) at `observer` toward each point: ((p - o) . o) / (|p - o| |o|).
// Coincident points yield 1.
void elevation_sine_from(const Vec3& observer, PointsSoA targets, std::span<double> out);

// sin(elevation) at each point toward `target`: ((t - p) . p) / (|t - p| |p|).
void elevation_sine_toward(const Vec3& target, PointsSoA observers, std::span<double> out);

// Nearest centroid per point by squared distance; ties resolve to the lowest index.
void nearest_centroid(const CentroidProblem& prob, std::span<int> labels, std::span<double> dist2);

namespace scalar {
void elevation_sine_from(const Vec3& observer, PointsSoA targets, std::span<double> out);
void elevation_sine_toward(const Vec3& target, PointsSoA observers, std::span<double> out);
void nearest_centroid(const CentroidProblem& prob, std::span<int> labels, std::span<double> dist2);
}  // namespace scalar

namespace avx2 {
void elevation_sine_from(const Vec3& observer, PointsSoA targets, std::span<double> out);
void elevation_sine_toward(const Vec3& target, PointsSoA observers, std::span<double> out);
void nearest_centroid(const CentroidProblem& prob, std::span<int> labels, std::span<double> dist2);
}  // namespace avx2

}  // namespace satdomain::kernels
