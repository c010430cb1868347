#include <cmath>
#include <limits>
#include <stdexcept>

#include "satdomain/kernels/kernels.hpp"

#if defined(SATDOMAIN_HAVE_AVX2)
#include <immintrin.h>
#endif

namespace satdomain::kernels::avx2 {

#if defined(SATDOMAIN_HAVE_AVX2)

namespace {

// den == 0 -> 1.0, else num / den.
inline __m256d safe_ratio(__m256d num, __m256d den) {
  const __m256d zero = _mm256_setzero_pd();
  const __m256d one = _mm256_set1_pd(1.0);
  const __m256d is_zero = _mm256_cmp_pd(den, zero, _CMP_EQ_OQ);
  const __m256d q = _mm256_div_pd(num, _mm256_blendv_pd(den, one, is_zero));
  return _mm256_blendv_pd(q, one, is_zero);
}

inline __m256d dot3(__m256d ax, __m256d ay, __m256d az, __m256d bx, __m256d by, __m256d bz) {
  // ((ax*bx + ay*by) + az*bz), matching the scalar evaluation order.
  return _mm256_add_pd(_mm256_add_pd(_mm256_mul_pd(ax, bx), _mm256_mul_pd(ay, by)), _mm256_mul_pd(az, bz));
}

}  // namespace

void elevation_sine_from(const Vec3& observer, PointsSoA targets, std::span<double> out) {
  const std::size_t n = targets.size();
  const double on = std::sqrt(observer.x * observer.x + observer.y * observer.y + observer.z * observer.z);
  const __m256d ox = _mm256_set1_pd(observer.x);
  const __m256d oy = _mm256_set1_pd(observer.y);
  const __m256d oz = _mm256_set1_pd(observer.z);
  const __m256d onv = _mm256_set1_pd(on);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d dx = _mm256_sub_pd(_mm256_loadu_pd(&targets.x[i]), ox);
    const __m256d dy = _mm256_sub_pd(_mm256_loadu_pd(&targets.y[i]), oy);
    const __m256d dz = _mm256_sub_pd(_mm256_loadu_pd(&targets.z[i]), oz);
    const __m256d num = dot3(dx, dy, dz, ox, oy, oz);
    const __m256d den = _mm256_mul_pd(_mm256_sqrt_pd(dot3(dx, dy, dz, dx, dy, dz)), onv);
    _mm256_storeu_pd(&out[i], safe_ratio(num, den));
  }
  if (i < n) {
    PointsSoA tail{targets.x.subspan(i), targets.y.subspan(i), targets.z.subspan(i)};
    scalar::elevation_sine_from(observer, tail, out.subspan(i));
  }
}

void elevation_sine_toward(const Vec3& target, PointsSoA observers, std::span<double> out) {
  const std::size_t n = observers.size();
  const __m256d tx = _mm256_set1_pd(target.x);
  const __m256d ty = _mm256_set1_pd(target.y);
  const __m256d tz = _mm256_set1_pd(target.z);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d px = _mm256_loadu_pd(&observers.x[i]);
    const __m256d py = _mm256_loadu_pd(&observers.y[i]);
    const __m256d pz = _mm256_loadu_pd(&observers.z[i]);
    const __m256d dx = _mm256_sub_pd(tx, px);
    const __m256d dy = _mm256_sub_pd(ty, py);
    const __m256d dz = _mm256_sub_pd(tz, pz);
    const __m256d num = dot3(dx, dy, dz, px, py, pz);
    const __m256d den =
        _mm256_mul_pd(_mm256_sqrt_pd(dot3(dx, dy, dz, dx, dy, dz)), _mm256_sqrt_pd(dot3(px, py, pz, px, py, pz)));
    _mm256_storeu_pd(&out[i], safe_ratio(num, den));
  }
  if (i < n) {
    PointsSoA tail{observers.x.subspan(i), observers.y.subspan(i), observers.z.subspan(i)};
    scalar::elevation_sine_toward(target, tail, out.subspan(i));
  }
}

void nearest_centroid(const CentroidProblem& prob, std::span<int> labels, std::span<double> dist2) {
  const std::size_t n = prob.n;
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d best = _mm256_set1_pd(std::numeric_limits<double>::infinity());
    __m256d best_c = _mm256_setzero_pd();
    for (std::size_t c = 0; c < prob.k; ++c) {
      __m256d s = _mm256_setzero_pd();
      for (std::size_t d = 0; d < prob.dim; ++d) {
        const __m256d t = _mm256_sub_pd(_mm256_loadu_pd(&prob.points[d * n + i]),
                                        _mm256_set1_pd(prob.centroids[c * prob.dim + d]));
        s = _mm256_add_pd(s, _mm256_mul_pd(t, t));
      }
      // Strict less-than keeps the lowest centroid index on ties.
      const __m256d better = _mm256_cmp_pd(s, best, _CMP_LT_OQ);
      best = _mm256_blendv_pd(best, s, better);
      best_c = _mm256_blendv_pd(best_c, _mm256_set1_pd(static_cast<double>(c)), better);
    }
    alignas(32) double b[4];
    alignas(32) double bc[4];
    _mm256_store_pd(b, best);
    _mm256_store_pd(bc, best_c);
    for (int l = 0; l < 4; ++l) {
      labels[i + l] = static_cast<int>(bc[l]);
      dist2[i + l] = b[l];
    }
  }
  for (; i < n; ++i) {
    double best = std::numeric_limits<double>::infinity();
    int best_c = 0;
    for (std::size_t c = 0; c < prob.k; ++c) {
      double s = 0.0;
      for (std::size_t d = 0; d < prob.dim; ++d) {
        const double t = prob.points[d * n + i] - prob.centroids[c * prob.dim + d];
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

#else

void elevation_sine_from(const Vec3&, PointsSoA, std::span<double>) {
  throw std::logic_error("AVX2 kernels not compiled in");
}
void elevation_sine_toward(const Vec3&, PointsSoA, std::span<double>) {
  throw std::logic_error("AVX2 kernels not compiled in");
}
void nearest_centroid(const CentroidProblem&, std::span<int>, std::span<double>) {
  throw std::logic_error("AVX2 kernels not compiled in");
}

#endif

}  // namespace satdomain::kernels::avx2
