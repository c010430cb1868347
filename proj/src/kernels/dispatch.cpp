#include <atomic>
#include <cstdlib>
#include <stdexcept>
#include <string>

#include "satdomain/kernels/kernels.hpp"

namespace satdomain::kernels {

namespace {

bool cpu_has_avx2() {
#if defined(SATDOMAIN_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

Isa detect() {
  if (const char* env = std::getenv("SATDOMAIN_ISA"); env != nullptr && std::string(env) == "scalar") {
    return Isa::Scalar;
  }
  return cpu_has_avx2() ? Isa::Avx2 : Isa::Scalar;
}

std::atomic<Isa>& active() {
  static std::atomic<Isa> isa{detect()};
  return isa;
}

}  // namespace

std::string_view isa_name(Isa isa) { return isa == Isa::Avx2 ? "avx2" : "scalar"; }

Isa detected_isa() { return detect(); }

Isa active_isa() { return active().load(std::memory_order_relaxed); }

bool isa_available(Isa isa) { return isa == Isa::Scalar || cpu_has_avx2(); }

void set_active_isa(Isa isa) {
  if (!isa_available(isa)) {
    throw std::invalid_argument("kernel variant unavailable: " + std::string(isa_name(isa)));
  }
  active().store(isa, std::memory_order_relaxed);
}

void elevation_sine_from(const Vec3& observer, PointsSoA targets, std::span<double> out) {
  if (active_isa() == Isa::Avx2) {
    avx2::elevation_sine_from(observer, targets, out);
  } else {
    scalar::elevation_sine_from(observer, targets, out);
  }
}

void elevation_sine_toward(const Vec3& target, PointsSoA observers, std::span<double> out) {
  if (active_isa() == Isa::Avx2) {
    avx2::elevation_sine_toward(target, observers, out);
  } else {
    scalar::elevation_sine_toward(target, observers, out);
  }
}

void nearest_centroid(const CentroidProblem& prob, std::span<int> labels, std::span<double> dist2) {
  if (active_isa() == Isa::Avx2) {
    avx2::nearest_centroid(prob, labels, dist2);
  } else {
    scalar::nearest_centroid(prob, labels, dist2);
  }
}

}  // namespace satdomain::kernels
