#include <cstring>
#include <vector>

#include "doctest.h"
#include "satdomain/kernels/kernels.hpp"
#include "satdomain/rng.hpp"

using namespace satdomain;
namespace k = satdomain::kernels;

namespace {

struct Cloud {
  std::vector<double> x, y, z;
  k::PointsSoA view() const { return {x, y, z}; }
};

Cloud random_cloud(std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  Cloud c;
  for (std::size_t i = 0; i < n; ++i) {
    c.x.push_back((rng.uniform() - 0.5) * 4e4);
    c.y.push_back((rng.uniform() - 0.5) * 4e4);
    c.z.push_back((rng.uniform() - 0.5) * 4e4);
  }
  return c;
}

bool same_bits(const std::vector<double>& a, const std::vector<double>& b) {
  return a.size() == b.size() && std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
}

}  // namespace

TEST_CASE("elevation sine: scalar matches the closed form") {
  const Vec3 o{7000.0, 0.0, 0.0};
  Cloud c;
  c.x = {8000.0, 7000.0, 7000.0};
  c.y = {0.0, 1000.0, 0.0};
  c.z = {0.0, 0.0, 0.0};
  std::vector<double> out(3);
  k::scalar::elevation_sine_from(o, c.view(), out);
  CHECK(out[0] == doctest::Approx(1.0));
  CHECK(out[1] == doctest::Approx(0.0));
  CHECK(out[2] == 1.0);  // coincident
}

TEST_CASE("kernels: AVX2 variant is bit-identical to scalar") {
  if (!k::isa_available(k::Isa::Avx2)) {
    MESSAGE("AVX2 unavailable, skipping equivalence");
    return;
  }
  for (std::size_t n : {1u, 3u, 4u, 7u, 64u, 1001u}) {
    const Cloud c = random_cloud(n, n);
    const Vec3 o{6921.0, -13.0, 250.0};
    std::vector<double> a(n), b(n);
    k::scalar::elevation_sine_from(o, c.view(), a);
    k::avx2::elevation_sine_from(o, c.view(), b);
    CHECK(same_bits(a, b));
    k::scalar::elevation_sine_toward(o, c.view(), a);
    k::avx2::elevation_sine_toward(o, c.view(), b);
    CHECK(same_bits(a, b));
  }
  Rng rng(9);
  for (std::size_t n : {1u, 5u, 33u, 500u}) {
    for (std::size_t dim : {1u, 2u, 3u, 6u}) {
      for (std::size_t kk : {1u, 2u, 4u}) {
        std::vector<double> pts(n * dim), cen(kk * dim);
        for (auto& v : pts) v = rng.uniform();
        for (auto& v : cen) v = rng.uniform();
        // Duplicate centroid to exercise the tie rule.
        if (kk > 1) std::copy(cen.begin(), cen.begin() + static_cast<long>(dim), cen.begin() + static_cast<long>(dim));
        k::CentroidProblem p{pts.data(), n, dim, cen.data(), kk};
        std::vector<int> la(n), lb(n);
        std::vector<double> da(n), db(n);
        k::scalar::nearest_centroid(p, la, da);
        k::avx2::nearest_centroid(p, lb, db);
        CHECK(la == lb);
        CHECK(same_bits(da, db));
        if (kk > 1) {
          for (int l : la) CHECK(l != 1);
        }
      }
    }
  }
}

TEST_CASE("kernels: dispatch can be forced to scalar") {
  const k::Isa before = k::active_isa();
  k::set_active_isa(k::Isa::Scalar);
  CHECK(k::active_isa() == k::Isa::Scalar);
  CHECK(k::isa_name(k::Isa::Scalar) == "scalar");
  k::set_active_isa(before);
}
