#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "satdomain/traffic.hpp"

using namespace satdomain;

namespace {

GroundCell unit_cell(double lat, double lon, double w = 1.0) {
  GroundCell c;
  c.center_lat = lat;
  c.center_lon = lon;
  c.density_weight = w;
  return c;
}

const Constellation& iridium() {
  static const Constellation c({presets::shell("iridium")}, {}, {});
  return c;
}

// Exhaustive max-elevation search with the scalar pairwise elevation.
int oracle_serving(const GroundCell& cell, const NetworkSnapshot& s) {
  const Vec3 o = geodetic_to_ecef(cell.center_lat, cell.center_lon);
  int best = -1;
  double best_e = -1e9;
  for (NodeId i : s.leo_ids) {
    const Vec3 d = s.position(i) - o;
    const double e = dot(d, o) / (norm(d) * norm(o));
    if (e >= 0.0 && e > best_e) {
      best_e = e;
      best = static_cast<int>(i);
    }
  }
  return best;
}

}  // namespace

TEST_CASE("grid tiles the sphere") {
  const auto cells = build_grid([](double, double) { return 1.0; });
  REQUIRE(cells.size() == 648);
  double omega = 0.0;
  for (const auto& c : cells) {
    omega += c.solid_angle();
    CHECK(c.density_weight == doctest::Approx(std::cos(deg2rad(c.center_lat))));
  }
  CHECK(std::abs(omega - 4.0 * M_PI) < 1e-9);
  CHECK(cells[0].center_lat == -85.0);
  CHECK(cells[0].center_lon == -175.0);
  CHECK(cells[36].center_lat == -75.0);
  CHECK_THROWS(build_grid([](double, double) { return -1.0; }));
}

TEST_CASE("nine-city density peaks inside city cells") {
  const DensityField f = DensityField::nine_cities();
  const auto cells = build_grid(f);
  auto cell_of = [&](double lat, double lon) {
    const int r = static_cast<int>(std::floor((lat + 90.0) / 10.0));
    const int c = static_cast<int>(std::floor((lon + 180.0) / 10.0));
    return cells[static_cast<std::size_t>(r * 36 + c)];
  };
  const auto top = std::max_element(cells.begin(), cells.end(),
                                    [](const GroundCell& a, const GroundCell& b) { return a.density_weight < b.density_weight; });
  bool top_has_city = false;
  for (const auto& city : presets::nine_cities()) {
    const GroundCell c = cell_of(city.lat, city.lon);
    CHECK(city.lat >= c.lat_lo);
    CHECK(city.lat < c.lat_hi);
    CHECK(c.density_weight > 5.0 * f.background * std::cos(deg2rad(c.center_lat)));
    if (c.index == top->index) top_has_city = true;
  }
  CHECK(top_has_city);
}

TEST_CASE("gravity demand") {
  CHECK(gravity_demand(unit_cell(0, 0, 0.0), unit_cell(0, 10), 5.0) == 0.0);
  const double lon = rad2deg(1000.0 / 6371.0);
  CHECK(gravity_demand(unit_cell(0, 0), unit_cell(0, lon), 1.0) == doctest::Approx(1e-6).epsilon(1e-12));
  const GroundCell a = unit_cell(12, 30, 0.7), b = unit_cell(-40, 100, 0.2);
  CHECK(gravity_demand(a, b, 3.0) == gravity_demand(b, a, 3.0));
}

TEST_CASE("diurnal factor") {
  CHECK(diurnal_factor(0.0, 14 * 3600.0) == doctest::Approx(1.0));
  CHECK(diurnal_factor(0.0, 2 * 3600.0) == doctest::Approx(0.2));
  CHECK(diurnal_factor(30.0, 12 * 3600.0) == doctest::Approx(1.0));  // 14:00 local at 30 E
  for (double t = 0; t < 86400; t += 3917) {
    const double a = diurnal_factor(10.0, t) - 0.6, b = diurnal_factor(-170.0, t) - 0.6;
    CHECK(a == doctest::Approx(-b));
  }
}

TEST_CASE("mapping onto serving satellites") {
  const auto cells = build_grid(DensityField::nine_cities());
  const auto snap = iridium().snapshot(100.0);
  SUBCASE("serving LEO equals an exhaustive max-elevation oracle") {
    const auto serving = serving_leos(cells, snap);
    for (std::size_t c = 0; c < cells.size(); ++c) CHECK(serving[c] == oracle_serving(cells[c], snap));
  }
  SUBCASE("single cell pair gives one entry") {
    std::vector<double> demand(cells.size() * cells.size(), 0.0);
    const std::size_t i = 5 * 36 + 3, j = 12 * 36 + 30;
    demand[i * cells.size() + j] = 7.0;
    const auto m = map_to_satellites(cells, demand, snap);
    REQUIRE(m.matrix.entries.size() == 1);
    CHECK(m.matrix.entries[0].rate == 7.0);
  }
  SUBCASE("conservation") {
    TrafficModel model(cells, 1e6);
    const auto m = model.synthesize(snap, 3, 5000.0);
    CHECK(m.matrix.slot_index == 3);
    CHECK(m.matrix.total() + m.local_demand + m.unserved_demand == doctest::Approx(m.total_demand).epsilon(1e-12));
    for (const auto& e : m.matrix.entries) {
      CHECK(e.rate > 0.0);
      CHECK(e.src != e.dst);
    }
    CHECK(std::is_sorted(m.matrix.entries.begin(), m.matrix.entries.end(), [](const FlowRate& a, const FlowRate& b) {
      return std::pair{a.src, a.dst} < std::pair{b.src, b.dst};
    }));
    const auto again = model.synthesize(snap, 3, 5000.0);
    CHECK(again.matrix == m.matrix);
  }
}

TEST_CASE("gamma scaling") {
  TrafficMatrix m;
  m.num_leos = 3;
  m.entries = {{0, 1, 2.0}, {1, 2, 4.0}, {2, 0, 0.5}};
  CHECK(scale(m, 0.0).total() == 0.0);
  CHECK(scale(m, 1.0) == m);
  const auto h = scale(m, 0.5);
  for (std::size_t k = 0; k < m.entries.size(); ++k) CHECK(h.entries[k].rate == m.entries[k].rate * 0.5);
  CHECK(m.rate(1, 2) == 4.0);
  CHECK(m.rate(2, 1) == 0.0);
  CHECK(m.incident() == std::vector<double>{2.5, 6.0, 4.5});
  CHECK_THROWS(scale(m, 2.0));
  CHECK_THROWS(scale(m, -0.1));
}
