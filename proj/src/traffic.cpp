#include "satdomain/traffic.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

#include "satdomain/kernels/kernels.hpp"

namespace satdomain {

double GroundCell::solid_angle() const {
  return deg2rad(lon_hi - lon_lo) * (std::sin(deg2rad(lat_hi)) - std::sin(deg2rad(lat_lo)));
}

double DensityField::operator()(double lat_deg, double lon_deg) const {
  double v = background;
  for (const auto& b : bumps) {
    const double d = great_circle_km(lat_deg, lon_deg, b.lat, b.lon);
    v += b.amplitude * std::exp(-d * d / (2.0 * b.sigma_km * b.sigma_km));
  }
  return v;
}

DensityField DensityField::nine_cities(double sigma_km, double background) {
  DensityField f;
  f.background = background;
  for (const auto& c : presets::nine_cities()) f.bumps.push_back({c.lat, c.lon, 1.0, sigma_km});
  return f;
}

std::vector<GroundCell> build_grid(const DensityFn& density) {
  std::vector<GroundCell> cells;
  cells.reserve(kGridCells);
  for (int r = 0; r < kGridLatCells; ++r) {
    for (int c = 0; c < kGridLonCells; ++c) {
      GroundCell g;
      g.index = r * kGridLonCells + c;
      g.lat_lo = -90.0 + r * kCellSizeDeg;
      g.lat_hi = g.lat_lo + kCellSizeDeg;
      g.lon_lo = -180.0 + c * kCellSizeDeg;
      g.lon_hi = g.lon_lo + kCellSizeDeg;
      g.center_lat = 0.5 * (g.lat_lo + g.lat_hi);
      g.center_lon = 0.5 * (g.lon_lo + g.lon_hi);
      const double d = density(g.center_lat, g.center_lon);
      if (d < 0.0) throw std::invalid_argument("density field must be nonnegative");
      g.density_weight = d * std::cos(deg2rad(g.center_lat));
      cells.push_back(g);
    }
  }
  return cells;
}

double gravity_demand(const GroundCell& a, const GroundCell& b, double g, double exponent) {
  if (a.density_weight == 0.0 || b.density_weight == 0.0) return 0.0;
  const double d = great_circle_km(a.center_lat, a.center_lon, b.center_lat, b.center_lon);
  return g * (a.density_weight * b.density_weight) / std::pow(d, exponent);
}

double diurnal_factor(double lon_deg, double utc_s, double floor) {
  const double hour = std::fmod(utc_s / 3600.0 + lon_deg / 15.0, 24.0);
  return 0.5 * (1.0 + floor) + 0.5 * (1.0 - floor) * std::cos(constants::kTwoPi * (hour - 14.0) / 24.0);
}

double TrafficMatrix::rate(NodeId src, NodeId dst) const {
  auto it = std::lower_bound(entries.begin(), entries.end(), std::pair{src, dst},
                             [](const FlowRate& e, const std::pair<NodeId, NodeId>& k) {
                               return std::pair{e.src, e.dst} < k;
                             });
  return (it != entries.end() && it->src == src && it->dst == dst) ? it->rate : 0.0;
}

double TrafficMatrix::total() const {
  double s = 0.0;
  for (const auto& e : entries) s += e.rate;
  return s;
}

std::vector<double> TrafficMatrix::outgoing() const {
  std::vector<double> out(num_leos, 0.0);
  for (const auto& e : entries) out[e.src] += e.rate;
  return out;
}

std::vector<double> TrafficMatrix::incident() const {
  std::vector<double> out(num_leos, 0.0);
  for (const auto& e : entries) {
    out[e.src] += e.rate;
    out[e.dst] += e.rate;
  }
  return out;
}

TrafficMatrix scale(const TrafficMatrix& m, double gamma) {
  if (!(gamma >= 0.0 && gamma <= 1.0)) throw std::invalid_argument("traffic scale gamma must be in [0, 1]");
  TrafficMatrix out = m;
  if (gamma == 0.0) {
    out.entries.clear();
    return out;
  }
  for (auto& e : out.entries) e.rate *= gamma;
  return out;
}

void write_traffic_csv(std::ostream& os, const TrafficMatrix& m, bool header) {
  if (header) os << "slot,src,dst,rate\n";
  for (const auto& e : m.entries) os << m.slot_index << ',' << e.src << ',' << e.dst << ',' << e.rate << '\n';
}

std::vector<int> serving_leos(const std::vector<GroundCell>& cells, const NetworkSnapshot& snap, double mask_deg) {
  const std::size_t n = snap.num_leos();
  std::vector<double> xs(n), ys(n), zs(n), sine(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Vec3& p = snap.position(snap.leo_ids[i]);
    xs[i] = p.x;
    ys[i] = p.y;
    zs[i] = p.z;
  }
  const double mask_sine = std::sin(deg2rad(mask_deg));
  std::vector<int> serving(cells.size(), -1);
  for (std::size_t c = 0; c < cells.size(); ++c) {
    const Vec3 o = geodetic_to_ecef(cells[c].center_lat, cells[c].center_lon);
    kernels::elevation_sine_from(o, {xs, ys, zs}, sine);
    double best = -2.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (sine[i] >= mask_sine && sine[i] > best) {
        best = sine[i];
        serving[c] = static_cast<int>(snap.leo_ids[i]);
      }
    }
  }
  return serving;
}

MappingResult map_to_satellites(const std::vector<GroundCell>& cells, const std::vector<double>& demand,
                                const NetworkSnapshot& snap, double mask_deg) {
  const std::size_t nc = cells.size();
  if (demand.size() != nc * nc) throw std::invalid_argument("demand matrix size mismatch");
  const std::vector<int> serving = serving_leos(cells, snap, mask_deg);
  const std::size_t nl = snap.num_leos();
  std::vector<double> dense(nl * nl, 0.0);
  MappingResult res;
  for (std::size_t i = 0; i < nc; ++i) {
    for (std::size_t j = 0; j < nc; ++j) {
      const double d = demand[i * nc + j];
      if (i == j || d == 0.0) continue;
      res.total_demand += d;
      if (serving[i] < 0 || serving[j] < 0) {
        res.unserved_demand += d;
      } else if (serving[i] == serving[j]) {
        res.local_demand += d;
      } else {
        dense[static_cast<std::size_t>(serving[i]) * nl + static_cast<std::size_t>(serving[j])] += d;
      }
    }
  }
  res.matrix.num_leos = nl;
  for (std::size_t a = 0; a < nl; ++a) {
    for (std::size_t b = 0; b < nl; ++b) {
      const double r = dense[a * nl + b];
      if (r > 0.0) res.matrix.entries.push_back({static_cast<NodeId>(a), static_cast<NodeId>(b), r});
    }
  }
  return res;
}

TrafficModel::TrafficModel(std::vector<GroundCell> cells, double g, double diurnal_floor, double exponent)
    : cells_(std::move(cells)), g_(g), floor_(diurnal_floor) {
  if (!(diurnal_floor >= 0.0 && diurnal_floor <= 1.0)) throw std::invalid_argument("diurnal floor must be in [0, 1]");
  const std::size_t n = cells_.size();
  base_.assign(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i != j) base_[i * n + j] = gravity_demand(cells_[i], cells_[j], 1.0, exponent);
    }
  }
}

std::vector<double> TrafficModel::cell_demand(double utc_s) const {
  const std::size_t n = cells_.size();
  std::vector<double> f(n);
  for (std::size_t i = 0; i < n; ++i) f[i] = diurnal_factor(cells_[i], utc_s, floor_);
  std::vector<double> d(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) d[i * n + j] = g_ * base_[i * n + j] * f[i] * f[j];
  }
  return d;
}

MappingResult TrafficModel::synthesize(const NetworkSnapshot& snap, int slot_index, double utc_s) const {
  MappingResult r = map_to_satellites(cells_, cell_demand(utc_s), snap);
  r.matrix.slot_index = slot_index;
  return r;
}

}  // namespace satdomain
