#include "satdomain/visibility.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "satdomain/kernels/kernels.hpp"

namespace satdomain {

double elevation_angle(const Vec3& observer_pos, const Vec3& target_pos) {
  const double ro = norm(observer_pos);
  const double rt = norm(target_pos);
  if (ro == 0.0 || rt == 0.0) throw std::invalid_argument("elevation_angle: zero position vector");
  const double alpha = angle_between(observer_pos, target_pos);
  const double rho = ro / rt;
  return rad2deg(std::atan2(std::cos(alpha) - rho, std::sin(alpha)));
}

std::string_view meo_fov_model_name(MeoFovModel m) {
  return m == MeoFovModel::ScanAngle ? "scan_angle" : "min_elevation";
}

MeoFovModel parse_meo_fov_model(std::string_view s) {
  if (s == "scan_angle") return MeoFovModel::ScanAngle;
  if (s == "min_elevation") return MeoFovModel::MinElevation;
  throw std::invalid_argument("unknown MEO FOV model '" + std::string(s) + "'");
}

bool has_line_of_sight(const Vec3& a, const Vec3& b, double margin_km) {
  const double r = constants::kEarthRadiusKm + margin_km;
  const Vec3 d = b - a;
  const double dd = dot(d, d);
  if (dd == 0.0) return norm(a) >= r;
  const double t = std::clamp(-dot(a, d) / dd, 0.0, 1.0);
  return norm(a + d * t) >= r;
}

namespace {

// Horizon dip bound: sin of the most negative elevation at radius `r` that still clears radius R + margin.
double clearance_sine(double r, double margin_km) {
  const double q = (constants::kEarthRadiusKm + margin_km) / r;
  return q >= 1.0 ? 0.0 : -std::sqrt(1.0 - q * q);
}

}  // namespace

bool in_fov(const Vec3& leo, const Vec3& controller, Role controller_role, const FovConfig& cfg) {
  if (controller_role == Role::Gs) return elevation_angle(controller, leo) >= cfg.gs_mask_deg;
  if (cfg.meo_model == MeoFovModel::MinElevation) return elevation_angle(leo, controller) >= cfg.meo_threshold_deg;
  const double off_nadir = 90.0 + elevation_angle(controller, leo);
  return off_nadir <= cfg.meo_threshold_deg && has_line_of_sight(leo, controller, cfg.earth_margin_km);
}

bool Coverage::covers(NodeId controller, NodeId leo) const {
  const auto& c = coverers[leo];
  return std::binary_search(c.begin(), c.end(), controller);
}

const FovDomain& Coverage::domain_of(NodeId controller) const {
  for (const auto& d : domains) {
    if (d.controller_id == controller) return d;
  }
  throw std::out_of_range("no FOV domain for controller " + std::to_string(controller));
}

bool Coverage::operator==(const Coverage& o) const { return coverers == o.coverers; }

Coverage compute_coverage(const NetworkSnapshot& snap, const FovConfig& cfg) {
  const std::size_t n = snap.num_leos();
  std::vector<double> xs(n), ys(n), zs(n), sin_a(n), sin_b(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Vec3& p = snap.position(snap.leo_ids[i]);
    xs[i] = p.x;
    ys[i] = p.y;
    zs[i] = p.z;
  }
  const kernels::PointsSoA leos{xs, ys, zs};
  const double gs_sine = std::sin(deg2rad(cfg.gs_mask_deg));
  const double meo_sine = std::sin(deg2rad(cfg.meo_threshold_deg));
  // Off-nadir <= theta at the MEO  <=>  elevation at the MEO <= theta - 90.
  const double scan_sine = -std::cos(deg2rad(cfg.meo_threshold_deg));

  Coverage cov;
  cov.coverers.resize(n);
  for (NodeId k : snap.controller_ids) {
    const Vec3& cp = snap.position(k);
    FovDomain dom{k, {}};
    if (snap.role(k) == Role::Gs) {
      kernels::elevation_sine_from(cp, leos, sin_a);
      for (std::size_t i = 0; i < n; ++i) {
        if (sin_a[i] >= gs_sine) dom.member_leo_ids.push_back(snap.leo_ids[i]);
      }
    } else if (cfg.meo_model == MeoFovModel::MinElevation) {
      kernels::elevation_sine_toward(cp, leos, sin_a);
      for (std::size_t i = 0; i < n; ++i) {
        if (sin_a[i] >= meo_sine) dom.member_leo_ids.push_back(snap.leo_ids[i]);
      }
    } else {
      kernels::elevation_sine_from(cp, leos, sin_a);
      kernels::elevation_sine_toward(cp, leos, sin_b);
      for (std::size_t i = 0; i < n; ++i) {
        const double r = std::sqrt(xs[i] * xs[i] + ys[i] * ys[i] + zs[i] * zs[i]);
        if (sin_a[i] <= scan_sine && sin_b[i] >= clearance_sine(r, cfg.earth_margin_km)) {
          dom.member_leo_ids.push_back(snap.leo_ids[i]);
        }
      }
    }
    for (NodeId leo : dom.member_leo_ids) cov.coverers[leo].push_back(k);
    cov.domains.push_back(std::move(dom));
  }
  for (auto& c : cov.coverers) std::sort(c.begin(), c.end());
  return cov;
}

namespace {

bool sorted_intersect(const std::vector<NodeId>& a, const std::vector<NodeId>& b) {
  auto i = a.begin();
  auto j = b.begin();
  while (i != a.end() && j != b.end()) {
    if (*i == *j) return true;
    if (*i < *j) {
      ++i;
    } else {
      ++j;
    }
  }
  return false;
}

struct Dsu {
  std::vector<std::size_t> parent;
  explicit Dsu(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  std::size_t find(std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
};

}  // namespace

std::vector<OverlapRegion> compute_overlap_regions(const Coverage& cov, const IslGraph& isl) {
  const std::size_t n = cov.coverers.size();
  Dsu dsu(n);
  auto multi = [&](NodeId i) { return cov.coverers[i].size() >= 2; };
  for (const auto& [a, b] : isl.edges) {
    if (a < n && b < n && multi(a) && multi(b) && sorted_intersect(cov.coverers[a], cov.coverers[b])) {
      dsu.unite(a, b);
    }
  }
  std::vector<OverlapRegion> regions;
  std::vector<long> region_of(n, -1);
  for (NodeId i = 0; i < n; ++i) {
    if (!multi(i)) continue;
    const std::size_t root = dsu.find(i);
    if (region_of[root] < 0) {
      region_of[root] = static_cast<long>(regions.size());
      regions.emplace_back();
    }
    auto& r = regions[static_cast<std::size_t>(region_of[root])];
    r.leo_ids.push_back(i);
    r.competing_controller_ids.insert(r.competing_controller_ids.end(), cov.coverers[i].begin(),
                                      cov.coverers[i].end());
  }
  for (auto& r : regions) {
    auto& c = r.competing_controller_ids;
    std::sort(c.begin(), c.end());
    c.erase(std::unique(c.begin(), c.end()), c.end());
  }
  return regions;
}

std::vector<TimeSlot> segment_time_slots(const Constellation& c, const FovConfig& cfg, double horizon,
                                         double step) {
  if (!(step > 0.0)) throw std::invalid_argument("time step must be > 0");
  if (horizon < step) throw std::invalid_argument("horizon must be at least one step");
  const auto samples = static_cast<long>(std::floor(horizon / step + 1e-9));
  std::vector<TimeSlot> slots;
  Coverage current;
  for (long s = 0; s < samples; ++s) {
    const double t = static_cast<double>(s) * step;
    NetworkSnapshot snap = c.snapshot(t);
    Coverage cov = compute_coverage(snap, cfg);
    if (slots.empty() || !(cov == current)) {
      if (!slots.empty()) slots.back().end = t;
      slots.push_back(TimeSlot{static_cast<int>(slots.size()), t, t, std::move(snap)});
      current = std::move(cov);
    }
  }
  slots.back().end = static_cast<double>(samples) * step;
  return slots;
}

}  // namespace satdomain
