#include "satdomain/constellation.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <stdexcept>

namespace satdomain {

using constants::kEarthMu;
using constants::kEarthRadiusKm;
using constants::kEarthRotationRate;
using constants::kTwoPi;

double great_circle_km(double lat1_deg, double lon1_deg, double lat2_deg, double lon2_deg) {
  const double p1 = deg2rad(lat1_deg);
  const double p2 = deg2rad(lat2_deg);
  const double dp = p2 - p1;
  const double dl = deg2rad(lon2_deg - lon1_deg);
  const double a = std::sin(dp / 2) * std::sin(dp / 2) + std::cos(p1) * std::cos(p2) * std::sin(dl / 2) * std::sin(dl / 2);
  return 2.0 * kEarthRadiusKm * std::atan2(std::sqrt(a), std::sqrt(1.0 - a));
}

std::string_view role_name(Role role) {
  switch (role) {
    case Role::Leo: return "LEO";
    case Role::Meo: return "MEO";
    case Role::Gs: return "GS";
  }
  return "?";
}

void ShellSpec::validate() const {
  if (!(altitude_km > 0.0)) throw std::invalid_argument("shell '" + name + "': altitude must be > 0");
  if (inclination_deg < 0.0 || inclination_deg > 180.0) {
    throw std::invalid_argument("shell '" + name + "': inclination must be in [0, 180]");
  }
  if (num_planes < 1) throw std::invalid_argument("shell '" + name + "': num_planes must be >= 1");
  if (sats_per_plane < 1) throw std::invalid_argument("shell '" + name + "': sats_per_plane must be >= 1");
  if (phasing_offset && (*phasing_offset < 0.0 || *phasing_offset >= 1.0)) {
    throw std::invalid_argument("shell '" + name + "': phasing_offset must be in [0, 1)");
  }
  if (role == Role::Gs) throw std::invalid_argument("shell '" + name + "': role must be LEO or MEO");
}

std::vector<SatelliteNode> generate_shell(const ShellSpec& spec, NodeId first_id) {
  spec.validate();
  const double offset = spec.effective_phasing();
  std::vector<SatelliteNode> nodes;
  nodes.reserve(static_cast<std::size_t>(spec.total()));
  NodeId id = first_id;
  for (int p = 0; p < spec.num_planes; ++p) {
    const double raan = kTwoPi * p / spec.num_planes;
    for (int s = 0; s < spec.sats_per_plane; ++s) {
      const double phase = std::fmod(kTwoPi * (s + offset * p) / spec.sats_per_plane, kTwoPi);
      nodes.push_back(SatelliteNode{id++, spec.role, p, s, raan, phase, deg2rad(spec.inclination_deg),
                                    spec.orbital_radius_km()});
    }
  }
  return nodes;
}

double orbital_period(double radius_km) {
  if (!(radius_km > kEarthRadiusKm)) throw std::invalid_argument("orbital radius must exceed the Earth radius");
  return kTwoPi * std::sqrt(radius_km * radius_km * radius_km / kEarthMu);
}

OrbitState propagate(const SatelliteNode& node, double t) {
  const double r = node.orbital_radius;
  const double n = std::sqrt(kEarthMu / (r * r * r));
  const double u = node.phase0 + n * t;
  const double cu = std::cos(u), su = std::sin(u);
  const double ci = std::cos(node.inclination), si = std::sin(node.inclination);
  const double co = std::cos(node.raan), so = std::sin(node.raan);

  const Vec3 eci{r * (co * cu - so * ci * su), r * (so * cu + co * ci * su), r * si * su};
  const double v = n * r;
  const Vec3 veci{v * (-co * su - so * ci * cu), v * (-so * su + co * ci * cu), v * si * cu};

  const double theta = kEarthRotationRate * t;
  const double ct = std::cos(theta), st = std::sin(theta);
  auto to_ecef = [&](const Vec3& a) { return Vec3{ct * a.x + st * a.y, -st * a.x + ct * a.y, a.z}; };
  return OrbitState{to_ecef(eci), to_ecef(veci), eci};
}

Vec3 geodetic_to_ecef(double lat_deg, double lon_deg) {
  const double lat = deg2rad(lat_deg), lon = deg2rad(lon_deg);
  return {kEarthRadiusKm * std::cos(lat) * std::cos(lon), kEarthRadiusKm * std::cos(lat) * std::sin(lon),
          kEarthRadiusKm * std::sin(lat)};
}

std::pair<double, double> ecef_to_latlon(const Vec3& p) {
  return {rad2deg(std::atan2(p.z, std::hypot(p.x, p.y))), rad2deg(std::atan2(p.y, p.x))};
}

bool IslGraph::connected() const {
  if (adjacency.empty()) return true;
  std::vector<char> seen(adjacency.size(), 0);
  std::queue<NodeId> q;
  q.push(0);
  seen[0] = 1;
  std::size_t count = 1;
  while (!q.empty()) {
    const NodeId u = q.front();
    q.pop();
    for (NodeId v : adjacency[u]) {
      if (!seen[v]) {
        seen[v] = 1;
        ++count;
        q.push(v);
      }
    }
  }
  return count == adjacency.size();
}

bool IslGraph::has_edge(NodeId a, NodeId b) const {
  const auto& adj = adjacency[a];
  return std::binary_search(adj.begin(), adj.end(), b);
}

IslGraph build_isl_topology(std::span<const SatelliteNode> shell, int num_planes, int sats_per_plane,
                            std::size_t total_leos) {
  IslGraph g;
  g.adjacency.resize(total_leos);
  if (shell.empty()) return g;
  const NodeId base = shell.front().id;
  auto id_of = [&](int p, int s) { return static_cast<NodeId>(base + p * sats_per_plane + s); };
  std::vector<std::pair<NodeId, NodeId>> edges;
  for (int p = 0; p < num_planes; ++p) {
    for (int s = 0; s < sats_per_plane; ++s) {
      const NodeId a = id_of(p, s);
      if (sats_per_plane >= 2) edges.emplace_back(a, id_of(p, (s + 1) % sats_per_plane));
      if (num_planes >= 2) edges.emplace_back(a, id_of((p + 1) % num_planes, s));
    }
  }
  for (auto& [a, b] : edges) {
    if (a > b) std::swap(a, b);
  }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  for (const auto& [a, b] : edges) {
    g.adjacency[a].push_back(b);
    g.adjacency[b].push_back(a);
  }
  for (auto& adj : g.adjacency) std::sort(adj.begin(), adj.end());
  g.edges = std::move(edges);
  return g;
}

Constellation::Constellation(std::vector<ShellSpec> leo_shells, std::vector<ShellSpec> meo_shells,
                             std::vector<std::pair<std::string, std::pair<double, double>>> ground_stations)
    : leo_shells_(std::move(leo_shells)), meo_shells_(std::move(meo_shells)) {
  if (leo_shells_.empty()) throw std::invalid_argument("scenario needs at least one LEO shell");
  NodeId next = 0;
  std::vector<std::pair<std::size_t, std::size_t>> shell_ranges;
  for (auto& spec : leo_shells_) {
    spec.role = Role::Leo;
    auto nodes = generate_shell(spec, next);
    shell_ranges.emplace_back(leos_.size(), nodes.size());
    next += static_cast<NodeId>(nodes.size());
    leos_.insert(leos_.end(), nodes.begin(), nodes.end());
  }
  for (auto& spec : meo_shells_) {
    spec.role = Role::Meo;
    auto nodes = generate_shell(spec, next);
    next += static_cast<NodeId>(nodes.size());
    meos_.insert(meos_.end(), nodes.begin(), nodes.end());
  }
  for (auto& [name, ll] : ground_stations) {
    if (std::abs(ll.first) > 90.0 || std::abs(ll.second) > 180.0) {
      throw std::invalid_argument("ground station '" + name + "' has invalid coordinates");
    }
    gs_.push_back(GroundStationNode{next++, name, ll.first, ll.second});
  }

  IslGraph merged;
  merged.adjacency.resize(leos_.size());
  for (std::size_t s = 0; s < leo_shells_.size(); ++s) {
    const auto [start, count] = shell_ranges[s];
    IslGraph g = build_isl_topology(std::span<const SatelliteNode>(leos_).subspan(start, count),
                                    leo_shells_[s].num_planes, leo_shells_[s].sats_per_plane, leos_.size());
    merged.edges.insert(merged.edges.end(), g.edges.begin(), g.edges.end());
    for (std::size_t i = 0; i < g.adjacency.size(); ++i) {
      auto& dst = merged.adjacency[i];
      dst.insert(dst.end(), g.adjacency[i].begin(), g.adjacency[i].end());
    }
  }
  std::sort(merged.edges.begin(), merged.edges.end());
  for (auto& adj : merged.adjacency) std::sort(adj.begin(), adj.end());
  isl_ = std::make_shared<const IslGraph>(std::move(merged));
}

NetworkSnapshot Constellation::snapshot(double t) const {
  NetworkSnapshot snap;
  snap.time = t;
  snap.isl = isl_;
  const std::size_t n = num_nodes();
  snap.positions.resize(n);
  snap.velocities.resize(n);
  snap.roles.resize(n);
  for (const auto& s : leos_) {
    const OrbitState st = propagate(s, t);
    snap.positions[s.id] = st.position;
    snap.velocities[s.id] = st.velocity;
    snap.roles[s.id] = Role::Leo;
    snap.leo_ids.push_back(s.id);
  }
  for (const auto& s : meos_) {
    const OrbitState st = propagate(s, t);
    snap.positions[s.id] = st.position;
    snap.velocities[s.id] = st.velocity;
    snap.roles[s.id] = Role::Meo;
    snap.controller_ids.push_back(s.id);
  }
  for (const auto& g : gs_) {
    snap.positions[g.id] = geodetic_to_ecef(g.latitude_deg, g.longitude_deg);
    snap.velocities[g.id] = Vec3{};
    snap.roles[g.id] = Role::Gs;
    snap.controller_ids.push_back(g.id);
  }
  return snap;
}

std::vector<NodeId> Constellation::controller_ids() const {
  std::vector<NodeId> ids;
  for (const auto& s : meos_) ids.push_back(s.id);
  for (const auto& g : gs_) ids.push_back(g.id);
  return ids;
}

Role Constellation::role(NodeId id) const {
  if (id < leos_.size()) return Role::Leo;
  if (id < leos_.size() + meos_.size()) return Role::Meo;
  return Role::Gs;
}

std::string Constellation::node_name(NodeId id) const {
  switch (role(id)) {
    case Role::Leo: return "LEO-" + std::to_string(id);
    case Role::Meo: return "MEO-" + std::to_string(id);
    case Role::Gs: return gs_[id - leos_.size() - meos_.size()].name;
  }
  return {};
}

double Constellation::leo_period() const {
  double r = 0.0;
  for (const auto& s : leo_shells_) r = std::max(r, s.orbital_radius_km());
  return orbital_period(r);
}

namespace presets {

std::vector<ShellSpec> meo_shells() {
  return {
      ShellSpec{"meo-3000", 3000.0, 63.4, 6, 6, std::nullopt, Role::Meo, 0.1},
      ShellSpec{"meo-6000", 6000.0, 55.0, 4, 8, std::nullopt, Role::Meo, 0.01},
      ShellSpec{"meo-8070", 8070.0, 53.1, 5, 4, std::nullopt, Role::Meo, 0.001},
      ShellSpec{"meo-10354", 10354.0, 39.4, 2, 3, std::nullopt, Role::Meo, 0.0001},
  };
}

std::vector<double> meo_listed_periods_min() { return {150.46, 228.23, 287.93, 358.76}; }

std::vector<ShellSpec> leo_shells() {
  return {
      ShellSpec{"iridium", 780.0, 86.4, 6, 11, std::nullopt, Role::Leo, 0.0},
      ShellSpec{"telesat", 1015.0, 98.98, 27, 13, std::nullopt, Role::Leo, 0.0},
      ShellSpec{"oneweb", 1200.0, 87.9, 18, 40, std::nullopt, Role::Leo, 0.0},
      ShellSpec{"starlink", 550.0, 53.0, 72, 22, std::nullopt, Role::Leo, 0.0},
      ShellSpec{"cscn", 365.0, 40.0, 33, 56, std::nullopt, Role::Leo, 0.0},
  };
}

ShellSpec shell(const std::string& name) {
  for (auto& s : leo_shells()) {
    if (s.name == name) return s;
  }
  for (auto& s : meo_shells()) {
    if (s.name == name) return s;
  }
  throw std::out_of_range("unknown shell preset '" + name + "'");
}

std::vector<City> nine_cities() {
  return {
      {"New York", 40.7128, -74.0060}, {"London", 51.5074, -0.1278},   {"Tokyo", 35.6762, 139.6503},
      {"Sydney", -33.8688, 151.2093},  {"Sao Paulo", -23.5505, -46.6333}, {"Cairo", 30.0444, 31.2357},
      {"Mumbai", 19.0760, 72.8777},    {"Beijing", 39.9042, 116.4074}, {"Lagos", 6.5244, 3.3792},
  };
}

}  // namespace presets

}  // namespace satdomain
