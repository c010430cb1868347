#pragma once

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "satdomain/geometry.hpp"

namespace satdomain {

enum class Role { Leo, Meo, Gs };

std::string_view role_name(Role role);

/// Walker-style shell. Eccentricity is carried for the record only; orbits are circular.
struct ShellSpec {
  std::string name;
  double altitude_km = 0.0;
  double inclination_deg = 0.0;
  int num_planes = 1;
  int sats_per_plane = 1;
  std::optional<double> phasing_offset;  // fraction of in-plane spacing; default 1/num_planes
  Role role = Role::Leo;
  double eccentricity = 0.0;

  double orbital_radius_km() const { return constants::kEarthRadiusKm + altitude_km; }
  double effective_phasing() const { return phasing_offset.value_or(1.0 / num_planes); }
  int total() const { return num_planes * sats_per_plane; }
  /// Throws std::invalid_argument when an invariant is broken.
  void validate() const;
  bool operator==(const ShellSpec&) const = default;
};

struct SatelliteNode {
  NodeId id = 0;
  Role role = Role::Leo;
  int plane_index = 0;
  int slot_index = 0;
  double raan = 0.0;         // rad
  double phase0 = 0.0;       // rad, argument of latitude at t = 0
  double inclination = 0.0;  // rad
  double orbital_radius = 0.0;  // km
};

struct GroundStationNode {
  NodeId id = 0;
  std::string name;
  double latitude_deg = 0.0;
  double longitude_deg = 0.0;
};

struct OrbitState {
  Vec3 position;           // ECEF, km
  Vec3 velocity;           // inertial velocity expressed in ECEF axes, km/s
  Vec3 inertial_position;  // ECI, km
};

/// Nodes for one shell, ids assigned consecutively from `first_id`.
std::vector<SatelliteNode> generate_shell(const ShellSpec& spec, NodeId first_id = 0);

/// Circular two-body period in seconds.
double orbital_period(double radius_km);

OrbitState propagate(const SatelliteNode& node, double t);

/// Spherical-Earth ECEF position of a surface point.
Vec3 geodetic_to_ecef(double lat_deg, double lon_deg);

/// Latitude/longitude (degrees) of an ECEF vector.
std::pair<double, double> ecef_to_latlon(const Vec3& p);

/// Undirected LEO inter-satellite links with adjacency lists indexed by LEO id.
struct IslGraph {
  std::vector<std::pair<NodeId, NodeId>> edges;  // (a < b), sorted
  std::vector<std::vector<NodeId>> adjacency;    // sorted neighbor ids

  std::size_t num_nodes() const { return adjacency.size(); }
  bool connected() const;
  bool has_edge(NodeId a, NodeId b) const;
};

/// +Grid links: slot +/-1 within a plane and same slot in planes +/-1, all modular.
IslGraph build_isl_topology(std::span<const SatelliteNode> shell, int num_planes, int sats_per_plane,
                            std::size_t total_leos);

/// Positions of every node at one instant. Node ids are dense:
/// LEOs first, then MEO controllers, then ground stations.
struct NetworkSnapshot {
  double time = 0.0;
  std::vector<Vec3> positions;
  std::vector<Vec3> velocities;
  std::shared_ptr<const IslGraph> isl;
  std::vector<NodeId> leo_ids;
  std::vector<NodeId> controller_ids;
  std::vector<Role> roles;

  const Vec3& position(NodeId id) const { return positions[id]; }
  const Vec3& velocity(NodeId id) const { return velocities[id]; }
  Role role(NodeId id) const { return roles[id]; }
  std::size_t num_leos() const { return leo_ids.size(); }
  std::size_t num_nodes() const { return positions.size(); }
};

/// LEO shells, MEO shells and ground stations of one scenario.
class Constellation {
 public:
  Constellation(std::vector<ShellSpec> leo_shells, std::vector<ShellSpec> meo_shells,
                std::vector<std::pair<std::string, std::pair<double, double>>> ground_stations);

  NetworkSnapshot snapshot(double t) const;

  std::span<const SatelliteNode> leos() const { return leos_; }
  std::span<const SatelliteNode> meos() const { return meos_; }
  std::span<const GroundStationNode> ground_stations() const { return gs_; }
  const IslGraph& isl() const { return *isl_; }
  std::shared_ptr<const IslGraph> isl_ptr() const { return isl_; }
  std::span<const ShellSpec> leo_shells() const { return leo_shells_; }
  std::span<const ShellSpec> meo_shells() const { return meo_shells_; }

  std::size_t num_leos() const { return leos_.size(); }
  std::size_t num_nodes() const { return leos_.size() + meos_.size() + gs_.size(); }
  std::vector<NodeId> controller_ids() const;
  Role role(NodeId id) const;
  std::string node_name(NodeId id) const;
  /// Period of the slowest LEO shell.
  double leo_period() const;

 private:
  std::vector<ShellSpec> leo_shells_;
  std::vector<ShellSpec> meo_shells_;
  std::vector<SatelliteNode> leos_;
  std::vector<SatelliteNode> meos_;
  std::vector<GroundStationNode> gs_;
  std::shared_ptr<const IslGraph> isl_;
};

namespace presets {

/// MEO shells (altitude, inclination, eccentricity, sats, planes).
std::vector<ShellSpec> meo_shells();
/// LEO shells (Iridium, Telesat, OneWeb, Starlink, CSCN).
std::vector<ShellSpec> leo_shells();
/// Listed MEO periods in minutes, aligned with meo_shells().
std::vector<double> meo_listed_periods_min();
/// Looks up a preset by name across both tables; throws std::out_of_range.
ShellSpec shell(const std::string& name);

struct City {
  std::string name;
  double lat;
  double lon;
};
std::vector<City> nine_cities();

}  // namespace presets

}  // namespace satdomain
