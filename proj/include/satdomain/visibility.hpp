#pragma once

#include <span>
#include <string_view>
#include <vector>

#include "satdomain/constellation.hpp"

namespace satdomain {

/// Elevation in degrees of `target` above the local horizontal at `observer`.
/// Returns 90 when the two are radially aligned with target above observer.
double elevation_angle(const Vec3& observer_pos, const Vec3& target_pos);

/// How a MEO controller's field of view is tested.
///  ScanAngle:    off-nadir angle at the MEO <= threshold and the link clears the Earth.
///  MinElevation: elevation at the LEO toward the MEO >= threshold.
enum class MeoFovModel { ScanAngle, MinElevation };

std::string_view meo_fov_model_name(MeoFovModel m);
MeoFovModel parse_meo_fov_model(std::string_view s);

struct FovConfig {
  MeoFovModel meo_model = MeoFovModel::ScanAngle;
  double meo_threshold_deg = 40.0;
  double gs_mask_deg = 0.0;        // minimum elevation at the ground station
  double earth_margin_km = 0.0;    // grazing altitude a MEO-LEO link must clear
  bool operator==(const FovConfig&) const = default;
};

/// True when the segment a-b does not pass below radius R + margin.
bool has_line_of_sight(const Vec3& a, const Vec3& b, double margin_km = 0.0);

/// Pairwise FOV test for one LEO and one controller.
bool in_fov(const Vec3& leo, const Vec3& controller, Role controller_role, const FovConfig& cfg);

struct FovDomain {
  NodeId controller_id = 0;
  std::vector<NodeId> member_leo_ids;  // sorted
};

/// FOV membership at one instant, viewed both ways.
struct Coverage {
  std::vector<FovDomain> domains;              // aligned with snapshot.controller_ids
  std::vector<std::vector<NodeId>> coverers;   // per LEO id, sorted controller ids

  bool covers(NodeId controller, NodeId leo) const;
  const FovDomain& domain_of(NodeId controller) const;
  bool operator==(const Coverage& o) const;
};

Coverage compute_coverage(const NetworkSnapshot& snap, const FovConfig& cfg);

inline std::vector<FovDomain> compute_fov_domains(const NetworkSnapshot& snap, const FovConfig& cfg) {
  return compute_coverage(snap, cfg).domains;
}

struct OverlapRegion {
  std::vector<NodeId> leo_ids;                    // sorted
  std::vector<NodeId> competing_controller_ids;   // sorted, size >= 2
};

/// Multiply covered LEOs grouped by ISL adjacency between LEOs whose coverer sets intersect.
std::vector<OverlapRegion> compute_overlap_regions(const Coverage& cov, const IslGraph& isl);

struct TimeSlot {
  int index = 0;
  double start = 0.0;
  double end = 0.0;
  NetworkSnapshot snapshot;
  double duration() const { return end - start; }
};

/// Slots begin at the first sample whose FOV membership differs from the current slot's.
std::vector<TimeSlot> segment_time_slots(const Constellation& c, const FovConfig& cfg, double horizon,
                                         double step);

}  // namespace satdomain
