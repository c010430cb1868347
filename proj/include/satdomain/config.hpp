#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "satdomain/constellation.hpp"
#include "satdomain/overhead.hpp"
#include "satdomain/partition.hpp"
#include "satdomain/visibility.hpp"

namespace satdomain {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct GroundStationSpec {
  std::string name;
  double lat = 0.0;
  double lon = 0.0;
  bool operator==(const GroundStationSpec&) const = default;
};

struct TrafficConfig {
  double background = 0.05;
  double sigma_km = 800.0;
  std::optional<double> gravity_g;   // unset: calibrated from target_utilization
  double target_utilization = 1.25;  // centralized station load at gamma = 1
  double diurnal_floor = 0.2;
  double exponent = 2.0;
  double utc_offset_s = 0.0;
  bool operator==(const TrafficConfig&) const = default;
};

struct ScenarioConfig {
  std::string name = "scenario";
  std::vector<ShellSpec> leo_shells;
  std::vector<ShellSpec> meo_shells;
  std::vector<GroundStationSpec> ground_stations;
  FovConfig fov;
  std::optional<double> horizon_s;  // unset: one period of the slowest LEO shell
  double step_s = 15.0;
  double lookahead_s = 30.0;
  TrafficConfig traffic;
  OverheadParams overhead;
  bool inherit = true;
  bool fine_tune = true;
  double greedy_cap_factor = 1.5;
  std::string odc_controller;  // ground-station name; empty: first station
  int max_retries = -1;
  std::size_t dense_limit = 512;
  int kmeans_restarts = 8;
  double queue_window_s = 1.0;
  std::vector<Strategy> strategies{Strategy::Eunomia, Strategy::Odc, Strategy::Greedy};
  std::vector<double> gammas{1.0};
  std::vector<std::uint64_t> seeds{1};
  int threads = 1;

  /// Throws ConfigError on semantic problems (ranges, empty lists).
  void validate() const;
  bool operator==(const ScenarioConfig&) const = default;
};

/// Parses YAML text; schema errors carry line numbers and unknown keys are rejected.
ScenarioConfig parse_config(const std::string& yaml_text, const std::string& source = "<config>");
ScenarioConfig load_config(const std::string& path);

/// Canonical YAML with every field explicit; parse(serialize(c)) == c.
std::string serialize_config(const ScenarioConfig& c);

/// FNV-1a of the canonical serialization, 16 hex digits. The thread count is excluded.
std::string config_hash(const ScenarioConfig& c);

/// Built-in scenario: Iridium, six MEOs at 10354 km, New York / London / Tokyo.
ScenarioConfig desk_config();

}  // namespace satdomain
