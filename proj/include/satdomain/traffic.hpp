#pragma once

#include <functional>
#include <iosfwd>
#include <vector>

#include "satdomain/constellation.hpp"

namespace satdomain {

inline constexpr int kGridLonCells = 36;
inline constexpr int kGridLatCells = 18;
inline constexpr int kGridCells = kGridLonCells * kGridLatCells;
inline constexpr double kCellSizeDeg = 10.0;

struct GroundCell {
  int index = 0;
  double lat_lo = 0.0, lat_hi = 0.0;
  double lon_lo = 0.0, lon_hi = 0.0;
  double center_lat = 0.0, center_lon = 0.0;
  double density_weight = 0.0;

  double solid_angle() const;
};

using DensityFn = std::function<double(double lat_deg, double lon_deg)>;

/// Gaussian bumps over a uniform background, distances measured along the surface.
struct DensityField {
  struct Bump {
    double lat = 0.0;
    double lon = 0.0;
    double amplitude = 1.0;
    double sigma_km = 800.0;
  };
  double background = 0.05;
  std::vector<Bump> bumps;

  double operator()(double lat_deg, double lon_deg) const;
  /// One unit bump per listed city.
  static DensityField nine_cities(double sigma_km = 800.0, double background = 0.05);
};

/// 36 x 18 equal-angle cells; weight = density(center) * cos(center latitude).
/// Cell index = lat_row * 36 + lon_col, rows from the south pole, columns from -180.
std::vector<GroundCell> build_grid(const DensityFn& density);

/// G * w_i * w_j / d^exponent, d the great-circle distance between centers in km.
double gravity_demand(const GroundCell& a, const GroundCell& b, double g, double exponent = 2.0);

/// Daylight weighting peaking at 14:00 local solar time, trough `floor` at 02:00.
double diurnal_factor(double lon_deg, double utc_s, double floor = 0.2);
inline double diurnal_factor(const GroundCell& c, double utc_s, double floor = 0.2) {
  return diurnal_factor(c.center_lon, utc_s, floor);
}

struct FlowRate {
  NodeId src = 0;
  NodeId dst = 0;
  double rate = 0.0;  // new flows per second
  bool operator==(const FlowRate&) const = default;
};

struct TrafficMatrix {
  int slot_index = 0;
  std::size_t num_leos = 0;
  std::vector<FlowRate> entries;  // sorted by (src, dst), strictly positive rates, no self pairs

  double rate(NodeId src, NodeId dst) const;
  double total() const;
  /// Per-LEO sum of outgoing rates.
  std::vector<double> outgoing() const;
  /// Per-LEO sum of incoming plus outgoing rates.
  std::vector<double> incident() const;
  bool operator==(const TrafficMatrix&) const = default;
};

/// Multiplies every rate by gamma; gamma must lie in [0, 1].
TrafficMatrix scale(const TrafficMatrix& m, double gamma);

void write_traffic_csv(std::ostream& os, const TrafficMatrix& m, bool header = true);

/// Maximum-elevation LEO seen from each cell center, -1 when none clears `mask_deg`.
/// Ties go to the lowest LEO id.
std::vector<int> serving_leos(const std::vector<GroundCell>& cells, const NetworkSnapshot& snap,
                              double mask_deg = 0.0);

struct MappingResult {
  TrafficMatrix matrix;
  double total_demand = 0.0;
  double local_demand = 0.0;      // both cells served by the same LEO
  double unserved_demand = 0.0;   // at least one cell without a visible LEO
};

/// Folds a dense cell-pair demand (row-major, cells x cells) onto serving LEO pairs.
MappingResult map_to_satellites(const std::vector<GroundCell>& cells, const std::vector<double>& demand,
                                const NetworkSnapshot& snap, double mask_deg = 0.0);

/// Gravity demand between all cell pairs with diurnal weighting at synthesis time.
class TrafficModel {
 public:
  TrafficModel(std::vector<GroundCell> cells, double g, double diurnal_floor = 0.2, double exponent = 2.0);

  const std::vector<GroundCell>& cells() const { return cells_; }
  double g() const { return g_; }
  void set_g(double g) { g_ = g; }

  /// Dense cell-pair demand at `utc_s`: G * base_ij * diurnal_i * diurnal_j.
  std::vector<double> cell_demand(double utc_s) const;
  MappingResult synthesize(const NetworkSnapshot& snap, int slot_index, double utc_s) const;

 private:
  std::vector<GroundCell> cells_;
  std::vector<double> base_;  // w_i w_j / d^exponent, G excluded
  double g_;
  double floor_;
};

}  // namespace satdomain
