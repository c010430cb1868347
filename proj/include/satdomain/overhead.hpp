#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <string_view>
#include <vector>

#include "satdomain/assignment.hpp"
#include "satdomain/traffic.hpp"

namespace satdomain {

enum class LinkClass { Isl, GsLeo, MeoLeo, ControllerController };

struct LinkBandwidths {
  double isl = 1e9;          // bits/s
  double gs_leo = 1e9;
  double meo_leo = 5e8;
  double controller = 1e10;

  double of(LinkClass c) const;
  bool operator==(const LinkBandwidths&) const = default;
};

/// Route-computation cost as a function of domain size.
enum class Complexity { Quadratic, NLogN, Cubic };

std::string_view complexity_name(Complexity c);
Complexity parse_complexity(std::string_view s);
double complexity_ops(Complexity c, double n);

struct MigrationParams {
  double flow_entry_bytes = 36.0;
  double state_bandwidth = 1e9;      // bits/s
  double ho_msg_bytes = 16.0;
  double per_sat_processing_s = 1e-4;
  double mean_flow_lifetime_s = 10.0;
  bool operator==(const MigrationParams&) const = default;
};

struct OverheadParams {
  double m_fl_bytes = 36.0;
  double m_sync_bytes = 24.0;
  double f_sync_hz = 1.0 / 15.0;  // one link-state round per 15 s routing update
  LinkBandwidths bandwidth;
  double capacity_unit = 1.0;   // operations/s per capability unit
  double gs_capacity = 1e5;     // capability units
  double meo_capacity = 1e2;
  std::map<NodeId, double> capacity_override;  // operations/s
  double tradeoff_lambda = 1.0;
  Complexity cpt_complexity = Complexity::Quadratic;
  MigrationParams migration;
  // Pairwise edge weighting.
  double alpha = 0.5;
  double beta = 0.3;
  double mig_unit_s = 1.0;

  double capacity(NodeId k, Role role) const;
  void validate() const;
  bool operator==(const OverheadParams&) const = default;
};

/// One directed hop of a control path.
struct Hop {
  NodeId from = 0;
  NodeId to = 0;
  LinkClass link = LinkClass::Isl;
  double distance_km = 0.0;
};

/// Switch-to-controller path. `space_hops` counts ISL hops plus the access link; a
/// terrestrial backhaul between a relay and the central station is charged but not counted.
struct ControlPath {
  std::vector<Hop> hops;
  int space_hops = 0;

  /// Sum over hops of bytes*8/B + d/c.
  double cost(double bytes, const LinkBandwidths& bw) const;
  double propagation() const;
  double bottleneck(const LinkBandwidths& bw) const;
};

struct ControlPlaneOptions {
  bool relay_access = false;  // reach the controller through any visible ground station
};

/// Control paths for every LEO under one assignment.
class ControlPlane {
 public:
  /// Throws std::runtime_error("disconnected domain ...") when a LEO has no path.
  ControlPlane(const NetworkSnapshot& snap, const DomainAssignment& a, const Coverage& cov,
               ControlPlaneOptions opt = {});

  const ControlPath& path(NodeId leo) const { return paths_[leo]; }
  int hops(NodeId leo) const { return paths_[leo].space_hops; }
  std::size_t size() const { return paths_.size(); }

 private:
  std::vector<ControlPath> paths_;
};

int control_hops(NodeId leo, const DomainAssignment& a, const NetworkSnapshot& snap, const Coverage& cov,
                 ControlPlaneOptions opt = {});

Role link_role(const NetworkSnapshot& snap, NodeId k);
LinkClass access_class(Role controller_role);

double flow_overhead(const DomainAssignment& a, const TrafficMatrix& traffic, const ControlPlane& cp,
                     const OverheadParams& p);

struct SyncOverhead {
  double intra = 0.0;
  double inter = 0.0;
};
SyncOverhead sync_overhead(const DomainAssignment& a, const NetworkSnapshot& snap, const ControlPlane& cp,
                           const OverheadParams& p);

struct MigrationOverhead {
  double w_mig = 0.0;
  std::size_t migrated = 0;
};
/// W_MIG between consecutive assignments; `prev` empty means the first slot.
MigrationOverhead migration_overhead(const DomainAssignment* prev, const DomainAssignment& cur,
                                     const TrafficMatrix& traffic, const NetworkSnapshot& snap,
                                     const OverheadParams& p, double slot_duration);

struct CptOverhead {
  double intra = 0.0;
  double inter = 0.0;
};
CptOverhead path_compute_overhead(const DomainAssignment& a, const TrafficMatrix& traffic, const NetworkSnapshot& snap,
                                  const OverheadParams& p);

struct DomainBreakdown {
  NodeId controller = 0;
  std::size_t size = 0;
  std::size_t isl_edges = 0;
  double flow = 0.0;
  double sync_in = 0.0;
  double cpt_intra = 0.0;
  double cpt_inter = 0.0;
  std::size_t migrated_in = 0;
};

struct OverheadReport {
  int slot_index = 0;
  double w_flow = 0.0;
  double w_sync_in = 0.0;
  double w_sync_out = 0.0;
  double w_mig = 0.0;
  double w_cpt_intra = 0.0;
  double w_cpt_inter = 0.0;
  double w_ctl = 0.0;
  double objective = 0.0;
  std::optional<double> eta_control;
  double drop_rate = 0.0;
  std::size_t migrated = 0;
  int max_hops = 0;
  double mean_hops = 0.0;
  std::vector<DomainBreakdown> domains;
};

/// W_FLOW / W_CTL, absent when W_CTL is zero.
std::optional<double> control_efficiency(const OverheadReport& r);

struct EvaluationInput {
  const NetworkSnapshot* snapshot = nullptr;
  const Coverage* coverage = nullptr;
  const TrafficMatrix* traffic = nullptr;
  const DomainAssignment* previous = nullptr;
  double slot_duration = 1.0;
  bool waive_fov = false;  // centralized baseline
};

struct Evaluation {
  ConstraintReport constraints;
  std::optional<OverheadReport> report;  // set only when constraints hold
};

/// All overhead terms plus the objective; returns a violation report instead when invalid.
Evaluation evaluate(const DomainAssignment& a, const EvaluationInput& in, const OverheadParams& p);

void write_report_json(std::ostream& os, const OverheadReport& r);
void write_report_csv_rows(std::ostream& os, const OverheadReport& r);

}  // namespace satdomain
