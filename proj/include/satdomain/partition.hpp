#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "satdomain/km.hpp"
#include "satdomain/overhead.hpp"
#include "satdomain/spectral.hpp"

namespace satdomain {

/// Everything a partitioner needs about one slot.
struct SlotContext {
  int slot_index = 0;
  double start = 0.0;
  double duration = 0.0;
  NetworkSnapshot snapshot;
  Coverage coverage;
  NetworkSnapshot lookahead;       // snapshot at start + lookahead
  Coverage lookahead_coverage;
};

SlotContext make_slot_context(const Constellation& c, const FovConfig& fov, int index, double start, double duration,
                              double lookahead_s);

enum class Strategy { Eunomia, Odc, Greedy };

std::string_view strategy_name(Strategy s);
Strategy parse_strategy(std::string_view s);

struct PartitionParams {
  OverheadParams overhead;
  SpectralOptions spectral;
  bool inherit = true;
  bool fine_tune = true;
  double greedy_cap_factor = 1.5;
  NodeId odc_controller = kUnassigned;  // default: first ground station
};

struct Step1Result {
  DomainAssignment partial;
  std::vector<NodeId> uncoverable;
};

/// Assigns every singly covered LEO to its only controller.
Step1Result step1_exclusive_assign(const Coverage& cov, int slot_index);

/// Cluster-to-controller cost: centroid distance, infinite when a member is outside the controller's FOV.
std::vector<double> cluster_cost_matrix(const std::vector<std::vector<NodeId>>& clusters,
                                        const std::vector<NodeId>& controllers, const NetworkSnapshot& snap,
                                        const Coverage& cov);

struct FineTuneStats {
  std::size_t moves = 0;
  std::size_t northbound = 0;
  std::size_t southbound = 0;
  std::size_t boundary = 0;
};

/// Moves boundary LEOs that will leave their controller's FOV within the lookahead to a
/// neighboring domain whose controller covers them now and then. A move is kept only if
/// the predicted handover count does not rise and the old domain stays connected.
DomainAssignment fine_tune_boundaries(const DomainAssignment& a, const SlotContext& ctx, FineTuneStats* stats = nullptr);

/// LEOs whose controller no longer covers them at the lookahead instant.
std::size_t predicted_handovers(const DomainAssignment& a, const SlotContext& ctx);

struct PartitionDiagnostics {
  std::size_t regions = 0;
  std::size_t inherited_regions = 0;
  std::size_t clustered_regions = 0;
  std::size_t largest_region = 0;
  int spectral_retries = 0;
  std::size_t unresolved_conflicts = 0;
  std::size_t fallback_leos = 0;
  FineTuneStats fine_tune;
  std::vector<NodeId> uncoverable;
};

/// Carried from one slot to the next for inheritance.
struct PartitionState {
  DomainAssignment assignment;
  std::vector<OverlapRegion> regions;
};

struct PartitionOutcome {
  DomainAssignment assignment;
  std::vector<OverlapRegion> regions;
  PartitionDiagnostics diagnostics;

  PartitionState state() const { return {assignment, regions}; }
};

/// Exclusive assignment, per-region spectral clustering with KM matching, then fine-tuning.
/// Throws std::runtime_error when a LEO is covered by no controller.
PartitionOutcome partition_slot(const SlotContext& ctx, const TrafficMatrix& traffic_prev, const PartitionState* prev,
                                const PartitionParams& params, std::uint64_t seed);

/// Single central ground station manages every LEO through ground relays.
DomainAssignment odc_partition(const SlotContext& ctx, NodeId central);

/// Nearest visible controller with a per-controller LEO cap of ceil(factor |V| / |K|).
DomainAssignment greedy_partition(const SlotContext& ctx, double cap_factor = 1.5);

struct BruteForceResult {
  DomainAssignment assignment;
  double objective = 0.0;
  std::size_t evaluated = 0;
};

/// Exhaustive search over all FOV-valid assignments; at most 10 LEOs.
BruteForceResult brute_force_partition(const SlotContext& ctx, const TrafficMatrix& traffic, const OverheadParams& p,
                                       const DomainAssignment* previous = nullptr);

/// Runs one strategy for a slot.
PartitionOutcome run_strategy(Strategy s, const SlotContext& ctx, const TrafficMatrix& traffic_prev,
                              const PartitionState* prev, const PartitionParams& params, std::uint64_t seed);

}  // namespace satdomain
