#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "satdomain/config.hpp"
#include "satdomain/emulator.hpp"
#include "satdomain/partition.hpp"
#include "satdomain/traffic.hpp"

namespace satdomain {

/// Inclusive-exclusive slot window; `end` unset means through the last slot.
struct SlotRange {
  int begin = 0;
  std::optional<int> end;
};

/// Parses "N" (first N slots) or "a:b" (slots a..b-1, either side may be empty).
SlotRange parse_slot_range(const std::string& text);

/// Constellation, slots and per-slot traffic for one config, shared by every run.
class Scenario {
 public:
  explicit Scenario(ScenarioConfig config);

  const ScenarioConfig& config() const { return config_; }
  const Constellation& constellation() const { return *constellation_; }
  double horizon() const { return horizon_; }
  std::size_t num_slots() const { return contexts_.size(); }
  const SlotContext& slot(std::size_t i) const { return contexts_[i]; }
  /// Unscaled traffic synthesized at the slot start.
  const TrafficMatrix& traffic(std::size_t i) const { return traffic_[i]; }
  double gravity_g() const { return gravity_g_; }
  NodeId odc_controller() const { return odc_controller_; }

  PartitionParams partition_params() const;
  EmulatorParams emulator_params(Strategy s, double gamma) const;

 private:
  ScenarioConfig config_;
  std::unique_ptr<Constellation> constellation_;
  double horizon_ = 0.0;
  std::vector<SlotContext> contexts_;
  std::vector<TrafficMatrix> traffic_;
  double gravity_g_ = 0.0;
  NodeId odc_controller_ = kUnassigned;
};

struct SlotRecord {
  int slot_index = 0;
  double start = 0.0;
  double duration = 0.0;
  DomainAssignment assignment;
  PartitionDiagnostics diagnostics;
  ConstraintReport constraints;
  std::optional<OverheadReport> report;
  std::optional<EmulationStats> stats;
  double partition_seconds = 0.0;  // wall clock, never written to deterministic outputs
};

struct RunKey {
  Strategy strategy = Strategy::Eunomia;
  double gamma = 1.0;
  std::uint64_t seed = 1;
};

struct RunResult {
  RunKey key;
  std::vector<SlotRecord> slots;

  std::size_t violations() const;
  std::size_t migrations() const;
};

struct RunOptions {
  SlotRange slots;
  bool emulate = true;
  int threads = 1;
};

/// One strategy over the slot window: the partitioner sees the previous slot's gamma-scaled
/// traffic (slot 0 its own), the report and the emulator the current slot's.
RunResult run_one(const Scenario& sc, const RunKey& key, const RunOptions& opt);

/// Every (strategy, gamma, seed) combination of the config, in that nesting order.
/// Runs are independent and may execute in parallel; results keep the nesting order.
std::vector<RunResult> run_scenario(const Scenario& sc, const std::vector<RunKey>& keys, const RunOptions& opt);

std::vector<RunKey> expand_runs(const ScenarioConfig& c);

}  // namespace satdomain
