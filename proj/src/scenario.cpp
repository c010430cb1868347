#include "satdomain/scenario.hpp"

#include <atomic>
#include <chrono>
#include <exception>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "satdomain/rng.hpp"

namespace satdomain {

SlotRange parse_slot_range(const std::string& text) {
  auto to_int = [&](const std::string& s) {
    std::size_t pos = 0;
    int v = 0;
    try {
      v = std::stoi(s, &pos);
    } catch (const std::exception&) {
      pos = 0;
    }
    if (pos != s.size() || v < 0) throw std::invalid_argument("bad slot range '" + text + "'");
    return v;
  };
  SlotRange r;
  const auto colon = text.find(':');
  if (colon == std::string::npos) {
    r.end = to_int(text);
    return r;
  }
  const std::string a = text.substr(0, colon);
  const std::string b = text.substr(colon + 1);
  if (!a.empty()) r.begin = to_int(a);
  if (!b.empty()) r.end = to_int(b);
  if (r.end && *r.end < r.begin) throw std::invalid_argument("bad slot range '" + text + "'");
  return r;
}

Scenario::Scenario(ScenarioConfig config) : config_(std::move(config)) {
  config_.validate();
  std::vector<std::pair<std::string, std::pair<double, double>>> gs;
  for (const auto& g : config_.ground_stations) gs.push_back({g.name, {g.lat, g.lon}});
  constellation_ = std::make_unique<Constellation>(config_.leo_shells, config_.meo_shells, gs);
  const Constellation& c = *constellation_;
  horizon_ = config_.horizon_s.value_or(c.leo_period());

  for (const auto& g : c.ground_stations()) {
    if (config_.odc_controller.empty() ? odc_controller_ == kUnassigned : g.name == config_.odc_controller) {
      odc_controller_ = g.id;
    }
  }

  const auto slots = segment_time_slots(c, config_.fov, horizon_, config_.step_s);
  contexts_.reserve(slots.size());
  for (const auto& s : slots) {
    contexts_.push_back(make_slot_context(c, config_.fov, s.index, s.start, s.duration(), config_.lookahead_s));
  }

  const auto& tc = config_.traffic;
  TrafficModel model(build_grid(DensityField::nine_cities(tc.sigma_km, tc.background)), 1.0, tc.diurnal_floor,
                     tc.exponent);
  traffic_.reserve(contexts_.size());
  double sum_total = 0.0;
  for (const auto& ctx : contexts_) {
    traffic_.push_back(model.synthesize(ctx.snapshot, ctx.slot_index, tc.utc_offset_s + ctx.start).matrix);
    sum_total += traffic_.back().total();
  }

  if (tc.gravity_g) {
    gravity_g_ = *tc.gravity_g;
  } else {
    // Offered load on the centralized station equals target_utilization at gamma = 1.
    const double mean_total = contexts_.empty() ? 0.0 : sum_total / static_cast<double>(contexts_.size());
    NodeId ref = odc_controller_;
    if (ref == kUnassigned && !c.controller_ids().empty()) ref = c.controller_ids().front();
    const double cap = ref == kUnassigned ? 1.0 : config_.overhead.capacity(ref, c.role(ref));
    const double ops = complexity_ops(config_.overhead.cpt_complexity, static_cast<double>(c.num_leos()));
    gravity_g_ = mean_total > 0.0 ? tc.target_utilization * cap / (ops * mean_total) : 1.0;
  }
  for (auto& m : traffic_) {
    for (auto& e : m.entries) e.rate *= gravity_g_;
  }
}

PartitionParams Scenario::partition_params() const {
  PartitionParams p;
  p.overhead = config_.overhead;
  p.spectral.max_retries = config_.max_retries;
  p.spectral.dense_limit = config_.dense_limit;
  p.spectral.kmeans.restarts = config_.kmeans_restarts;
  p.inherit = config_.inherit;
  p.fine_tune = config_.fine_tune;
  p.greedy_cap_factor = config_.greedy_cap_factor;
  p.odc_controller = odc_controller_;
  return p;
}

EmulatorParams Scenario::emulator_params(Strategy s, double gamma) const {
  EmulatorParams e;
  e.overhead = config_.overhead;
  e.queue_window_s = config_.queue_window_s;
  e.gamma = gamma;
  e.relay_access = s == Strategy::Odc;
  return e;
}

std::size_t RunResult::violations() const {
  std::size_t n = 0;
  for (const auto& s : slots) n += s.constraints.violations.size();
  return n;
}

std::size_t RunResult::migrations() const {
  std::size_t n = 0;
  for (std::size_t i = 1; i < slots.size(); ++i) n += slots[i].assignment.migrations_from(slots[i - 1].assignment);
  return n;
}

RunResult run_one(const Scenario& sc, const RunKey& key, const RunOptions& opt) {
  RunResult out;
  out.key = key;
  const std::size_t n = sc.num_slots();
  const std::size_t begin = std::min<std::size_t>(static_cast<std::size_t>(opt.slots.begin), n);
  const std::size_t end = opt.slots.end ? std::min<std::size_t>(static_cast<std::size_t>(*opt.slots.end), n) : n;
  const PartitionParams pp = sc.partition_params();
  const EmulatorParams ep = sc.emulator_params(key.strategy, key.gamma);
  const bool waive = key.strategy == Strategy::Odc;

  std::optional<PartitionState> state;
  for (std::size_t i = begin; i < end; ++i) {
    const SlotContext& ctx = sc.slot(i);
    const TrafficMatrix current = scale(sc.traffic(i), key.gamma);
    const TrafficMatrix prev_traffic = i > begin ? scale(sc.traffic(i - 1), key.gamma) : current;

    SlotRecord rec;
    rec.slot_index = ctx.slot_index;
    rec.start = ctx.start;
    rec.duration = ctx.duration;
    const auto t0 = std::chrono::steady_clock::now();
    PartitionOutcome po = run_strategy(key.strategy, ctx, prev_traffic, state ? &*state : nullptr, pp, key.seed);
    rec.partition_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    rec.assignment = po.assignment;
    rec.diagnostics = po.diagnostics;

    const DomainAssignment* previous = state ? &state->assignment : nullptr;
    EvaluationInput in;
    in.snapshot = &ctx.snapshot;
    in.coverage = &ctx.coverage;
    in.traffic = &current;
    in.previous = previous;
    in.slot_duration = ctx.duration;
    in.waive_fov = waive;
    Evaluation ev = evaluate(rec.assignment, in, pp.overhead);
    rec.constraints = ev.constraints;
    rec.report = ev.report;

    if (opt.emulate && rec.constraints.ok()) {
      // Arrivals come from the unscaled matrix and are thinned by gamma inside the emulator.
      rec.stats = run_slot(ctx, rec.assignment, previous, sc.traffic(i), ep, key.seed);
      if (rec.report) rec.report->drop_rate = rec.stats->drop_rate();
    }
    state = po.state();
    out.slots.push_back(std::move(rec));
  }
  return out;
}

std::vector<RunKey> expand_runs(const ScenarioConfig& c) {
  std::vector<RunKey> keys;
  for (Strategy s : c.strategies) {
    for (double g : c.gammas) {
      for (std::uint64_t seed : c.seeds) keys.push_back({s, g, seed});
    }
  }
  return keys;
}

std::vector<RunResult> run_scenario(const Scenario& sc, const std::vector<RunKey>& keys, const RunOptions& opt) {
  std::vector<RunResult> results(keys.size());
  const int workers = std::max(1, std::min<int>(opt.threads, static_cast<int>(keys.size())));
  if (workers == 1) {
    for (std::size_t i = 0; i < keys.size(); ++i) results[i] = run_one(sc, keys[i], opt);
    return results;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mu;
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < keys.size(); i = next++) {
        try {
          results[i] = run_one(sc, keys[i], opt);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mu);
          if (!error) error = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
  return results;
}

}  // namespace satdomain
