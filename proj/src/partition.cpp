#include "satdomain/partition.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <string>

#include "satdomain/rng.hpp"

namespace satdomain {

SlotContext make_slot_context(const Constellation& c, const FovConfig& fov, int index, double start, double duration,
                              double lookahead_s) {
  SlotContext ctx;
  ctx.slot_index = index;
  ctx.start = start;
  ctx.duration = duration;
  ctx.snapshot = c.snapshot(start);
  ctx.coverage = compute_coverage(ctx.snapshot, fov);
  ctx.lookahead = c.snapshot(start + lookahead_s);
  ctx.lookahead_coverage = compute_coverage(ctx.lookahead, fov);
  return ctx;
}

std::string_view strategy_name(Strategy s) {
  switch (s) {
    case Strategy::Eunomia: return "eunomia";
    case Strategy::Odc: return "odc";
    case Strategy::Greedy: return "greedy";
  }
  return "?";
}

Strategy parse_strategy(std::string_view s) {
  if (s == "eunomia") return Strategy::Eunomia;
  if (s == "odc") return Strategy::Odc;
  if (s == "greedy") return Strategy::Greedy;
  throw std::invalid_argument("unknown strategy '" + std::string(s) + "' (expected eunomia, odc or greedy)");
}

Step1Result step1_exclusive_assign(const Coverage& cov, int slot_index) {
  Step1Result r{DomainAssignment(cov.coverers.size(), slot_index), {}};
  for (NodeId i = 0; i < cov.coverers.size(); ++i) {
    if (cov.coverers[i].size() == 1) {
      r.partial.controller_of[i] = cov.coverers[i].front();
    } else if (cov.coverers[i].empty()) {
      r.uncoverable.push_back(i);
    }
  }
  return r;
}

namespace {

NodeId nearest_of(NodeId leo, const std::vector<NodeId>& candidates, const NetworkSnapshot& snap) {
  NodeId best = kUnassigned;
  double best_d = 0.0;
  for (NodeId k : candidates) {
    const double d = distance(snap.position(leo), snap.position(k));
    if (best == kUnassigned || d < best_d || (d == best_d && k < best)) {
      best = k;
      best_d = d;
    }
  }
  return best;
}

NodeId nearest_covering(NodeId leo, const std::vector<NodeId>& preferred, const SlotContext& ctx) {
  std::vector<NodeId> ok;
  for (NodeId k : preferred) {
    if (ctx.coverage.covers(k, leo)) ok.push_back(k);
  }
  if (ok.empty()) ok = ctx.coverage.coverers[leo];
  return nearest_of(leo, ok, ctx.snapshot);
}

void throw_uncoverable(const std::vector<NodeId>& ids) {
  std::string s = "uncoverable LEOs (no controller in view):";
  for (NodeId i : ids) s += " " + std::to_string(i);
  throw std::runtime_error(s);
}

bool same_region(const OverlapRegion& a, const OverlapRegion& b) {
  return a.leo_ids == b.leo_ids && a.competing_controller_ids == b.competing_controller_ids;
}

}  // namespace

std::vector<double> cluster_cost_matrix(const std::vector<std::vector<NodeId>>& clusters,
                                        const std::vector<NodeId>& controllers, const NetworkSnapshot& snap,
                                        const Coverage& cov) {
  std::vector<double> cost(clusters.size() * controllers.size(), 0.0);
  for (std::size_t c = 0; c < clusters.size(); ++c) {
    if (clusters[c].empty()) continue;
    Vec3 centroid;
    for (NodeId i : clusters[c]) centroid += snap.position(i);
    centroid *= 1.0 / static_cast<double>(clusters[c].size());
    for (std::size_t k = 0; k < controllers.size(); ++k) {
      const bool feasible = std::all_of(clusters[c].begin(), clusters[c].end(),
                                        [&](NodeId i) { return cov.covers(controllers[k], i); });
      cost[c * controllers.size() + k] = feasible ? distance(centroid, snap.position(controllers[k])) : kInfeasible;
    }
  }
  return cost;
}

std::size_t predicted_handovers(const DomainAssignment& a, const SlotContext& ctx) {
  std::size_t n = 0;
  for (NodeId i = 0; i < a.num_leos(); ++i) {
    if (!ctx.lookahead_coverage.covers(a.controller_of[i], i)) ++n;
  }
  return n;
}

namespace {

// Every member of k's domain reaches a LEO that k sees directly through intra-domain ISLs.
bool domain_connected(const DomainAssignment& a, NodeId k, const SlotContext& ctx) {
  const auto& adj = ctx.snapshot.isl->adjacency;
  std::vector<char> seen(a.num_leos(), 0);
  std::vector<NodeId> stack;
  std::size_t members = 0, reached = 0;
  for (NodeId i = 0; i < a.num_leos(); ++i) {
    if (a.controller_of[i] != k) continue;
    ++members;
    if (ctx.coverage.covers(k, i)) {
      seen[i] = 1;
      stack.push_back(i);
    }
  }
  while (!stack.empty()) {
    const NodeId u = stack.back();
    stack.pop_back();
    ++reached;
    for (NodeId v : adj[u]) {
      if (!seen[v] && a.controller_of[v] == k) {
        seen[v] = 1;
        stack.push_back(v);
      }
    }
  }
  return reached == members;
}

}  // namespace

DomainAssignment fine_tune_boundaries(const DomainAssignment& a, const SlotContext& ctx, FineTuneStats* stats) {
  DomainAssignment res = a;
  FineTuneStats st;
  const auto& adj = ctx.snapshot.isl->adjacency;
  const std::size_t n = res.num_leos();
  auto northbound = [&](NodeId i) { return ctx.snapshot.velocity(i).z >= 0.0; };

  for (NodeId i = 0; i < n; ++i) {
    const bool boundary = std::any_of(adj[i].begin(), adj[i].end(),
                                      [&](NodeId j) { return res.controller_of[j] != res.controller_of[i]; });
    if (!boundary) continue;
    ++st.boundary;
    (northbound(i) ? st.northbound : st.southbound)++;
  }

  bool changed = true;
  while (changed && st.moves < n) {
    changed = false;
    for (NodeId i = 0; i < n && st.moves < n; ++i) {
      const NodeId k = res.controller_of[i];
      if (ctx.lookahead_coverage.covers(k, i)) continue;
      // Neighbor domains that keep i in view now and after the lookahead; score by
      // how many of i's neighbors there fly in the same direction.
      std::map<NodeId, int> score;
      for (NodeId j : adj[i]) {
        const NodeId kj = res.controller_of[j];
        if (kj == k || !ctx.coverage.covers(kj, i) || !ctx.lookahead_coverage.covers(kj, i)) continue;
        score[kj] += northbound(j) == northbound(i) ? 1 : 0;
      }
      if (score.empty()) continue;
      NodeId target = kUnassigned;
      int best = -1;
      for (const auto& [kj, s] : score) {
        if (s > best) {
          best = s;
          target = kj;
        }
      }
      const std::size_t before = predicted_handovers(res, ctx);
      res.controller_of[i] = target;
      if (predicted_handovers(res, ctx) > before || !domain_connected(res, k, ctx)) {
        res.controller_of[i] = k;
        continue;
      }
      ++st.moves;
      changed = true;
    }
  }
  if (stats) *stats = st;
  return res;
}

PartitionOutcome partition_slot(const SlotContext& ctx, const TrafficMatrix& traffic_prev, const PartitionState* prev,
                                const PartitionParams& params, std::uint64_t seed) {
  PartitionOutcome out;
  auto& diag = out.diagnostics;
  Step1Result s1 = step1_exclusive_assign(ctx.coverage, ctx.slot_index);
  diag.uncoverable = s1.uncoverable;
  if (!s1.uncoverable.empty()) throw_uncoverable(s1.uncoverable);
  DomainAssignment a = std::move(s1.partial);

  out.regions = compute_overlap_regions(ctx.coverage, *ctx.snapshot.isl);
  diag.regions = out.regions.size();
  for (std::size_t ri = 0; ri < out.regions.size(); ++ri) {
    const OverlapRegion& region = out.regions[ri];
    diag.largest_region = std::max(diag.largest_region, region.leo_ids.size());

    if (params.inherit && prev && prev->assignment.num_leos() == a.num_leos()) {
      const bool unchanged = std::any_of(prev->regions.begin(), prev->regions.end(),
                                         [&](const OverlapRegion& r) { return same_region(r, region); });
      const bool covered = std::all_of(region.leo_ids.begin(), region.leo_ids.end(), [&](NodeId i) {
        const NodeId k = prev->assignment.controller_of[i];
        return k != kUnassigned && ctx.coverage.covers(k, i);
      });
      if (unchanged && covered) {
        for (NodeId i : region.leo_ids) a.controller_of[i] = prev->assignment.controller_of[i];
        ++diag.inherited_regions;
        continue;
      }
    }
    ++diag.clustered_regions;

    const Corg g = build_corg(region, traffic_prev, ctx.snapshot, ctx.coverage, params.overhead);
    const std::size_t m = region.competing_controller_ids.size();
    const std::uint64_t region_seed = combine_seed(combine_seed(seed, static_cast<std::uint64_t>(ctx.slot_index)),
                                                   region.leo_ids.front());
    const SpectralResult sr = spectral_cluster(g, m, region_seed, params.spectral);
    diag.spectral_retries += sr.retries;

    std::vector<char> controller_taken(m, 0);
    std::vector<std::vector<NodeId>> rows;
    for (std::size_t c = 0; c < m; ++c) {
      std::vector<NodeId> members;
      for (std::size_t local : sr.members[c]) members.push_back(g.node_ids[local]);
      if (sr.virtuals[c].size() >= 2) {
        // Unresolved conflict: members go to the nearest of the controllers that collided here.
        ++diag.unresolved_conflicts;
        std::vector<NodeId> conflicting;
        for (std::size_t v : sr.virtuals[c]) {
          conflicting.push_back(g.node_ids[v]);
          controller_taken[v - g.num_leos] = 1;
        }
        for (NodeId i : members) {
          a.controller_of[i] = nearest_covering(i, conflicting, ctx);
          ++diag.fallback_leos;
        }
      } else {
        rows.push_back(std::move(members));
      }
    }
    std::vector<NodeId> cols;
    for (std::size_t k = 0; k < m; ++k) {
      if (!controller_taken[k]) cols.push_back(region.competing_controller_ids[k]);
    }
    const std::vector<double> cost = cluster_cost_matrix(rows, cols, ctx.snapshot, ctx.coverage);
    const Matching match = km_match(cost, rows.size(), cols.size());
    for (std::size_t r = 0; r < rows.size(); ++r) {
      const int col = match.col_of_row[r];
      for (NodeId i : rows[r]) {
        if (col >= 0 && ctx.coverage.covers(cols[static_cast<std::size_t>(col)], i)) {
          a.controller_of[i] = cols[static_cast<std::size_t>(col)];
        } else {
          a.controller_of[i] = nearest_covering(i, region.competing_controller_ids, ctx);
          ++diag.fallback_leos;
        }
      }
    }
  }

  if (params.fine_tune) a = fine_tune_boundaries(a, ctx, &diag.fine_tune);
  out.assignment = std::move(a);
  return out;
}

DomainAssignment odc_partition(const SlotContext& ctx, NodeId central) {
  if (central == kUnassigned) {
    for (NodeId k : ctx.snapshot.controller_ids) {
      if (ctx.snapshot.role(k) == Role::Gs) {
        central = k;
        break;
      }
    }
  }
  if (central == kUnassigned || ctx.snapshot.role(central) != Role::Gs) {
    throw std::invalid_argument("centralized baseline needs a ground-station controller");
  }
  DomainAssignment a(ctx.snapshot.num_leos(), ctx.slot_index);
  std::fill(a.controller_of.begin(), a.controller_of.end(), central);
  return a;
}

DomainAssignment greedy_partition(const SlotContext& ctx, double cap_factor) {
  const std::size_t n = ctx.snapshot.num_leos();
  const std::size_t nk = ctx.snapshot.controller_ids.size();
  if (nk == 0) throw std::invalid_argument("greedy partition needs at least one controller");
  const auto cap = static_cast<std::size_t>(std::ceil(cap_factor * static_cast<double>(n) / static_cast<double>(nk)));
  DomainAssignment a(n, ctx.slot_index);
  std::map<NodeId, std::size_t> load;
  std::vector<NodeId> uncoverable;
  for (NodeId i = 0; i < n; ++i) {
    std::vector<std::pair<double, NodeId>> order;
    for (NodeId k : ctx.coverage.coverers[i]) order.emplace_back(distance(ctx.snapshot.position(i), ctx.snapshot.position(k)), k);
    if (order.empty()) {
      uncoverable.push_back(i);
      continue;
    }
    std::sort(order.begin(), order.end());
    NodeId pick = order.front().second;
    for (const auto& [d, k] : order) {
      if (load[k] < cap) {
        pick = k;
        break;
      }
    }
    a.controller_of[i] = pick;
    ++load[pick];
  }
  if (!uncoverable.empty()) throw_uncoverable(uncoverable);
  return a;
}

BruteForceResult brute_force_partition(const SlotContext& ctx, const TrafficMatrix& traffic, const OverheadParams& p,
                                       const DomainAssignment* previous) {
  const std::size_t n = ctx.snapshot.num_leos();
  if (n > 10) throw std::invalid_argument("brute force limited to 10 LEOs");
  const auto& choices = ctx.coverage.coverers;
  double combos = 1.0;
  for (const auto& c : choices) {
    if (c.empty()) throw_uncoverable({static_cast<NodeId>(&c - choices.data())});
    combos *= static_cast<double>(c.size());
  }
  if (combos > 5e6) throw std::invalid_argument("brute force search space too large");

  EvaluationInput in{&ctx.snapshot, &ctx.coverage, &traffic, previous, ctx.duration, false};
  std::vector<std::size_t> digit(n, 0);
  BruteForceResult best;
  bool have = false;
  DomainAssignment a(n, ctx.slot_index);
  for (;;) {
    for (std::size_t i = 0; i < n; ++i) a.controller_of[i] = choices[i][digit[i]];
    const Evaluation ev = evaluate(a, in, p);
    ++best.evaluated;
    if (ev.report && (!have || ev.report->objective < best.objective)) {
      best.assignment = a;
      best.objective = ev.report->objective;
      have = true;
    }
    std::size_t pos = n;
    while (pos > 0) {
      --pos;
      if (++digit[pos] < choices[pos].size()) break;
      digit[pos] = 0;
      if (pos == 0) {
        pos = n + 1;
        break;
      }
    }
    if (pos == n + 1 || n == 0) break;
  }
  if (!have) throw std::runtime_error("brute force found no valid assignment");
  return best;
}

PartitionOutcome run_strategy(Strategy s, const SlotContext& ctx, const TrafficMatrix& traffic_prev,
                              const PartitionState* prev, const PartitionParams& params, std::uint64_t seed) {
  switch (s) {
    case Strategy::Eunomia: return partition_slot(ctx, traffic_prev, prev, params, seed);
    case Strategy::Odc: {
      PartitionOutcome o;
      o.assignment = odc_partition(ctx, params.odc_controller);
      return o;
    }
    case Strategy::Greedy: {
      PartitionOutcome o;
      o.assignment = greedy_partition(ctx, params.greedy_cap_factor);
      return o;
    }
  }
  throw std::logic_error("unhandled strategy");
}

}  // namespace satdomain
