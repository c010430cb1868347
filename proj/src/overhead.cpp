#include "satdomain/overhead.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <queue>
#include <stdexcept>
#include <string>

#include "json.hpp"

namespace satdomain {

double LinkBandwidths::of(LinkClass c) const {
  switch (c) {
    case LinkClass::Isl: return isl;
    case LinkClass::GsLeo: return gs_leo;
    case LinkClass::MeoLeo: return meo_leo;
    case LinkClass::ControllerController: return controller;
  }
  return isl;
}

std::string_view complexity_name(Complexity c) {
  switch (c) {
    case Complexity::Quadratic: return "n2";
    case Complexity::NLogN: return "nlogn";
    case Complexity::Cubic: return "n3";
  }
  return "?";
}

Complexity parse_complexity(std::string_view s) {
  if (s == "n2") return Complexity::Quadratic;
  if (s == "nlogn") return Complexity::NLogN;
  if (s == "n3") return Complexity::Cubic;
  throw std::invalid_argument("unknown complexity '" + std::string(s) + "' (expected n2, nlogn or n3)");
}

double complexity_ops(Complexity c, double n) {
  switch (c) {
    case Complexity::Quadratic: return n * n;
    case Complexity::NLogN: return n > 1.0 ? n * std::log2(n) : n;
    case Complexity::Cubic: return n * n * n;
  }
  return n * n;
}

double OverheadParams::capacity(NodeId k, Role role) const {
  if (auto it = capacity_override.find(k); it != capacity_override.end()) return it->second;
  return capacity_unit * (role == Role::Gs ? gs_capacity : meo_capacity);
}

void OverheadParams::validate() const {
  auto pos = [](double v, const char* name) {
    if (!(v > 0.0)) throw std::invalid_argument(std::string(name) + " must be > 0");
  };
  pos(m_fl_bytes, "M_fl");
  pos(m_sync_bytes, "M_sync");
  pos(f_sync_hz, "f_sync");
  pos(bandwidth.isl, "ISL bandwidth");
  pos(bandwidth.gs_leo, "GS-LEO bandwidth");
  pos(bandwidth.meo_leo, "MEO-LEO bandwidth");
  pos(bandwidth.controller, "controller bandwidth");
  pos(capacity_unit, "capacity unit");
  pos(gs_capacity, "GS capacity");
  pos(meo_capacity, "MEO capacity");
  for (const auto& [k, c] : capacity_override) pos(c, "capacity override");
  if (tradeoff_lambda < 0.0) throw std::invalid_argument("tradeoff_lambda must be >= 0");
  pos(migration.flow_entry_bytes, "flow_entry_bytes");
  pos(migration.state_bandwidth, "state_bandwidth");
  pos(migration.ho_msg_bytes, "ho_msg_bytes");
  if (migration.per_sat_processing_s < 0.0) throw std::invalid_argument("per_sat_processing_s must be >= 0");
  pos(migration.mean_flow_lifetime_s, "mean_flow_lifetime");
  if (alpha < 0.0 || beta < 0.0 || alpha + beta > 1.0) {
    throw std::invalid_argument("edge weights need alpha, beta >= 0 and alpha + beta <= 1");
  }
  if (mig_unit_s < 0.0) throw std::invalid_argument("mig_unit_s must be >= 0");
}

double ControlPath::cost(double bytes, const LinkBandwidths& bw) const {
  double c = 0.0;
  for (const auto& h : hops) c += bytes * 8.0 / bw.of(h.link) + h.distance_km / constants::kLightSpeedKmS;
  return c;
}

double ControlPath::propagation() const {
  double c = 0.0;
  for (const auto& h : hops) c += h.distance_km / constants::kLightSpeedKmS;
  return c;
}

double ControlPath::bottleneck(const LinkBandwidths& bw) const {
  double b = std::numeric_limits<double>::infinity();
  for (const auto& h : hops) b = std::min(b, bw.of(h.link));
  return b;
}

Role link_role(const NetworkSnapshot& snap, NodeId k) { return snap.role(k); }

LinkClass access_class(Role controller_role) {
  return controller_role == Role::Gs ? LinkClass::GsLeo : LinkClass::MeoLeo;
}

ControlPlane::ControlPlane(const NetworkSnapshot& snap, const DomainAssignment& a, const Coverage& cov,
                           ControlPlaneOptions opt) {
  const std::size_t n = snap.num_leos();
  paths_.resize(n);
  const auto ks = a.active_controllers();
  const auto doms = a.domains();
  for (std::size_t d = 0; d < ks.size(); ++d) {
    const NodeId k = ks[d];
    // Exit of an attachment LEO: the station it downlinks to (k itself when in view).
    std::vector<NodeId> exit(n, kUnassigned);
    std::vector<int> dist(n, -1);
    std::vector<NodeId> next(n, kUnassigned);
    std::queue<NodeId> q;
    for (NodeId i : doms[d]) {
      if (cov.covers(k, i)) {
        exit[i] = k;
      } else if (opt.relay_access) {
        for (NodeId g : cov.coverers[i]) {
          if (snap.role(g) == Role::Gs) {
            exit[i] = g;
            break;
          }
        }
      }
      if (exit[i] != kUnassigned) {
        dist[i] = 0;
        q.push(i);
      }
    }
    while (!q.empty()) {
      const NodeId u = q.front();
      q.pop();
      for (NodeId v : snap.isl->adjacency[u]) {
        if (dist[v] < 0 && a.controller_of[v] == k) {
          dist[v] = dist[u] + 1;
          next[v] = u;
          q.push(v);
        }
      }
    }
    for (NodeId i : doms[d]) {
      if (dist[i] < 0) {
        throw std::runtime_error("disconnected domain: LEO " + std::to_string(i) + " cannot reach controller " +
                                 std::to_string(k));
      }
      ControlPath p;
      NodeId u = i;
      while (exit[u] == kUnassigned || dist[u] > 0) {
        const NodeId v = next[u];
        p.hops.push_back({u, v, LinkClass::Isl, distance(snap.position(u), snap.position(v))});
        u = v;
      }
      const NodeId g = exit[u];
      p.hops.push_back({u, g, access_class(snap.role(g)), distance(snap.position(u), snap.position(g))});
      p.space_hops = dist[i] + 1;
      if (g != k) {
        p.hops.push_back({g, k, LinkClass::ControllerController, distance(snap.position(g), snap.position(k))});
      }
      paths_[i] = std::move(p);
    }
  }
}

int control_hops(NodeId leo, const DomainAssignment& a, const NetworkSnapshot& snap, const Coverage& cov,
                 ControlPlaneOptions opt) {
  return ControlPlane(snap, a, cov, opt).hops(leo);
}

double flow_overhead(const DomainAssignment& a, const TrafficMatrix& traffic, const ControlPlane& cp,
                     const OverheadParams& p) {
  (void)a;
  double w = 0.0;
  for (const auto& e : traffic.entries) w += e.rate * cp.path(e.src).cost(p.m_fl_bytes, p.bandwidth);
  return w;
}

namespace {

std::vector<std::size_t> intra_edge_counts(const DomainAssignment& a, const NetworkSnapshot& snap,
                                           const std::vector<NodeId>& ks) {
  std::vector<std::size_t> e(ks.size(), 0);
  for (const auto& [u, v] : snap.isl->edges) {
    if (a.controller_of[u] == a.controller_of[v]) {
      e[static_cast<std::size_t>(std::lower_bound(ks.begin(), ks.end(), a.controller_of[u]) - ks.begin())]++;
    }
  }
  return e;
}

}  // namespace

SyncOverhead sync_overhead(const DomainAssignment& a, const NetworkSnapshot& snap, const ControlPlane& cp,
                           const OverheadParams& p) {
  SyncOverhead s;
  const auto ks = a.active_controllers();
  const auto doms = a.domains();
  const auto edges = intra_edge_counts(a, snap, ks);
  for (std::size_t d = 0; d < ks.size(); ++d) {
    double worst = 0.0;
    const double bits = static_cast<double>(edges[d]) * p.m_sync_bytes * 8.0;
    for (NodeId i : doms[d]) {
      const ControlPath& path = cp.path(i);
      worst = std::max(worst, bits / path.bottleneck(p.bandwidth) + path.propagation());
    }
    s.intra += p.f_sync_hz * worst;
  }
  double worst = 0.0;
  for (std::size_t d = 0; d < ks.size(); ++d) {
    double sum = 0.0;
    const double tx = static_cast<double>(doms[d].size()) * p.m_sync_bytes * 8.0 / p.bandwidth.controller;
    for (std::size_t e = 0; e < ks.size(); ++e) {
      if (e != d) sum += tx + propagation_delay_s(snap.position(ks[d]), snap.position(ks[e]));
    }
    worst = std::max(worst, sum);
  }
  s.inter = p.f_sync_hz * worst;
  return s;
}

MigrationOverhead migration_overhead(const DomainAssignment* prev, const DomainAssignment& cur,
                                     const TrafficMatrix& traffic, const NetworkSnapshot& snap,
                                     const OverheadParams& p, double slot_duration) {
  MigrationOverhead m;
  if (prev == nullptr || prev->num_leos() == 0) return m;
  if (!(slot_duration > 0.0)) throw std::invalid_argument("slot duration must be > 0");
  const auto out = traffic.outgoing();
  const auto ks = cur.active_controllers();
  const auto doms = cur.domains();
  const auto& mp = p.migration;
  for (std::size_t d = 0; d < ks.size(); ++d) {
    std::size_t changed = 0;
    double live = 0.0;
    for (NodeId i : doms[d]) {
      if (prev->controller_of[i] != kUnassigned && prev->controller_of[i] != ks[d]) ++changed;
      if (i < out.size()) live += out[i] * mp.mean_flow_lifetime_s;
    }
    if (changed == 0) continue;
    const double f_mig = static_cast<double>(changed) / slot_duration;
    const double w_st = mp.flow_entry_bytes * 8.0 * live / mp.state_bandwidth;
    const double b = p.bandwidth.of(access_class(snap.role(ks[d])));
    const double w_ho = static_cast<double>(changed) * (mp.ho_msg_bytes * 8.0 / b + mp.per_sat_processing_s);
    m.w_mig += f_mig * (w_st + w_ho);
    m.migrated += changed;
  }
  return m;
}

CptOverhead path_compute_overhead(const DomainAssignment& a, const TrafficMatrix& traffic, const NetworkSnapshot& snap,
                                  const OverheadParams& p) {
  const auto ks = a.active_controllers();
  const auto doms = a.domains();
  std::vector<double> f_intra(ks.size(), 0.0), f_inter(ks.size(), 0.0);
  auto index = [&](NodeId leo) {
    return static_cast<std::size_t>(std::lower_bound(ks.begin(), ks.end(), a.controller_of[leo]) - ks.begin());
  };
  for (const auto& e : traffic.entries) {
    (a.x(e.src, e.dst) ? f_intra : f_inter)[index(e.src)] += e.rate;
  }
  CptOverhead c;
  const double n_domains = static_cast<double>(ks.size());
  for (std::size_t d = 0; d < ks.size(); ++d) {
    const double cap = p.capacity(ks[d], snap.role(ks[d]));
    c.intra += complexity_ops(p.cpt_complexity, static_cast<double>(doms[d].size())) / cap * f_intra[d];
    c.inter += complexity_ops(p.cpt_complexity, n_domains) / cap * f_inter[d];
  }
  return c;
}

std::optional<double> control_efficiency(const OverheadReport& r) {
  if (!(r.w_ctl > 0.0)) return std::nullopt;
  return r.w_flow / r.w_ctl;
}

Evaluation evaluate(const DomainAssignment& a, const EvaluationInput& in, const OverheadParams& p) {
  Evaluation ev;
  ev.constraints = validate_assignment(a, *in.snapshot, *in.coverage, {in.waive_fov});
  if (!ev.constraints.ok()) return ev;

  const NetworkSnapshot& snap = *in.snapshot;
  const TrafficMatrix& tm = *in.traffic;
  const ControlPlane cp(snap, a, *in.coverage, {in.waive_fov});
  OverheadReport r;
  r.slot_index = a.slot_index;
  r.w_flow = flow_overhead(a, tm, cp, p);
  const SyncOverhead s = sync_overhead(a, snap, cp, p);
  r.w_sync_in = s.intra;
  r.w_sync_out = s.inter;
  const MigrationOverhead m = migration_overhead(in.previous, a, tm, snap, p, in.slot_duration);
  r.w_mig = m.w_mig;
  r.migrated = m.migrated;
  const CptOverhead c = path_compute_overhead(a, tm, snap, p);
  r.w_cpt_intra = c.intra;
  r.w_cpt_inter = c.inter;
  r.w_ctl = r.w_flow + r.w_sync_in + r.w_sync_out + r.w_mig;
  r.objective = r.w_ctl + p.tradeoff_lambda * (r.w_cpt_intra + r.w_cpt_inter);
  r.eta_control = control_efficiency(r);

  double hop_sum = 0.0;
  for (NodeId i = 0; i < cp.size(); ++i) {
    r.max_hops = std::max(r.max_hops, cp.hops(i));
    hop_sum += cp.hops(i);
  }
  r.mean_hops = cp.size() ? hop_sum / static_cast<double>(cp.size()) : 0.0;

  // Per-domain breakdown.
  const auto ks = a.active_controllers();
  const auto doms = a.domains();
  const auto edges = intra_edge_counts(a, snap, ks);
  const double n_domains = static_cast<double>(ks.size());
  for (std::size_t d = 0; d < ks.size(); ++d) {
    DomainBreakdown b;
    b.controller = ks[d];
    b.size = doms[d].size();
    b.isl_edges = edges[d];
    const double cap = p.capacity(ks[d], snap.role(ks[d]));
    double worst = 0.0;
    for (NodeId i : doms[d]) {
      const ControlPath& path = cp.path(i);
      worst = std::max(worst, static_cast<double>(edges[d]) * p.m_sync_bytes * 8.0 / path.bottleneck(p.bandwidth) +
                                  path.propagation());
      if (in.previous && in.previous->num_leos() && in.previous->controller_of[i] != ks[d]) ++b.migrated_in;
    }
    b.sync_in = p.f_sync_hz * worst;
    for (const auto& e : tm.entries) {
      if (a.controller_of[e.src] != ks[d]) continue;
      b.flow += e.rate * cp.path(e.src).cost(p.m_fl_bytes, p.bandwidth);
      if (a.x(e.src, e.dst)) {
        b.cpt_intra += complexity_ops(p.cpt_complexity, static_cast<double>(b.size)) / cap * e.rate;
      } else {
        b.cpt_inter += complexity_ops(p.cpt_complexity, n_domains) / cap * e.rate;
      }
    }
    r.domains.push_back(b);
  }
  ev.report = std::move(r);
  return ev;
}

void write_report_json(std::ostream& os, const OverheadReport& r) {
  nlohmann::json j;
  j["slot"] = r.slot_index;
  j["W_FLOW"] = r.w_flow;
  j["W_SYNC_in"] = r.w_sync_in;
  j["W_SYNC_out"] = r.w_sync_out;
  j["W_MIG"] = r.w_mig;
  j["W_CPT_intra"] = r.w_cpt_intra;
  j["W_CPT_inter"] = r.w_cpt_inter;
  j["W_CTL"] = r.w_ctl;
  j["objective"] = r.objective;
  j["eta_control"] = r.eta_control ? nlohmann::json(*r.eta_control) : nlohmann::json(nullptr);
  j["drop_rate"] = r.drop_rate;
  j["migrated"] = r.migrated;
  j["max_hops"] = r.max_hops;
  j["mean_hops"] = r.mean_hops;
  for (const auto& d : r.domains) {
    j["domains"].push_back({{"controller", d.controller},
                            {"size", d.size},
                            {"isl_edges", d.isl_edges},
                            {"W_FLOW", d.flow},
                            {"W_SYNC_in", d.sync_in},
                            {"W_CPT_intra", d.cpt_intra},
                            {"W_CPT_inter", d.cpt_inter},
                            {"migrated_in", d.migrated_in}});
  }
  os << j.dump(2) << '\n';
}

void write_report_csv_rows(std::ostream& os, const OverheadReport& r) {
  const std::pair<const char*, double> rows[] = {
      {"W_FLOW", r.w_flow},           {"W_SYNC_in", r.w_sync_in},     {"W_SYNC_out", r.w_sync_out},
      {"W_MIG", r.w_mig},             {"W_CPT_intra", r.w_cpt_intra}, {"W_CPT_inter", r.w_cpt_inter},
      {"W_CTL", r.w_ctl},             {"objective", r.objective},     {"drop_rate", r.drop_rate},
  };
  for (const auto& [name, v] : rows) os << r.slot_index << ',' << name << ',' << v << '\n';
  if (r.eta_control) os << r.slot_index << ",eta_control," << *r.eta_control << '\n';
}

}  // namespace satdomain
