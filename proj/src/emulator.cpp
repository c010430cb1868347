#include "satdomain/emulator.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <queue>
#include <stdexcept>

#include "satdomain/codec.hpp"
#include "satdomain/rng.hpp"

namespace satdomain {

void TraceHash::add(const void* data, std::size_t n) {
  const auto* p = static_cast<const unsigned char*>(data);
  for (std::size_t i = 0; i < n; ++i) {
    h_ ^= p[i];
    h_ *= 0x100000001b3ULL;
  }
}

std::uint64_t arrival_seed(std::uint64_t seed, int slot, NodeId src, NodeId dst) {
  return combine_seed(combine_seed(combine_seed(seed, static_cast<std::uint64_t>(slot)), src), dst);
}

namespace {

enum class EventType : std::uint8_t { RequestAtController, ServiceDone, SyncTick, SlotEnd };

struct Event {
  double time;
  std::uint64_t seq;
  EventType type;
  std::size_t ref;
};

struct EventLater {
  bool operator()(const Event& a, const Event& b) const {
    return a.time != b.time ? a.time > b.time : a.seq > b.seq;
  }
};

struct Request {
  NodeId src;
  NodeId dst;
  NodeId controller;
  double created;
  double service;
  bool inter;
};

// Shortest ISL paths from one source, parents by BFS over sorted adjacency.
class PathCache {
 public:
  explicit PathCache(const IslGraph& g) : g_(g) {}

  std::vector<NodeId> path(NodeId src, NodeId dst) {
    auto it = parents_.find(src);
    if (it == parents_.end()) it = parents_.emplace(src, bfs(src)).first;
    const auto& parent = it->second;
    if (parent[dst] == kUnassigned && dst != src) throw std::runtime_error("no ISL path between LEOs");
    std::vector<NodeId> p{dst};
    while (p.back() != src) p.push_back(parent[p.back()]);
    std::reverse(p.begin(), p.end());
    return p;
  }

 private:
  std::vector<NodeId> bfs(NodeId src) const {
    std::vector<NodeId> parent(g_.num_nodes(), kUnassigned);
    std::vector<char> seen(g_.num_nodes(), 0);
    std::queue<NodeId> q;
    q.push(src);
    seen[src] = 1;
    while (!q.empty()) {
      const NodeId u = q.front();
      q.pop();
      for (NodeId v : g_.adjacency[u]) {
        if (!seen[v]) {
          seen[v] = 1;
          parent[v] = u;
          q.push(v);
        }
      }
    }
    return parent;
  }

  const IslGraph& g_;
  std::map<NodeId, std::vector<NodeId>> parents_;
};

double percentile(std::vector<double> v, double q) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const double pos = q * static_cast<double>(v.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, v.size() - 1);
  return v[lo] + (v[hi] - v[lo]) * (pos - static_cast<double>(lo));
}

}  // namespace

EmulationStats run_slot(const SlotContext& ctx, const DomainAssignment& a, const DomainAssignment* previous,
                        const TrafficMatrix& traffic, const EmulatorParams& params, std::uint64_t seed) {
  if (!(params.gamma >= 0.0 && params.gamma <= 1.0)) throw std::invalid_argument("gamma must be in [0, 1]");
  if (!(params.queue_window_s > 0.0)) throw std::invalid_argument("queue window must be > 0");
  if (!(ctx.duration > 0.0)) throw std::invalid_argument("slot duration must be > 0");
  const ConstraintReport rep = validate_assignment(a, ctx.snapshot, ctx.coverage, {params.relay_access});
  if (!rep.ok()) throw std::invalid_argument("emulator: invalid assignment: " + rep.summary());

  const NetworkSnapshot& snap = ctx.snapshot;
  const OverheadParams& op = params.overhead;
  const LinkBandwidths& bw = op.bandwidth;
  const ControlPlane cp(snap, a, ctx.coverage, {params.relay_access});
  const auto ks = a.active_controllers();
  const auto doms = a.domains();
  std::map<NodeId, std::size_t> domain_index;
  for (std::size_t d = 0; d < ks.size(); ++d) domain_index[ks[d]] = d;

  EmulationStats st;
  st.slot_index = ctx.slot_index;
  st.duration = ctx.duration;
  TraceHash trace;

  auto account = [&](MessageKind k, std::size_t bytes) {
    st.count[static_cast<int>(k)] += 1;
    st.bytes[static_cast<int>(k)] += bytes;
  };

  // Arrivals: one Poisson stream per pair, thinned by gamma so that streams are nested across gamma.
  const double request_bytes = static_cast<double>(kFlowRequestFixedBytes);
  std::vector<Request> requests;
  std::priority_queue<Event, std::vector<Event>, EventLater> events;
  std::uint64_t seq = 0;
  for (const auto& e : traffic.entries) {
    StreamRng rng(arrival_seed(seed, ctx.slot_index, e.src, e.dst));
    double t = 0.0;
    for (;;) {
      t += rng.exponential(e.rate);
      if (t >= ctx.duration) break;
      if (rng.uniform() >= params.gamma) continue;
      const NodeId k = a.controller_of[e.src];
      const bool inter = a.controller_of[e.dst] != k;
      const double n_ops = inter ? static_cast<double>(ks.size()) : static_cast<double>(doms[domain_index[k]].size());
      const double service = complexity_ops(op.cpt_complexity, n_ops) / op.capacity(k, snap.role(k));
      requests.push_back({e.src, e.dst, k, t, service, inter});
      const double arrive = t + cp.path(e.src).cost(request_bytes, bw);
      events.push({arrive, seq++, EventType::RequestAtController, requests.size() - 1});
      st.measured_w_flow += cp.path(e.src).cost(op.m_fl_bytes, bw);
    }
  }
  st.measured_w_flow /= ctx.duration;
  st.requests = requests.size();

  const double tick = 1.0 / op.f_sync_hz;
  for (std::size_t j = 0; static_cast<double>(j) * tick < ctx.duration; ++j) {
    events.push({static_cast<double>(j) * tick, seq++, EventType::SyncTick, j});
  }
  events.push({ctx.duration, seq++, EventType::SlotEnd, 0});

  std::map<NodeId, double> busy_until;
  PathCache paths(*snap.isl);
  std::vector<double> sync_delays;
  double clock = 0.0;

  while (!events.empty()) {
    const Event ev = events.top();
    events.pop();
    if (ev.time < clock) throw std::logic_error("event processed out of order");
    clock = ev.time;
    ++st.events;
    trace.add_value(std::bit_cast<std::uint64_t>(ev.time));
    trace.add_value(static_cast<std::uint8_t>(ev.type));
    trace.add_value(static_cast<std::uint64_t>(ev.ref));

    switch (ev.type) {
      case EventType::RequestAtController: {
        Request& r = requests[ev.ref];
        FlowRequest msg;
        msg.xid = static_cast<std::uint32_t>(ev.ref);
        msg.match.src_addr = r.src;
        msg.match.dst_addr = r.dst;
        account(MessageKind::FlowRequest, encode_flow_request(msg).size());
        double& busy = busy_until[r.controller];
        const double backlog = std::max(0.0, busy - clock);
        if (backlog + r.service > params.queue_window_s) {
          ++st.dropped;
          trace.add_value(std::uint8_t{0xdd});
          break;
        }
        busy = std::max(busy, clock) + r.service;
        events.push({busy, seq++, EventType::ServiceDone, ev.ref});
        break;
      }
      case EventType::ServiceDone: {
        const Request& r = requests[ev.ref];
        double ready = clock;
        if (r.inter) {
          ++st.inter_requests;
          const NodeId peer = a.controller_of[r.dst];
          const double one_way = op.m_fl_bytes * 8.0 / bw.controller + propagation_delay_s(snap.position(r.controller), snap.position(peer));
          ready += 2.0 * one_way;
        } else {
          ++st.intra_requests;
        }
        // Every node on the data path gets an update from its own domain controller.
        double last = ready;
        FlowUpdate fu;
        fu.command = 0;
        fu.match_src = static_cast<std::uint16_t>(r.src);
        fu.match_dst = static_cast<std::uint16_t>(r.dst);
        for (NodeId node : paths.path(r.src, r.dst)) {
          fu.buffer_id = node;
          account(MessageKind::FlowUpdate, encode_flow_update(fu).size());
          last = std::max(last, ready + cp.path(node).cost(op.m_fl_bytes, bw));
        }
        st.response_delays.push_back(last - r.created);
        trace.add_value(std::bit_cast<std::uint64_t>(last));
        break;
      }
      case EventType::SyncTick: {
        double worst = 0.0;
        const double sync_bits = op.m_sync_bytes * 8.0;
        for (const auto& [u, v] : snap.isl->edges) {
          if (a.controller_of[u] != a.controller_of[v]) continue;
          EdgeSync es;
          es.src = u;
          es.dst = v;
          es.bandwidth_kbps = static_cast<std::uint32_t>(bw.isl / 1000.0);
          es.timestamp_ms = static_cast<std::uint64_t>(std::llround((ctx.start + clock) * 1000.0));
          account(MessageKind::EdgeSync, encode_edge_sync(es).size());
          const ControlPath& p = cp.path(u);
          worst = std::max(worst, sync_bits / p.bottleneck(bw) + p.propagation());
        }
        for (std::size_t d = 0; d < ks.size(); ++d) {
          for (std::size_t e = 0; e < ks.size(); ++e) {
            if (d == e) continue;
            const double bytes = static_cast<double>(doms[d].size()) * op.m_sync_bytes;
            EdgeSync es;
            es.link_type = 1;
            es.src = ks[d];
            es.dst = ks[e];
            for (std::size_t c = 0; c < doms[d].size(); ++c) account(MessageKind::EdgeSync, encode_edge_sync(es).size());
            worst = std::max(worst, bytes * 8.0 / bw.controller + propagation_delay_s(snap.position(ks[d]), snap.position(ks[e])));
          }
        }
        sync_delays.push_back(worst);
        break;
      }
      case EventType::SlotEnd: {
        if (previous && previous->num_leos() == a.num_leos()) {
          for (NodeId i = 0; i < a.num_leos(); ++i) {
            const NodeId old = previous->controller_of[i];
            if (old == kUnassigned || old == a.controller_of[i]) continue;
            Handover h{i, old, a.controller_of[i], static_cast<std::uint32_t>(std::llround((ctx.start + clock) * 1000.0))};
            account(MessageKind::Handover, encode_handover(h).size());
            ++st.handovers;
            trace.add_value(i);
          }
        }
        break;
      }
    }
  }

  if (!st.response_delays.empty()) {
    double s = 0.0;
    for (double d : st.response_delays) s += d;
    st.mean_response_s = s / static_cast<double>(st.response_delays.size());
    st.median_response_s = percentile(st.response_delays, 0.5);
    st.p95_response_s = percentile(st.response_delays, 0.95);
  }
  if (!sync_delays.empty()) {
    double s = 0.0;
    for (double d : sync_delays) s += d;
    st.sync_delay_mean_s = s / static_cast<double>(sync_delays.size());
  }
  trace.add_value(st.dropped);
  st.trace_hash = trace.value();
  return st;
}

}  // namespace satdomain
