#include "satdomain/corg.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

namespace satdomain {

double velocity_divergence(const Vec3& vi, const Vec3& vj, double mig_unit_s) {
  return norm(normalized(vi) - normalized(vj)) / 2.0 * mig_unit_s;
}

PairCosts link_costs(double rate_ij, double rate_ji, double bandwidth, double distance_km, const Vec3& vel_i,
                     const Vec3& vel_j, bool mobile_pair, const OverheadParams& p) {
  const double prop = distance_km / constants::kLightSpeedKmS;
  PairCosts c;
  c.flow = (rate_ij + rate_ji) * (p.m_fl_bytes * 8.0 / bandwidth + prop);
  c.sync = p.f_sync_hz * (p.m_sync_bytes * 8.0 / bandwidth + prop);
  c.mig = mobile_pair ? velocity_divergence(vel_i, vel_j, p.mig_unit_s) : 0.0;
  return c;
}

PairCosts pairwise_costs(NodeId i, NodeId j, const TrafficMatrix& traffic, const NetworkSnapshot& snap,
                         const OverheadParams& p) {
  return link_costs(traffic.rate(i, j), traffic.rate(j, i), p.bandwidth.isl,
                    distance(snap.position(i), snap.position(j)), snap.velocity(i), snap.velocity(j), true, p);
}

double edge_weight(const PairCosts& c, double alpha, double beta) {
  if (alpha < 0.0 || beta < 0.0 || alpha + beta > 1.0) {
    throw std::invalid_argument("edge_weight: need alpha, beta >= 0 and alpha + beta <= 1");
  }
  return alpha * c.flow + beta * c.sync + (1.0 - alpha - beta) * c.mig;
}

Corg build_corg(const OverlapRegion& region, const TrafficMatrix& traffic, const NetworkSnapshot& snap,
                const Coverage& cov, const OverheadParams& p) {
  Corg g;
  g.node_ids = region.leo_ids;
  g.num_leos = region.leo_ids.size();
  g.virtual_flags.assign(g.num_leos, false);
  for (NodeId k : region.competing_controller_ids) {
    g.node_ids.push_back(k);
    g.virtual_flags.push_back(true);
  }
  std::vector<long> local(snap.num_leos(), -1);
  for (std::size_t a = 0; a < g.num_leos; ++a) local[g.node_ids[a]] = static_cast<long>(a);

  for (const auto& [u, v] : snap.isl->edges) {
    if (local[u] < 0 || local[v] < 0) continue;
    const double xi = edge_weight(pairwise_costs(u, v, traffic, snap, p), p.alpha, p.beta);
    g.edges.push_back({static_cast<std::size_t>(local[u]), static_cast<std::size_t>(local[v]), xi});
  }
  const auto out = traffic.outgoing();
  for (std::size_t a = 0; a < g.num_leos; ++a) {
    const NodeId i = g.node_ids[a];
    for (std::size_t b = g.num_leos; b < g.size(); ++b) {
      const NodeId k = g.node_ids[b];
      if (!cov.covers(k, i)) continue;
      const Role role = snap.role(k);
      const PairCosts c = link_costs(i < out.size() ? out[i] : 0.0, 0.0, p.bandwidth.of(access_class(role)),
                                     distance(snap.position(i), snap.position(k)), snap.velocity(i),
                                     snap.velocity(k), role == Role::Meo, p);
      g.edges.push_back({a, b, edge_weight(c, p.alpha, p.beta)});
    }
  }
  std::sort(g.edges.begin(), g.edges.end(),
            [](const CorgEdge& x, const CorgEdge& y) { return std::pair{x.a, x.b} < std::pair{y.a, y.b}; });
  return g;
}

void write_corg_edges(std::ostream& os, const Corg& g) {
  os << "node_a,node_b,virtual_a,virtual_b,xi\n";
  for (const auto& e : g.edges) {
    os << g.node_ids[e.a] << ',' << g.node_ids[e.b] << ',' << int(g.virtual_flags[e.a]) << ','
       << int(g.virtual_flags[e.b]) << ',' << e.xi << '\n';
  }
}

double default_sigma(const Corg& g) {
  std::vector<double> xs;
  for (const auto& e : g.edges) {
    if (e.xi > 0.0) xs.push_back(e.xi);
  }
  if (xs.empty()) return 1.0;
  std::sort(xs.begin(), xs.end());
  const std::size_t h = xs.size() / 2;
  const double median = xs.size() % 2 ? xs[h] : 0.5 * (xs[h - 1] + xs[h]);
  return std::sqrt(median / 2.0);
}

SimilarityMatrix similarity(const Corg& g, std::optional<double> sigma) {
  SimilarityMatrix sm;
  sm.sigma = sigma.value_or(default_sigma(g));
  if (!(sm.sigma > 0.0)) throw std::invalid_argument("similarity: sigma must be > 0");
  const double denom = 2.0 * sm.sigma * sm.sigma;
  std::vector<Eigen::Triplet<double>> t;
  t.reserve(g.size() + 2 * g.edges.size());
  for (std::size_t i = 0; i < g.size(); ++i) t.emplace_back(static_cast<int>(i), static_cast<int>(i), 1.0);
  for (const auto& e : g.edges) {
    const double s = std::exp(-e.xi / denom);
    t.emplace_back(static_cast<int>(e.a), static_cast<int>(e.b), s);
    t.emplace_back(static_cast<int>(e.b), static_cast<int>(e.a), s);
  }
  const auto n = static_cast<Eigen::Index>(g.size());
  sm.s.resize(n, n);
  sm.s.setFromTriplets(t.begin(), t.end());
  sm.s.makeCompressed();
  return sm;
}

}  // namespace satdomain
