#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "satdomain/overhead.hpp"
#include "toy.hpp"

using namespace satdomain;
using satdomain::testing::at;
using satdomain::testing::make_snapshot;

namespace {

constexpr double kC = 299792.458;

FovConfig mask40() {
  FovConfig f;
  f.gs_mask_deg = 40.0;
  return f;
}

// Domain A: LEOs 0-2 under station 8; domain B: LEOs 3-7 under station 9.
struct TwoDomains {
  NetworkSnapshot snap;
  Coverage cov;
  DomainAssignment a;
};

TwoDomains two_domains() {
  std::vector<Vec3> leos;
  for (double lon : {-24.0, -22.0, -20.0}) leos.push_back(at(0, lon, 780));
  for (double lon : {16.0, 18.0, 20.0, 22.0, 24.0}) leos.push_back(at(0, lon, 780));
  TwoDomains t{make_snapshot(leos, {}, {{at(0, -22, 0)}, {at(0, 20, 0)}},
                             {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 5}, {5, 6}, {6, 7}}),
               {},
               DomainAssignment(8)};
  t.cov = compute_coverage(t.snap, mask40());
  for (NodeId i = 0; i < 8; ++i) t.a.controller_of[i] = i < 3 ? 8 : 9;
  return t;
}

double hop_cost(const NetworkSnapshot& s, NodeId a, NodeId b, double bytes, double bw) {
  return bytes * 8.0 / bw + distance(s.position(a), s.position(b)) / kC;
}

}  // namespace

TEST_CASE("control hops") {
  SUBCASE("directly under the controller") {
    const auto t = two_domains();
    CHECK(control_hops(1, t.a, t.snap, t.cov) == 1);
  }
  SUBCASE("chain where only the far end sees the controller") {
    auto s = make_snapshot({at(0, 0, 780), at(0, 4, 780), at(0, 8, 780)}, {}, {{at(0, 12, 0)}}, {{0, 1}, {1, 2}});
    const Coverage cov = compute_coverage(s, mask40());
    REQUIRE(cov.coverers[2].size() == 1);
    REQUIRE(cov.coverers[0].empty());
    DomainAssignment a(3);
    a.controller_of = {3, 3, 3};
    CHECK(control_hops(0, a, s, cov, {true}) == 3);
    CHECK(control_hops(1, a, s, cov, {true}) == 2);
    const ControlPlane cp(s, a, cov, {true});
    CHECK(cp.path(0).hops.size() == 3);
  }
}

TEST_CASE("flow overhead hand evaluation") {
  // LEO 1000 km straight above the station, B = 1 Mb/s, lambda = 2.
  auto s = make_snapshot({at(10, 10, 1000), at(10, 11, 1000)}, {}, {{at(10, 10, 0)}}, {{0, 1}});
  const Coverage cov = compute_coverage(s, FovConfig{});
  DomainAssignment a(2);
  a.controller_of = {2, 2};
  OverheadParams p;
  p.bandwidth.gs_leo = 1e6;
  TrafficMatrix tm;
  tm.num_leos = 2;
  tm.entries = {{0, 1, 2.0}};
  const ControlPlane cp(s, a, cov);
  CHECK(flow_overhead(a, tm, cp, p) == doctest::Approx(2.0 * (2.88e-4 + 1000.0 / kC)).epsilon(1e-12));
  CHECK(2.0 * (2.88e-4 + 1000.0 / kC) == doctest::Approx(2.0 * (2.88e-4 + 3.3356e-3)).epsilon(1e-4));

  TrafficMatrix none;
  none.num_leos = 2;
  CHECK(flow_overhead(a, none, cp, p) == 0.0);
  TrafficMatrix dbl = tm;
  dbl.entries[0].rate = 4.0;
  CHECK(flow_overhead(a, dbl, cp, p) == doctest::Approx(2.0 * flow_overhead(a, tm, cp, p)));
}

TEST_CASE("sync overhead hand evaluation") {
  const auto t = two_domains();
  OverheadParams p;
  p.f_sync_hz = 0.5;
  const ControlPlane cp(t.snap, t.a, t.cov);
  const SyncOverhead s = sync_overhead(t.a, t.snap, cp, p);

  // Intra: every LEO is one access hop from its station.
  auto intra_term = [&](std::vector<NodeId> members, NodeId k, double edges) {
    double worst = 0.0;
    for (NodeId i : members) {
      worst = std::max(worst, edges * 24.0 * 8.0 / 1e9 + distance(t.snap.position(i), t.snap.position(k)) / kC);
    }
    return worst;
  };
  const double intra = 0.5 * (intra_term({0, 1, 2}, 8, 2.0) + intra_term({3, 4, 5, 6, 7}, 9, 4.0));
  CHECK(std::abs(s.intra - intra) < 1e-12);
  const double prop = distance(t.snap.position(8), t.snap.position(9)) / kC;
  const double inter = 0.5 * std::max(3.0 * 24 * 8 / 1e10 + prop, 5.0 * 24 * 8 / 1e10 + prop);
  CHECK(std::abs(s.inter - inter) < 1e-12);

  OverheadParams p2 = p;
  p2.f_sync_hz = 1.0;
  const SyncOverhead s2 = sync_overhead(t.a, t.snap, cp, p2);
  CHECK(s2.intra == doctest::Approx(2.0 * s.intra));
  CHECK(s2.inter == doctest::Approx(2.0 * s.inter));

  auto single = make_snapshot({at(0, 19, 780), at(0, 21, 780)}, {}, {{at(0, 20, 0)}}, {{0, 1}});
  DomainAssignment b(2);
  b.controller_of = {2, 2};
  const Coverage cov1 = compute_coverage(single, mask40());
  CHECK(sync_overhead(b, single, ControlPlane(single, b, cov1), p).inter == 0.0);
}

TEST_CASE("migration overhead hand evaluation") {
  // LEO 1 sits between both stations and moves from station 3 to station 4.
  auto s = make_snapshot({at(0, -4, 780), at(0, 0, 780), at(0, 4, 780)}, {}, {{at(0, -4, 0)}, {at(0, 4, 0)}},
                         {{0, 1}, {1, 2}});
  const Coverage cov = compute_coverage(s, mask40());
  REQUIRE(cov.coverers[1].size() == 2);
  DomainAssignment prev(3), cur(3);
  prev.controller_of = {3, 3, 4};
  cur.controller_of = {3, 4, 4};
  TrafficMatrix tm;
  tm.num_leos = 3;
  tm.entries = {{1, 0, 3.0}, {2, 0, 5.0}};
  OverheadParams p;
  p.migration.per_sat_processing_s = 2e-3;
  const double T = 20.0;
  const auto m = migration_overhead(&prev, cur, tm, s, p, T);
  // Domain of station 4 = {1, 2}: live flows (3 + 5) * 10 s.
  const double w_st = 36.0 * 8.0 * 80.0 / 1e9;
  const double w_ho = 1.0 * (16.0 * 8.0 / 1e9 + 2e-3);
  CHECK(m.migrated == 1);
  CHECK(std::abs(m.w_mig - (1.0 / T) * (w_st + w_ho)) < 1e-15);

  CHECK(migration_overhead(&cur, cur, tm, s, p, T).w_mig == 0.0);
  CHECK(migration_overhead(nullptr, cur, tm, s, p, T).w_mig == 0.0);
  DomainAssignment two = cur;
  prev.controller_of = {4, 3, 3};
  CHECK(migration_overhead(&prev, two, tm, s, p, T).w_mig > m.w_mig);
}

TEST_CASE("path computation overhead hand evaluation") {
  auto s = make_snapshot({at(0, -1, 780), at(0, 0, 780), at(0, 1, 780), at(0, 2, 780)}, {},
                         {{at(0, 0, 0)}}, {{0, 1}, {1, 2}, {2, 3}});
  DomainAssignment a(4);
  a.controller_of.assign(4, 4);
  TrafficMatrix tm;
  tm.num_leos = 4;
  tm.entries = {{0, 3, 4.0}, {2, 1, 6.0}};
  OverheadParams p;
  p.capacity_override[4] = 100.0;
  const CptOverhead c = path_compute_overhead(a, tm, s, p);
  CHECK(c.intra == doctest::Approx(1.6).epsilon(1e-12));
  CHECK(c.inter == 0.0);
  p.capacity_override[4] = 200.0;
  CHECK(path_compute_overhead(a, tm, s, p).intra == doctest::Approx(0.8).epsilon(1e-12));
  CHECK(complexity_ops(Complexity::Cubic, 3) == 27.0);
  CHECK(complexity_ops(Complexity::NLogN, 8) == 24.0);
  CHECK(parse_complexity("n2") == Complexity::Quadratic);
}

TEST_CASE("objective, efficiency and constraint reporting") {
  const auto t = two_domains();
  TrafficMatrix tm;
  tm.num_leos = 8;
  tm.entries = {{0, 2, 3.0}, {0, 5, 2.0}, {4, 7, 1.0}, {6, 1, 0.5}};
  OverheadParams p;
  EvaluationInput in{&t.snap, &t.cov, &tm, nullptr, 15.0, false};
  const Evaluation ev = evaluate(t.a, in, p);
  REQUIRE(ev.report);
  const auto& r = *ev.report;
  CHECK(r.w_ctl == r.w_flow + r.w_sync_in + r.w_sync_out + r.w_mig);
  CHECK(r.objective == doctest::Approx(r.w_ctl + r.w_cpt_intra + r.w_cpt_inter));
  CHECK(*r.eta_control == doctest::Approx(r.w_flow / r.w_ctl));
  for (double v : {r.w_flow, r.w_sync_in, r.w_sync_out, r.w_mig, r.w_cpt_intra, r.w_cpt_inter}) CHECK(v >= 0.0);

  OverheadParams p0 = p;
  p0.tradeoff_lambda = 0.0;
  CHECK(evaluate(t.a, in, p0).report->objective == evaluate(t.a, in, p0).report->w_ctl);

  OverheadReport q;
  q.w_flow = 1.0;
  q.w_ctl = 1.0;
  CHECK(*control_efficiency(q) == 1.0);
  q.w_ctl = 3.0;
  CHECK(*control_efficiency(q) == doctest::Approx(1.0 / 3.0));
  q.w_ctl = 0.0;
  CHECK_FALSE(control_efficiency(q));

  DomainAssignment bad = t.a;
  bad.controller_of[0] = 9;  // LEO 0 is far outside station 9's view
  const Evaluation e2 = evaluate(bad, in, p);
  CHECK_FALSE(e2.report);
  CHECK(e2.constraints.count(Constraint::FovContainment) >= 1);
}

TEST_CASE("bandwidth homogeneity") {
  const auto t = two_domains();
  TrafficMatrix tm;
  tm.num_leos = 8;
  tm.entries = {{0, 2, 3.0}, {0, 5, 2.0}, {4, 7, 1.0}};
  auto w = [&](double c) {
    OverheadParams p;
    p.bandwidth.isl *= c;
    p.bandwidth.gs_leo *= c;
    p.bandwidth.meo_leo *= c;
    p.bandwidth.controller *= c;
    return flow_overhead(t.a, tm, ControlPlane(t.snap, t.a, t.cov), p);
  };
  // W(c) = T / c + P.
  CHECK((w(1) - w(2)) == doctest::Approx(2.0 * (w(2) - w(4))).epsilon(1e-9));
}

TEST_CASE("single-domain five-LEO toy: every term by hand") {
  std::vector<Vec3> leos;
  for (double lon : {-2.0, -1.0, 0.0, 1.0, 2.0}) leos.push_back(at(0, lon, 780));
  auto s = make_snapshot(leos, {}, {{at(0, 0, 0)}}, {{0, 1}, {1, 2}, {2, 3}, {3, 4}});
  const Coverage cov = compute_coverage(s, FovConfig{});
  DomainAssignment a(5);
  a.controller_of.assign(5, 5);
  TrafficMatrix tm;
  tm.num_leos = 5;
  tm.entries = {{0, 4, 2.0}, {3, 1, 1.0}};
  OverheadParams p;
  EvaluationInput in{&s, &cov, &tm, nullptr, 15.0, true};
  const auto r = *evaluate(a, in, p).report;
  const double w_flow = 2.0 * hop_cost(s, 0, 5, 36, 1e9) + 1.0 * hop_cost(s, 3, 5, 36, 1e9);
  double worst = 0.0;
  for (NodeId i = 0; i < 5; ++i) worst = std::max(worst, 4.0 * 24 * 8 / 1e9 + distance(s.position(i), s.position(5)) / kC);
  const double w_sync_in = p.f_sync_hz * worst;
  const double cpt = 25.0 / 1e5 * 3.0;
  CHECK(std::abs(r.w_flow - w_flow) < 1e-15);
  CHECK(std::abs(r.w_sync_in - w_sync_in) < 1e-15);
  CHECK(r.w_sync_out == 0.0);
  CHECK(r.w_mig == 0.0);
  CHECK(std::abs(r.w_cpt_intra - cpt) < 1e-15);
  CHECK(r.w_cpt_inter == 0.0);
  CHECK(std::abs(r.objective - (w_flow + w_sync_in + cpt)) < 1e-15);
  CHECK(*r.eta_control == doctest::Approx(w_flow / (w_flow + w_sync_in)));
}

TEST_CASE("misplaced LEOs pay extra hops") {
  // Ten LEOs in a line; only the eastern end sees the station when the whole line is forced onto it.
  std::vector<Vec3> leos;
  std::vector<std::pair<NodeId, NodeId>> edges;
  for (int i = 0; i < 10; ++i) {
    leos.push_back(at(0, 4.0 * i, 780));
    if (i) edges.push_back({static_cast<NodeId>(i - 1), static_cast<NodeId>(i)});
  }
  auto s = make_snapshot(leos, {}, {{at(0, 36, 0)}}, edges);
  const Coverage cov = compute_coverage(s, mask40());
  DomainAssignment a(10);
  a.controller_of.assign(10, 10);
  const ControlPlane cp(s, a, cov, {true});
  double mean_extra = 0.0;
  for (NodeId i = 0; i < 10; ++i) mean_extra += cp.hops(i) - 1;
  mean_extra /= 10.0;
  CHECK(mean_extra > 1.0);
}
