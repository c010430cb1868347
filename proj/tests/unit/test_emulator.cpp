#include <cmath>

#include "doctest.h"
#include "satdomain/codec.hpp"
#include "satdomain/emulator.hpp"
#include "toy.hpp"

using namespace satdomain;
using namespace satdomain::testing;

namespace {

// Two neighbouring LEOs directly above one ground station.
struct PairToy {
  SlotContext ctx;
  DomainAssignment a{2};
};

PairToy pair_toy(double duration = 15.0) {
  PairToy t;
  t.ctx = static_context(make_snapshot({at(0, -0.5, 780), at(0, 0.5, 780)}, {}, {{at(0, 0, 0)}}, {{0, 1}}), toy_fov(),
                         0, duration);
  t.a.controller_of = {2, 2};
  return t;
}

TrafficMatrix one_flow(double rate) {
  TrafficMatrix tm;
  tm.num_leos = 2;
  tm.entries.push_back({0, 1, rate});
  return tm;
}

std::size_t kind(MessageKind k) { return static_cast<std::size_t>(k); }

}  // namespace

TEST_CASE("gamma zero: no requests, sync traffic only") {
  const auto t = pair_toy();
  EmulatorParams p;
  p.gamma = 0.0;
  const auto st = run_slot(t.ctx, t.a, nullptr, one_flow(50.0), p, 1);
  CHECK(st.requests == 0);
  CHECK(st.drop_rate() == 0.0);
  CHECK(st.response_delays.empty());
  CHECK(st.bytes_sync() > 0);
  CHECK(st.bytes_flow() == 0);
}

TEST_CASE("single flow response delay matches the hand value") {
  const auto t = pair_toy();
  EmulatorParams p;
  const auto st = run_slot(t.ctx, t.a, nullptr, one_flow(1.0), p, 3);
  REQUIRE(st.requests > 0);
  CHECK(st.dropped == 0);
  const Vec3 gs = t.ctx.snapshot.position(2);
  const double d0 = norm(t.ctx.snapshot.position(0) - gs);
  const double d1 = norm(t.ctx.snapshot.position(1) - gs);
  const double c = constants::kLightSpeedKmS;
  const double up = 38.0 * 8.0 / 1e9 + d0 / c;
  const double service = 2.0 * 2.0 / 1e5;
  const double down = 36.0 * 8.0 / 1e9 + std::max(d0, d1) / c;
  for (double d : st.response_delays) CHECK(d == doctest::Approx(up + service + down).epsilon(1e-9));
}

TEST_CASE("overloaded controller drops nearly everything") {
  const auto t = pair_toy();
  EmulatorParams p;
  p.overhead.capacity_override[2] = 1.0;
  const auto st = run_slot(t.ctx, t.a, nullptr, one_flow(100.0), p, 1);
  CHECK(st.requests > 1000);
  CHECK(st.drop_rate() > 0.9);
}

TEST_CASE("message byte totals are count times wire size") {
  const auto toy = random_eight_leo_toy(2);
  const auto a = greedy_partition(toy.ctx);
  DomainAssignment prev = a;
  prev.controller_of[0] = prev.controller_of[0] == 8 ? 9 : 8;
  const auto st = run_slot(toy.ctx, a, &prev, toy.traffic, EmulatorParams{}, 4);
  CHECK(st.bytes[kind(MessageKind::FlowRequest)] == st.count[kind(MessageKind::FlowRequest)] * kFlowRequestFixedBytes);
  CHECK(st.bytes[kind(MessageKind::FlowUpdate)] == st.count[kind(MessageKind::FlowUpdate)] * kFlowUpdateBytes);
  CHECK(st.bytes[kind(MessageKind::EdgeSync)] == st.count[kind(MessageKind::EdgeSync)] * kEdgeSyncBytes);
  CHECK(st.bytes[kind(MessageKind::Handover)] == st.count[kind(MessageKind::Handover)] * kHandoverBytes);
  CHECK(st.handovers == 1);
  CHECK(st.count[kind(MessageKind::FlowRequest)] == st.requests);
}

TEST_CASE("same seed, same trace") {
  const auto toy = random_eight_leo_toy(3);
  const auto a = greedy_partition(toy.ctx);
  const auto x = run_slot(toy.ctx, a, nullptr, toy.traffic, EmulatorParams{}, 9);
  const auto y = run_slot(toy.ctx, a, nullptr, toy.traffic, EmulatorParams{}, 9);
  const auto z = run_slot(toy.ctx, a, nullptr, toy.traffic, EmulatorParams{}, 10);
  CHECK(x.trace_hash == y.trace_hash);
  CHECK(x.response_delays == y.response_delays);
  CHECK(x.trace_hash != z.trace_hash);
}

TEST_CASE("drop rate grows with load") {
  const auto t = pair_toy(300.0);
  EmulatorParams p;
  p.overhead.capacity_override[2] = 10.0;  // 0.4 s per request
  double last = -1.0;
  for (double g : {0.25, 0.5, 0.75, 1.0}) {
    p.gamma = g;
    const double dr = run_slot(t.ctx, t.a, nullptr, one_flow(10.0), p, 5).drop_rate();
    CHECK(dr >= last);
    last = dr;
  }
  CHECK(last > 0.5);
}

TEST_CASE("measured flow overhead tracks the analytic value") {
  const auto t = pair_toy(300.0);
  const TrafficMatrix tm = one_flow(100.0);
  EmulatorParams p;
  const auto st = run_slot(t.ctx, t.a, nullptr, tm, p, 6);
  const ControlPlane cp(t.ctx.snapshot, t.a, t.ctx.coverage);
  const double analytic = flow_overhead(t.a, tm, cp, p.overhead);
  CHECK(st.dropped == 0);
  CHECK(std::abs(st.measured_w_flow - analytic) / analytic < 0.03);
}

TEST_CASE("invalid inputs are rejected") {
  const auto t = pair_toy();
  EmulatorParams p;
  p.gamma = 1.5;
  CHECK_THROWS(run_slot(t.ctx, t.a, nullptr, one_flow(1.0), p, 1));
  DomainAssignment bad(2);
  CHECK_THROWS(run_slot(t.ctx, bad, nullptr, one_flow(1.0), EmulatorParams{}, 1));
}
