#pragma once

#include <cstdint>
#include <vector>

#include "satdomain/overhead.hpp"
#include "satdomain/partition.hpp"

namespace satdomain {

enum class MessageKind { FlowRequest, FlowUpdate, EdgeSync, Handover };

struct EmulatorParams {
  OverheadParams overhead;
  double queue_window_s = 1.0;  // a request is dropped when backlog + service exceeds this
  double gamma = 1.0;           // arrivals are thinned to this fraction
  bool relay_access = false;    // centralized baseline reaches LEOs through ground relays
};

struct EmulationStats {
  int slot_index = 0;
  double duration = 0.0;
  std::size_t requests = 0;
  std::size_t dropped = 0;
  std::size_t intra_requests = 0;
  std::size_t inter_requests = 0;
  std::vector<double> response_delays;  // completed requests, creation order
  double mean_response_s = 0.0;
  double median_response_s = 0.0;
  double p95_response_s = 0.0;
  double sync_delay_mean_s = 0.0;
  std::size_t count[4] = {0, 0, 0, 0};  // by MessageKind
  std::size_t bytes[4] = {0, 0, 0, 0};
  double measured_w_flow = 0.0;  // sum over requests of control-path cost / duration
  std::size_t handovers = 0;
  std::size_t events = 0;
  std::uint64_t trace_hash = 0;

  double drop_rate() const { return requests ? static_cast<double>(dropped) / static_cast<double>(requests) : 0.0; }
  std::size_t bytes_flow() const {
    return bytes[static_cast<int>(MessageKind::FlowRequest)] + bytes[static_cast<int>(MessageKind::FlowUpdate)];
  }
  std::size_t bytes_sync() const { return bytes[static_cast<int>(MessageKind::EdgeSync)]; }
  std::size_t bytes_ho() const { return bytes[static_cast<int>(MessageKind::Handover)]; }
};

/// FNV-1a, 64 bit.
class TraceHash {
 public:
  void add(const void* data, std::size_t n);
  template <class T>
  void add_value(const T& v) {
    add(&v, sizeof(T));
  }
  std::uint64_t value() const { return h_; }

 private:
  std::uint64_t h_ = 0xcbf29ce484222325ULL;
};

/// Per-pair arrival stream seed, shared by every strategy and gamma.
std::uint64_t arrival_seed(std::uint64_t seed, int slot, NodeId src, NodeId dst);

/// Discrete-event run of one slot. `previous` drives the slot-end handover messages.
EmulationStats run_slot(const SlotContext& ctx, const DomainAssignment& a, const DomainAssignment* previous,
                        const TrafficMatrix& traffic, const EmulatorParams& params, std::uint64_t seed);

}  // namespace satdomain
