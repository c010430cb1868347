#pragma once
// Big-endian control-message layouts. See docs/wire_formats.md.

#include <array>
#include <cstdint>
#include <span>
#include <vector>

namespace satdomain {

inline constexpr std::size_t kFlowUpdateBytes = 36;
inline constexpr std::size_t kEdgeSyncBytes = 24;
inline constexpr std::size_t kHandoverBytes = 16;
inline constexpr std::size_t kFlowRequestHeaderBytes = 8;
inline constexpr std::size_t kFlowRequestFixedBytes = 38;  // header + fixed content
inline constexpr std::uint8_t kFlowRequestType = 10;

struct FlowUpdate {
  std::uint8_t command = 0;
  std::uint8_t reserved = 0;
  std::uint16_t idle_timeout = 0;
  std::uint16_t hard_timeout = 0;
  std::uint16_t priority = 0;
  std::uint32_t buffer_id = 0;
  std::uint32_t out_port = 0;
  std::uint32_t out_group = 0;
  std::uint64_t cookie = 0;
  std::uint16_t flags = 0;
  std::uint16_t match_src = 0;
  std::uint16_t match_dst = 0;
  std::uint16_t pad = 0;
  bool operator==(const FlowUpdate&) const = default;
};

std::array<std::uint8_t, kFlowUpdateBytes> encode_flow_update(const FlowUpdate& m);
FlowUpdate decode_flow_update(std::span<const std::uint8_t> bytes);

struct EdgeSync {
  std::uint8_t link_type = 0;
  std::uint8_t status = 0;
  std::uint32_t bandwidth_kbps = 0;
  double weight = 0.0;  // carried as round(weight * 1000) in a u32
  std::uint32_t src = 0;
  std::uint32_t dst = 0;
  std::uint64_t timestamp_ms = 0;  // 48 bits on the wire
};

std::array<std::uint8_t, kEdgeSyncBytes> encode_edge_sync(const EdgeSync& m);
EdgeSync decode_edge_sync(std::span<const std::uint8_t> bytes);

struct FlowMatch {
  std::uint16_t network_type = 0;
  std::uint32_t src_addr = 0;
  std::uint32_t dst_addr = 0;
  std::uint16_t src_port = 0;
  std::uint16_t dst_port = 0;
  bool operator==(const FlowMatch&) const = default;
};

struct FlowRequest {
  std::uint8_t version = 4;
  std::uint32_t xid = 0;
  std::uint32_t buffer_id = 0;
  std::uint16_t total_len = 0;
  std::uint8_t reason = 0;
  std::uint8_t table_id = 0;
  std::uint64_t cookie = 0;
  FlowMatch match;
  std::vector<std::uint8_t> data;  // leading bytes of the unmatched packet
  bool operator==(const FlowRequest&) const = default;
};

/// Header (version, type, length, xid) followed by content; length covers the whole message.
std::vector<std::uint8_t> encode_flow_request(const FlowRequest& m);
FlowRequest decode_flow_request(std::span<const std::uint8_t> bytes);

struct Handover {
  std::uint32_t leo = 0;
  std::uint32_t old_controller = 0;
  std::uint32_t new_controller = 0;
  std::uint32_t timestamp_ms = 0;
  bool operator==(const Handover&) const = default;
};

std::array<std::uint8_t, kHandoverBytes> encode_handover(const Handover& m);
Handover decode_handover(std::span<const std::uint8_t> bytes);

}  // namespace satdomain
