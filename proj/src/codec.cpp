#include "satdomain/codec.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace satdomain {

namespace {

class Writer {
 public:
  explicit Writer(std::uint8_t* out) : p_(out) {}
  void put(std::uint64_t v, int bytes) {
    for (int i = bytes - 1; i >= 0; --i) *p_++ = static_cast<std::uint8_t>(v >> (8 * i));
  }

 private:
  std::uint8_t* p_;
};

class Reader {
 public:
  explicit Reader(std::span<const std::uint8_t> in) : in_(in) {}
  std::uint64_t get(int bytes) {
    if (pos_ + static_cast<std::size_t>(bytes) > in_.size()) throw std::invalid_argument("truncated message");
    std::uint64_t v = 0;
    for (int i = 0; i < bytes; ++i) v = (v << 8) | in_[pos_++];
    return v;
  }
  std::size_t pos() const { return pos_; }

 private:
  std::span<const std::uint8_t> in_;
  std::size_t pos_ = 0;
};

void expect_length(std::span<const std::uint8_t> b, std::size_t n, const char* what) {
  if (b.size() != n) {
    throw std::invalid_argument(std::string(what) + ": expected " + std::to_string(n) + " bytes, got " +
                                std::to_string(b.size()));
  }
}

}  // namespace

std::array<std::uint8_t, kFlowUpdateBytes> encode_flow_update(const FlowUpdate& m) {
  std::array<std::uint8_t, kFlowUpdateBytes> out{};
  Writer w(out.data());
  w.put(m.command, 1);
  w.put(m.reserved, 1);
  w.put(m.idle_timeout, 2);
  w.put(m.hard_timeout, 2);
  w.put(m.priority, 2);
  w.put(m.buffer_id, 4);
  w.put(m.out_port, 4);
  w.put(m.out_group, 4);
  w.put(m.cookie, 8);
  w.put(m.flags, 2);
  w.put(m.match_src, 2);
  w.put(m.match_dst, 2);
  w.put(m.pad, 2);
  return out;
}

FlowUpdate decode_flow_update(std::span<const std::uint8_t> bytes) {
  expect_length(bytes, kFlowUpdateBytes, "flow update");
  Reader r(bytes);
  FlowUpdate m;
  m.command = static_cast<std::uint8_t>(r.get(1));
  m.reserved = static_cast<std::uint8_t>(r.get(1));
  m.idle_timeout = static_cast<std::uint16_t>(r.get(2));
  m.hard_timeout = static_cast<std::uint16_t>(r.get(2));
  m.priority = static_cast<std::uint16_t>(r.get(2));
  m.buffer_id = static_cast<std::uint32_t>(r.get(4));
  m.out_port = static_cast<std::uint32_t>(r.get(4));
  m.out_group = static_cast<std::uint32_t>(r.get(4));
  m.cookie = r.get(8);
  m.flags = static_cast<std::uint16_t>(r.get(2));
  m.match_src = static_cast<std::uint16_t>(r.get(2));
  m.match_dst = static_cast<std::uint16_t>(r.get(2));
  m.pad = static_cast<std::uint16_t>(r.get(2));
  return m;
}

std::array<std::uint8_t, kEdgeSyncBytes> encode_edge_sync(const EdgeSync& m) {
  const double milli = std::round(m.weight * 1000.0);
  if (!(milli >= 0.0 && milli <= 4294967295.0)) throw std::invalid_argument("edge sync weight out of range");
  if (m.timestamp_ms >> 48) throw std::invalid_argument("edge sync timestamp exceeds 48 bits");
  std::array<std::uint8_t, kEdgeSyncBytes> out{};
  Writer w(out.data());
  w.put(m.link_type, 1);
  w.put(m.status, 1);
  w.put(m.bandwidth_kbps, 4);
  w.put(static_cast<std::uint32_t>(milli), 4);
  w.put(m.src, 4);
  w.put(m.dst, 4);
  w.put(m.timestamp_ms, 6);
  return out;
}

EdgeSync decode_edge_sync(std::span<const std::uint8_t> bytes) {
  expect_length(bytes, kEdgeSyncBytes, "edge sync");
  Reader r(bytes);
  EdgeSync m;
  m.link_type = static_cast<std::uint8_t>(r.get(1));
  m.status = static_cast<std::uint8_t>(r.get(1));
  m.bandwidth_kbps = static_cast<std::uint32_t>(r.get(4));
  m.weight = static_cast<double>(r.get(4)) / 1000.0;
  m.src = static_cast<std::uint32_t>(r.get(4));
  m.dst = static_cast<std::uint32_t>(r.get(4));
  m.timestamp_ms = r.get(6);
  return m;
}

std::vector<std::uint8_t> encode_flow_request(const FlowRequest& m) {
  const std::size_t total = kFlowRequestFixedBytes + m.data.size();
  if (total > 0xffff) throw std::invalid_argument("flow request too long");
  std::vector<std::uint8_t> out(total);
  Writer w(out.data());
  w.put(m.version, 1);
  w.put(kFlowRequestType, 1);
  w.put(total, 2);
  w.put(m.xid, 4);
  w.put(m.buffer_id, 4);
  w.put(m.total_len, 2);
  w.put(m.reason, 1);
  w.put(m.table_id, 1);
  w.put(m.cookie, 8);
  w.put(m.match.network_type, 2);
  w.put(m.match.src_addr, 4);
  w.put(m.match.dst_addr, 4);
  w.put(m.match.src_port, 2);
  w.put(m.match.dst_port, 2);
  std::copy(m.data.begin(), m.data.end(), out.begin() + static_cast<long>(kFlowRequestFixedBytes));
  return out;
}

FlowRequest decode_flow_request(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < kFlowRequestFixedBytes) throw std::invalid_argument("flow request: truncated");
  Reader r(bytes);
  FlowRequest m;
  m.version = static_cast<std::uint8_t>(r.get(1));
  if (r.get(1) != kFlowRequestType) throw std::invalid_argument("flow request: wrong type tag");
  if (r.get(2) != bytes.size()) throw std::invalid_argument("flow request: length field mismatch");
  m.xid = static_cast<std::uint32_t>(r.get(4));
  m.buffer_id = static_cast<std::uint32_t>(r.get(4));
  m.total_len = static_cast<std::uint16_t>(r.get(2));
  m.reason = static_cast<std::uint8_t>(r.get(1));
  m.table_id = static_cast<std::uint8_t>(r.get(1));
  m.cookie = r.get(8);
  m.match.network_type = static_cast<std::uint16_t>(r.get(2));
  m.match.src_addr = static_cast<std::uint32_t>(r.get(4));
  m.match.dst_addr = static_cast<std::uint32_t>(r.get(4));
  m.match.src_port = static_cast<std::uint16_t>(r.get(2));
  m.match.dst_port = static_cast<std::uint16_t>(r.get(2));
  m.data.assign(bytes.begin() + static_cast<long>(r.pos()), bytes.end());
  return m;
}

std::array<std::uint8_t, kHandoverBytes> encode_handover(const Handover& m) {
  std::array<std::uint8_t, kHandoverBytes> out{};
  Writer w(out.data());
  w.put(m.leo, 4);
  w.put(m.old_controller, 4);
  w.put(m.new_controller, 4);
  w.put(m.timestamp_ms, 4);
  return out;
}

Handover decode_handover(std::span<const std::uint8_t> bytes) {
  expect_length(bytes, kHandoverBytes, "handover");
  Reader r(bytes);
  Handover m;
  m.leo = static_cast<std::uint32_t>(r.get(4));
  m.old_controller = static_cast<std::uint32_t>(r.get(4));
  m.new_controller = static_cast<std::uint32_t>(r.get(4));
  m.timestamp_ms = static_cast<std::uint32_t>(r.get(4));
  return m;
}

}  // namespace satdomain
