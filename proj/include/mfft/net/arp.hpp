// Copyright 2026 The mfft Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// ARP over Ethernet, the IP-to-MAC cache and a minimal UDP/IP endpoint that
// resolves addresses on first use.

#pragma once

#include <algorithm>
#include <cstdint>
#include <deque>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "mfft/net/frame.hpp"

namespace mfft::net {

inline constexpr std::size_t kArpPacketBytes = 28;

enum class ArpOp : std::uint16_t { request = 1, reply = 2 };

struct ArpPacket {
  ArpOp op = ArpOp::request;
  MacAddress sender_mac;
  Ipv4Address sender_ip;
  MacAddress target_mac;  // zero in a request
  Ipv4Address target_ip;
  friend bool operator==(const ArpPacket&, const ArpPacket&) = default;
};

/// Requests are broadcast, replies go to the requester.
inline std::vector<std::uint8_t> serialize_arp(const ArpPacket& a) {
  std::vector<std::uint8_t> out;
  out.reserve(kEthernetHeaderBytes + kArpPacketBytes);
  const MacAddress dst = a.op == ArpOp::request ? MacAddress::broadcast() : a.target_mac;
  out.insert(out.end(), dst.bytes.begin(), dst.bytes.end());
  out.insert(out.end(), a.sender_mac.bytes.begin(), a.sender_mac.bytes.end());
  detail::put16(out, kEtherTypeArp);
  detail::put16(out, 1);  // Ethernet
  detail::put16(out, kEtherTypeIpv4);
  out.push_back(6);
  out.push_back(4);
  detail::put16(out, static_cast<std::uint16_t>(a.op));
  out.insert(out.end(), a.sender_mac.bytes.begin(), a.sender_mac.bytes.end());
  detail::put32(out, a.sender_ip.value);
  out.insert(out.end(), a.target_mac.bytes.begin(), a.target_mac.bytes.end());
  detail::put32(out, a.target_ip.value);
  return out;
}

inline ArpPacket parse_arp(std::span<const std::uint8_t> b) {
  auto [eth, at] = parse_ethernet(b);
  if (eth.ethertype != kEtherTypeArp) throw CodecException(CodecError::unsupported_protocol, "ethertype is not ARP");
  if (b.size() < at + kArpPacketBytes) throw CodecException(CodecError::truncated_frame, "short ARP packet");
  const auto* p = &b[at];
  if (detail::get16(p) != 1 || detail::get16(p + 2) != kEtherTypeIpv4 || p[4] != 6 || p[5] != 4)
    throw CodecException(CodecError::unsupported_protocol, "ARP for something other than IPv4 over Ethernet");
  const std::uint16_t op = detail::get16(p + 6);
  if (op != 1 && op != 2) throw CodecException(CodecError::malformed_header, "ARP opcode " + std::to_string(op));
  ArpPacket a;
  a.op = static_cast<ArpOp>(op);
  std::copy_n(p + 8, 6, a.sender_mac.bytes.begin());
  a.sender_ip = {detail::get32(p + 14)};
  std::copy_n(p + 18, 6, a.target_mac.bytes.begin());
  a.target_ip = {detail::get32(p + 24)};
  return a;
}

/// Fixed-capacity IP-to-MAC table. When full, the entry inserted longest
/// ago is dropped; refreshing a known address keeps its original slot.
class ArpCache {
 public:
  static constexpr std::size_t kCapacity = 256;

  std::optional<MacAddress> lookup(Ipv4Address ip) const {
    auto it = table_.find(ip);
    if (it == table_.end()) return std::nullopt;
    return it->second;
  }

  /// Returns the evicted address, if any.
  std::optional<Ipv4Address> insert(Ipv4Address ip, MacAddress mac) {
    auto it = table_.find(ip);
    if (it != table_.end()) {
      it->second = mac;
      return std::nullopt;
    }
    std::optional<Ipv4Address> evicted;
    if (order_.size() == kCapacity) {
      evicted = order_.front();
      table_.erase(order_.front());
      order_.pop_front();
    }
    table_.emplace(ip, mac);
    order_.push_back(ip);
    return evicted;
  }

  std::size_t size() const { return order_.size(); }
  void clear() {
    table_.clear();
    order_.clear();
  }

 private:
  std::map<Ipv4Address, MacAddress> table_;
  std::deque<Ipv4Address> order_;  // insertion order
};

/// One network endpoint. Sending to an unknown address emits an ARP request
/// and holds the datagram until the reply arrives; there is no retry.
class UdpIpCore {
 public:
  using Bytes = std::vector<std::uint8_t>;

  struct Received {
    std::optional<UdpFrame> datagram;
    std::vector<Bytes> transmit;  // frames the core sends in response
  };

  UdpIpCore(MacAddress mac, Ipv4Address ip) : mac_(mac), ip_(ip) {}

  MacAddress mac() const { return mac_; }
  Ipv4Address ip() const { return ip_; }
  ArpCache& cache() { return cache_; }
  const ArpCache& cache() const { return cache_; }
  std::size_t pending() const { return pending_.size(); }

  /// Frames to put on the wire now: the datagram itself, or an ARP request.
  std::vector<Bytes> send(Ipv4Address dst, std::uint16_t src_port, std::uint16_t dst_port,
                          std::span<const std::uint8_t> payload) {
    if (payload.size() > kMaxUdpPayload)
      throw CodecException(CodecError::payload_too_large, std::to_string(payload.size()) + " bytes");
    FrameSpec spec;
    spec.src_mac = mac_;
    spec.src_ip = ip_;
    spec.dst_ip = dst;
    spec.src_port = src_port;
    spec.dst_port = dst_port;
    spec.identification = next_id_++;
    if (auto mac = cache_.lookup(dst)) {
      spec.dst_mac = *mac;
      return {serialize_udp(spec, payload)};
    }
    const bool asked = std::any_of(pending_.begin(), pending_.end(), [&](const auto& p) { return p.spec.dst_ip == dst; });
    pending_.push_back({spec, Bytes(payload.begin(), payload.end())});
    if (asked) return {};
    return {serialize_arp({ArpOp::request, mac_, ip_, MacAddress{}, dst})};
  }

  /// Frames not addressed to this endpoint are dropped silently.
  Received receive(std::span<const std::uint8_t> frame) {
    Received r;
    const auto [eth, at] = parse_ethernet(frame);
    if (eth.dst != mac_ && eth.dst != MacAddress::broadcast()) return r;
    if (eth.ethertype == kEtherTypeArp) {
      const ArpPacket a = parse_arp(frame);
      if (a.target_ip != ip_) return r;
      cache_.insert(a.sender_ip, a.sender_mac);
      if (a.op == ArpOp::request) r.transmit.push_back(serialize_arp({ArpOp::reply, mac_, ip_, a.sender_mac, a.sender_ip}));
      flush(a.sender_ip, r.transmit);
      return r;
    }
    UdpFrame f = parse_udp(frame);
    if (f.headers.ip.dst != ip_) return r;
    r.datagram = std::move(f);
    return r;
  }

 private:
  struct Pending {
    FrameSpec spec;
    Bytes payload;
  };

  void flush(Ipv4Address ip, std::vector<Bytes>& out) {
    const auto mac = cache_.lookup(ip);
    for (auto it = pending_.begin(); it != pending_.end();) {
      if (it->spec.dst_ip == ip) {
        it->spec.dst_mac = *mac;
        out.push_back(serialize_udp(it->spec, it->payload));
        it = pending_.erase(it);
      } else {
        ++it;
      }
    }
  }

  MacAddress mac_;
  Ipv4Address ip_;
  ArpCache cache_;
  std::deque<Pending> pending_;
  std::uint16_t next_id_ = 0;
};

}  // namespace mfft::net
