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

// Ethernet II + IPv4 + UDP frames as bytes. Preamble, SFD and FCS belong
// to the MAC and are not part of a frame here.

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "mfft/net/address.hpp"
#include "mfft/net/checksum.hpp"

namespace mfft::net {

inline constexpr std::uint16_t kEtherTypeIpv4 = 0x0800;
inline constexpr std::uint16_t kEtherTypeArp = 0x0806;
inline constexpr std::uint16_t kEtherTypeVlan = 0x8100;
inline constexpr std::uint8_t kProtocolUdp = 17;

inline constexpr std::size_t kEthernetHeaderBytes = 14;
inline constexpr std::size_t kVlanTagBytes = 4;
inline constexpr std::size_t kIpv4HeaderBytes = 20;
inline constexpr std::size_t kUdpHeaderBytes = 8;
inline constexpr std::size_t kMtu = 1500;
inline constexpr std::size_t kMaxUdpPayload = kMtu - kIpv4HeaderBytes - kUdpHeaderBytes;  // 1472

/// What the sender chooses. Lengths and checksums are derived.
struct FrameSpec {
  MacAddress dst_mac;
  MacAddress src_mac;
  Ipv4Address src_ip;
  Ipv4Address dst_ip;
  std::uint16_t src_port = 0;
  std::uint16_t dst_port = 0;
  std::uint8_t dscp = 0;  // 6 bits
  std::uint8_t ecn = 0;   // 2 bits
  std::uint16_t identification = 0;
  std::uint8_t flags = 0b010;  // DF
  std::uint8_t ttl = 64;

  friend bool operator==(const FrameSpec&, const FrameSpec&) = default;
};

struct EthernetHeader {
  MacAddress dst;
  MacAddress src;
  std::optional<std::uint16_t> vlan_tci;  // 802.1Q tag, decode only
  std::uint16_t ethertype = kEtherTypeIpv4;
  friend bool operator==(const EthernetHeader&, const EthernetHeader&) = default;
};

struct Ipv4Header {
  std::uint8_t version = 4;
  std::uint8_t header_length = 5;  // 32-bit words
  std::uint8_t dscp = 0;
  std::uint8_t ecn = 0;
  std::uint16_t total_length = 0;
  std::uint16_t identification = 0;
  std::uint8_t flags = 0;
  std::uint16_t fragment_offset = 0;
  std::uint8_t ttl = 0;
  std::uint8_t protocol = kProtocolUdp;
  std::uint16_t header_checksum = 0;
  Ipv4Address src;
  Ipv4Address dst;
  friend bool operator==(const Ipv4Header&, const Ipv4Header&) = default;
};

struct UdpHeader {
  std::uint16_t src_port = 0;
  std::uint16_t dst_port = 0;
  std::uint16_t length = 0;
  std::uint16_t checksum = 0;
  friend bool operator==(const UdpHeader&, const UdpHeader&) = default;
};

struct FrameHeaders {
  EthernetHeader eth;
  Ipv4Header ip;
  UdpHeader udp;

  FrameSpec spec() const {
    return {eth.dst,      eth.src,           ip.src,   ip.dst,  udp.src_port, udp.dst_port,
            ip.dscp,      ip.ecn,            ip.identification, ip.flags, ip.ttl};
  }
  friend bool operator==(const FrameHeaders&, const FrameHeaders&) = default;
};

struct UdpFrame {
  FrameHeaders headers;
  std::vector<std::uint8_t> payload;
};

inline std::size_t udp_frame_bytes(std::size_t payload) {
  return kEthernetHeaderBytes + kIpv4HeaderBytes + kUdpHeaderBytes + payload;
}

namespace detail {

inline std::uint16_t udp_checksum(Ipv4Address src, Ipv4Address dst, std::span<const std::uint8_t> udp) {
  std::uint32_t acc = (src.value >> 16) + (src.value & 0xFFFF) + (dst.value >> 16) + (dst.value & 0xFFFF);
  acc += kProtocolUdp;
  acc += static_cast<std::uint32_t>(udp.size());
  return checksum_fold(checksum_accumulate(udp, acc));
}

}  // namespace detail

/// Byte-exact frame, network order.
inline std::vector<std::uint8_t> serialize_udp(const FrameSpec& s, std::span<const std::uint8_t> payload) {
  if (payload.size() > kMaxUdpPayload)
    throw CodecException(CodecError::payload_too_large,
                         std::to_string(payload.size()) + " bytes, segmentation is not supported");
  if (s.dscp > 63 || s.ecn > 3 || s.flags > 7)
    throw std::invalid_argument("FrameSpec: dscp, ecn or flags out of range");
  std::vector<std::uint8_t> out;
  out.reserve(udp_frame_bytes(payload.size()));
  out.insert(out.end(), s.dst_mac.bytes.begin(), s.dst_mac.bytes.end());
  out.insert(out.end(), s.src_mac.bytes.begin(), s.src_mac.bytes.end());
  detail::put16(out, kEtherTypeIpv4);

  const std::size_t ip_at = out.size();
  const auto udp_len = static_cast<std::uint16_t>(kUdpHeaderBytes + payload.size());
  out.push_back(0x45);
  out.push_back(static_cast<std::uint8_t>(s.dscp << 2 | s.ecn));
  detail::put16(out, static_cast<std::uint16_t>(kIpv4HeaderBytes + udp_len));
  detail::put16(out, s.identification);
  detail::put16(out, static_cast<std::uint16_t>(s.flags << 13));
  out.push_back(s.ttl);
  out.push_back(kProtocolUdp);
  detail::put16(out, 0);
  detail::put32(out, s.src_ip.value);
  detail::put32(out, s.dst_ip.value);
  const std::uint16_t ip_sum = internet_checksum(std::span(out).subspan(ip_at, kIpv4HeaderBytes));
  out[ip_at + 10] = static_cast<std::uint8_t>(ip_sum >> 8);
  out[ip_at + 11] = static_cast<std::uint8_t>(ip_sum);

  const std::size_t udp_at = out.size();
  detail::put16(out, s.src_port);
  detail::put16(out, s.dst_port);
  detail::put16(out, udp_len);
  detail::put16(out, 0);
  out.insert(out.end(), payload.begin(), payload.end());
  std::uint16_t udp_sum = detail::udp_checksum(s.src_ip, s.dst_ip, std::span(out).subspan(udp_at));
  if (udp_sum == 0) udp_sum = 0xFFFF;  // zero means "no checksum"
  out[udp_at + 6] = static_cast<std::uint8_t>(udp_sum >> 8);
  out[udp_at + 7] = static_cast<std::uint8_t>(udp_sum);
  return out;
}

/// Reads the Ethernet header, skipping an 802.1Q tag if present. Returns the
/// header and the offset of the L3 payload.
inline std::pair<EthernetHeader, std::size_t> parse_ethernet(std::span<const std::uint8_t> b) {
  if (b.size() < kEthernetHeaderBytes) throw CodecException(CodecError::truncated_frame, "short Ethernet header");
  EthernetHeader eth;
  std::copy_n(b.begin(), 6, eth.dst.bytes.begin());
  std::copy_n(b.begin() + 6, 6, eth.src.bytes.begin());
  std::size_t at = 12;
  std::uint16_t type = detail::get16(&b[at]);
  if (type == kEtherTypeVlan) {
    if (b.size() < kEthernetHeaderBytes + kVlanTagBytes)
      throw CodecException(CodecError::truncated_frame, "short 802.1Q tag");
    eth.vlan_tci = detail::get16(&b[at + 2]);
    at += kVlanTagBytes;
    type = detail::get16(&b[at]);
  }
  eth.ethertype = type;
  return {eth, at + 2};
}

/// Trailing bytes past the IPv4 total length (MAC padding) are ignored.
inline UdpFrame parse_udp(std::span<const std::uint8_t> b) {
  UdpFrame f;
  auto [eth, at] = parse_ethernet(b);
  f.headers.eth = eth;
  if (eth.ethertype != kEtherTypeIpv4)
    throw CodecException(CodecError::unsupported_protocol, "ethertype is not IPv4");
  const auto l3 = b.subspan(at);
  if (l3.size() < kIpv4HeaderBytes) throw CodecException(CodecError::truncated_frame, "short IPv4 header");
  // Checksum first, so that any corrupted header bit reports as a checksum error.
  if (internet_checksum(l3.first(kIpv4HeaderBytes)) != 0)
    throw CodecException(CodecError::checksum_mismatch, "IPv4 header");

  Ipv4Header& ip = f.headers.ip;
  ip.version = l3[0] >> 4;
  ip.header_length = l3[0] & 0xF;
  ip.dscp = l3[1] >> 2;
  ip.ecn = l3[1] & 3;
  ip.total_length = detail::get16(&l3[2]);
  ip.identification = detail::get16(&l3[4]);
  ip.flags = static_cast<std::uint8_t>(l3[6] >> 5);
  ip.fragment_offset = detail::get16(&l3[6]) & 0x1FFF;
  ip.ttl = l3[8];
  ip.protocol = l3[9];
  ip.header_checksum = detail::get16(&l3[10]);
  ip.src = {detail::get32(&l3[12])};
  ip.dst = {detail::get32(&l3[16])};
  if (ip.version != 4) throw CodecException(CodecError::unsupported_protocol, "IP version " + std::to_string(ip.version));
  if (ip.header_length != 5) throw CodecException(CodecError::unsupported_protocol, "IPv4 options");
  if ((ip.flags & 1) || ip.fragment_offset != 0) throw CodecException(CodecError::unsupported_protocol, "IPv4 fragment");
  if (ip.protocol != kProtocolUdp)
    throw CodecException(CodecError::unsupported_protocol, "IP protocol " + std::to_string(ip.protocol));
  if (ip.total_length < kIpv4HeaderBytes + kUdpHeaderBytes)
    throw CodecException(CodecError::malformed_header, "IPv4 total length too small");
  if (l3.size() < ip.total_length) throw CodecException(CodecError::truncated_frame, "IPv4 total length exceeds frame");

  const auto udp = l3.subspan(kIpv4HeaderBytes, ip.total_length - kIpv4HeaderBytes);
  UdpHeader& u = f.headers.udp;
  u.src_port = detail::get16(&udp[0]);
  u.dst_port = detail::get16(&udp[2]);
  u.length = detail::get16(&udp[4]);
  u.checksum = detail::get16(&udp[6]);
  if (u.length != udp.size()) throw CodecException(CodecError::malformed_header, "UDP length disagrees with IPv4");
  if (u.checksum != 0 && detail::udp_checksum(ip.src, ip.dst, udp) != 0)
    throw CodecException(CodecError::checksum_mismatch, "UDP");
  f.payload.assign(udp.begin() + kUdpHeaderBytes, udp.end());
  return f;
}

}  // namespace mfft::net
