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

// Routes transpose messages through the UDP codec: each payload is cut into
// datagrams, encoded to datapath words, optionally captured, decoded and
// reassembled at the receiver.

#pragma once

#include <bit>
#include <cstring>
#include <mutex>
#include <optional>
#include <ostream>
#include <vector>

#include "mfft/dist_sim.hpp"
#include "mfft/net/datapath.hpp"
#include "mfft/net/pcap.hpp"

namespace mfft {

inline net::Ipv4Address node_ip(NodeCoord c) {
  if (c.u > 255 || c.v > 255) throw std::invalid_argument("node coordinate does not fit the address plan");
  return net::Ipv4Address::from_octets(10, 0, static_cast<std::uint8_t>(c.u), static_cast<std::uint8_t>(c.v));
}

inline net::MacAddress node_mac(NodeCoord c) {
  const auto ip = node_ip(c);
  return {{0x02, 0, 0, 0, static_cast<std::uint8_t>(ip.value >> 8), static_cast<std::uint8_t>(ip.value)}};
}

inline constexpr std::uint16_t kTransposePortXy = 5000;
inline constexpr std::uint16_t kTransposePortYz = 5001;

/// Datagrams needed for `bytes` of payload.
inline std::size_t packets_for(std::size_t bytes) {
  return bytes == 0 ? 1 : (bytes + net::kMaxUdpPayload - 1) / net::kMaxUdpPayload;
}

/// Complex words as little-endian (re, im) f64 pairs.
inline std::vector<std::uint8_t> pack_words(std::span<const Complex> v) {
  std::vector<std::uint8_t> out(v.size() * kComplexBytes);
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double parts[2] = {v[i].real(), v[i].imag()};
    for (int p = 0; p < 2; ++p) {
      auto bits = std::bit_cast<std::uint64_t>(parts[p]);
      for (int b = 0; b < 8; ++b) out[i * kComplexBytes + p * 8 + b] = static_cast<std::uint8_t>(bits >> (8 * b));
    }
  }
  return out;
}

inline std::vector<Complex> unpack_words(std::span<const std::uint8_t> b) {
  if (b.size() % kComplexBytes) throw std::invalid_argument("payload is not a whole number of complex words");
  std::vector<Complex> out(b.size() / kComplexBytes);
  for (std::size_t i = 0; i < out.size(); ++i) {
    double parts[2];
    for (int p = 0; p < 2; ++p) {
      std::uint64_t bits = 0;
      for (int k = 0; k < 8; ++k) bits |= std::uint64_t{b[i * kComplexBytes + p * 8 + k]} << (8 * k);
      parts[p] = std::bit_cast<double>(bits);
    }
    out[i] = {parts[0], parts[1]};
  }
  return out;
}

struct WireStats {
  std::size_t messages = 0;
  std::size_t frames = 0;
  std::size_t frame_bytes = 0;
  std::size_t words = 0;  // datapath words, i.e. transmit cycles
};

/// Node addresses are static, so the capture holds transpose datagrams only
/// and no ARP traffic. Safe to call from several threads.
class WireTransport {
 public:
  WireTransport(net::DatapathConfig dp, std::ostream* pcap = nullptr) : dp_(dp) {
    if (pcap) writer_.emplace(*pcap);
  }

  std::vector<Complex> operator()(const Message& m) {
    const auto bytes = pack_words(m.payload);
    net::FrameSpec spec{.dst_mac = node_mac(m.dst), .src_mac = node_mac(m.src), .src_ip = node_ip(m.src),
                        .dst_ip = node_ip(m.dst), .src_port = 0xC000,
                        .dst_port = m.fold == Fold::xy ? kTransposePortXy : kTransposePortYz};
    std::vector<std::uint8_t> received;
    received.reserve(bytes.size());
    std::lock_guard lock(mu_);
    ++stats_.messages;
    const std::size_t packets = packets_for(bytes.size());
    for (std::size_t p = 0; p < packets; ++p) {
      const std::size_t at = p * net::kMaxUdpPayload;
      const auto chunk = std::span(bytes).subspan(at, std::min(net::kMaxUdpPayload, bytes.size() - at));
      spec.identification = next_id_++;
      const auto words = net::encode_frame(spec, chunk, dp_);
      stats_.frames++;
      stats_.words += words.size();
      const auto frame = net::from_words(words, dp_);
      stats_.frame_bytes += frame.size();
      if (writer_) writer_->write(frame, static_cast<std::uint32_t>(stats_.frames / 1000000),
                                  static_cast<std::uint32_t>(stats_.frames % 1000000));
      const auto dgram = net::decode_frame(words, dp_);
      if (dgram.headers.spec() != spec) throw std::logic_error("wire: header round trip failed");
      received.insert(received.end(), dgram.payload.begin(), dgram.payload.end());
    }
    return unpack_words(received);
  }

  Transport transport() {
    return [this](const Message& m) { return (*this)(m); };
  }

  WireStats stats() const {
    std::lock_guard lock(mu_);
    return stats_;
  }

 private:
  net::DatapathConfig dp_;
  std::optional<net::PcapWriter> writer_;
  mutable std::mutex mu_;
  WireStats stats_;
  std::uint16_t next_id_ = 0;
};

}  // namespace mfft
