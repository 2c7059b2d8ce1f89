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

// The core's streaming interface: one fixed-width word per clock, a byte
// enable on the last word, no buffering.

#pragma once

#include <algorithm>
#include <array>
#include <bit>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "mfft/net/frame.hpp"

namespace mfft::net {

enum class LineRate { g1, g10, g40, g100 };

inline std::string to_string(LineRate r) {
  switch (r) {
    case LineRate::g1: return "1G";
    case LineRate::g10: return "10G";
    case LineRate::g40: return "40G";
    case LineRate::g100: return "100G";
  }
  return "?";
}

struct DatapathConfig {
  LineRate rate = LineRate::g10;
  unsigned width_bits = 64;
  double clock_mhz = 156.25;

  unsigned word_bytes() const { return width_bits / 8; }
  double line_rate_bps() const {
    switch (rate) {
      case LineRate::g1: return 1e9;
      case LineRate::g10: return 10e9;
      case LineRate::g40: return 40e9;
      case LineRate::g100: return 100e9;
    }
    return 0;
  }
  double datapath_bps() const { return width_bits * clock_mhz * 1e6; }

  friend bool operator==(const DatapathConfig&, const DatapathConfig&) = default;
};

/// The supported (rate, width, clock) rows. 40G comes in two widths.
inline constexpr std::array<DatapathConfig, 5> kDatapaths = {{
    {LineRate::g1, 8, 125.0},
    {LineRate::g10, 64, 156.25},
    {LineRate::g40, 128, 322.22},
    {LineRate::g40, 256, 322.22},
    {LineRate::g100, 512, 322.22},
}};

inline DatapathConfig make_datapath(LineRate rate, unsigned width_bits) {
  for (const auto& d : kDatapaths)
    if (d.rate == rate && d.width_bits == width_bits) return d;
  throw std::invalid_argument("no " + to_string(rate) + " datapath with " + std::to_string(width_bits) + "-bit words");
}

/// Default width of each rate class.
inline DatapathConfig make_datapath(LineRate rate) {
  for (const auto& d : kDatapaths)
    if (d.rate == rate) return d;
  throw std::invalid_argument("unknown line rate");
}

struct DatapathWord {
  std::vector<std::uint8_t> data;  // always word_bytes long
  std::uint64_t keep = 0;          // byte enable, bit i for data[i]
  bool last = false;
};

inline std::size_t transmit_cycles(std::size_t frame_bytes, const DatapathConfig& dp) {
  return (frame_bytes + dp.word_bytes() - 1) / dp.word_bytes();
}

namespace detail {

inline std::uint64_t keep_mask(std::size_t bytes) {
  return bytes >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << bytes) - 1;
}

}  // namespace detail

inline std::vector<DatapathWord> to_words(std::span<const std::uint8_t> frame, const DatapathConfig& dp) {
  const std::size_t w = dp.word_bytes();
  std::vector<DatapathWord> words;
  words.reserve(transmit_cycles(frame.size(), dp));
  for (std::size_t at = 0; at < frame.size(); at += w) {
    const std::size_t n = std::min(w, frame.size() - at);
    DatapathWord word{std::vector<std::uint8_t>(w, 0), detail::keep_mask(n), at + n == frame.size()};
    std::copy_n(frame.begin() + static_cast<std::ptrdiff_t>(at), n, word.data.begin());
    words.push_back(std::move(word));
  }
  return words;
}

inline std::vector<std::uint8_t> from_words(std::span<const DatapathWord> words, const DatapathConfig& dp) {
  const std::size_t w = dp.word_bytes();
  if (words.empty()) throw CodecException(CodecError::truncated_frame, "empty word stream");
  std::vector<std::uint8_t> out;
  for (std::size_t i = 0; i < words.size(); ++i) {
    const auto& word = words[i];
    if (word.data.size() != w) throw CodecException(CodecError::malformed_header, "word width mismatch");
    const bool final = i + 1 == words.size();
    if (word.last != final)
      throw CodecException(final ? CodecError::truncated_frame : CodecError::malformed_header,
                           final ? "stream ends without a last word" : "last flag before end of stream");
    std::size_t n = w;
    if (final) {
      n = static_cast<std::size_t>(std::popcount(word.keep));
      if (n == 0 || word.keep != detail::keep_mask(n))
        throw CodecException(CodecError::malformed_header, "byte enable must be a non-empty prefix");
    } else if (word.keep != detail::keep_mask(w)) {
      throw CodecException(CodecError::malformed_header, "partial word before the last");
    }
    out.insert(out.end(), word.data.begin(), word.data.begin() + static_cast<std::ptrdiff_t>(n));
  }
  return out;
}

inline std::vector<DatapathWord> encode_frame(const FrameSpec& spec, std::span<const std::uint8_t> payload,
                                              const DatapathConfig& dp) {
  return to_words(serialize_udp(spec, payload), dp);
}

inline UdpFrame decode_frame(std::span<const DatapathWord> words, const DatapathConfig& dp) {
  return parse_udp(from_words(words, dp));
}

/// Preamble+SFD (8), Ethernet header (14), FCS (4) and inter-packet gap (12).
inline constexpr std::size_t kEthernetOverheadBytes = 38;

/// Best-case UDP payload throughput at line rate.
inline double udp_goodput_bps(const DatapathConfig& dp, std::size_t payload_bytes,
                              std::size_t overhead_bytes = kEthernetOverheadBytes) {
  const double on_wire =
      static_cast<double>(payload_bytes + kIpv4HeaderBytes + kUdpHeaderBytes + overhead_bytes);
  return dp.line_rate_bps() * static_cast<double>(payload_bytes) / on_wire;
}

}  // namespace mfft::net
