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

// MAC and IPv4 addresses, codec errors and big-endian helpers.

#pragma once

#include <array>
#include <charconv>
#include <compare>
#include <cstdint>
#include <cstdio>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace mfft::net {

struct MacAddress {
  std::array<std::uint8_t, 6> bytes{};

  static constexpr MacAddress broadcast() { return {{0xff, 0xff, 0xff, 0xff, 0xff, 0xff}}; }

  static MacAddress parse(std::string_view s) {
    MacAddress m;
    std::size_t pos = 0;
    for (std::size_t i = 0; i < 6; ++i) {
      unsigned v = 0;
      auto [p, ec] = std::from_chars(s.data() + pos, s.data() + s.size(), v, 16);
      const auto used = static_cast<std::size_t>(p - (s.data() + pos));
      if (ec != std::errc{} || used == 0 || used > 2 || v > 0xff)
        throw std::invalid_argument("bad MAC address '" + std::string(s) + "'");
      m.bytes[i] = static_cast<std::uint8_t>(v);
      pos += used;
      if (i < 5) {
        if (pos >= s.size() || s[pos] != ':') throw std::invalid_argument("bad MAC address '" + std::string(s) + "'");
        ++pos;
      }
    }
    if (pos != s.size()) throw std::invalid_argument("bad MAC address '" + std::string(s) + "'");
    return m;
  }

  std::string to_string() const {
    char buf[18];
    std::snprintf(buf, sizeof buf, "%02x:%02x:%02x:%02x:%02x:%02x", bytes[0], bytes[1], bytes[2], bytes[3], bytes[4],
                  bytes[5]);
    return buf;
  }

  friend auto operator<=>(const MacAddress&, const MacAddress&) = default;
};

struct Ipv4Address {
  std::uint32_t value = 0;

  static constexpr Ipv4Address from_octets(std::uint8_t a, std::uint8_t b, std::uint8_t c, std::uint8_t d) {
    return {static_cast<std::uint32_t>(a) << 24 | static_cast<std::uint32_t>(b) << 16 |
            static_cast<std::uint32_t>(c) << 8 | d};
  }

  static Ipv4Address parse(std::string_view s) {
    std::uint32_t out = 0;
    std::size_t pos = 0;
    for (int i = 0; i < 4; ++i) {
      unsigned v = 0;
      auto [p, ec] = std::from_chars(s.data() + pos, s.data() + s.size(), v);
      if (ec != std::errc{} || v > 255) throw std::invalid_argument("bad IPv4 address '" + std::string(s) + "'");
      out = out << 8 | v;
      pos = static_cast<std::size_t>(p - s.data());
      if (i < 3) {
        if (pos >= s.size() || s[pos] != '.') throw std::invalid_argument("bad IPv4 address '" + std::string(s) + "'");
        ++pos;
      }
    }
    if (pos != s.size()) throw std::invalid_argument("bad IPv4 address '" + std::string(s) + "'");
    return {out};
  }

  std::string to_string() const {
    return std::to_string(value >> 24) + "." + std::to_string(value >> 16 & 0xff) + "." +
           std::to_string(value >> 8 & 0xff) + "." + std::to_string(value & 0xff);
  }

  friend auto operator<=>(const Ipv4Address&, const Ipv4Address&) = default;
};

enum class CodecError { payload_too_large, truncated_frame, checksum_mismatch, unsupported_protocol, malformed_header };

inline const char* to_string(CodecError e) {
  switch (e) {
    case CodecError::payload_too_large: return "payload too large";
    case CodecError::truncated_frame: return "truncated frame";
    case CodecError::checksum_mismatch: return "checksum mismatch";
    case CodecError::unsupported_protocol: return "unsupported protocol";
    case CodecError::malformed_header: return "malformed header";
  }
  return "?";
}

class CodecException : public std::runtime_error {
 public:
  CodecException(CodecError e, const std::string& what)
      : std::runtime_error(std::string(to_string(e)) + ": " + what), error_(e) {}
  CodecError error() const { return error_; }

 private:
  CodecError error_;
};

namespace detail {

inline void put16(std::vector<std::uint8_t>& out, std::uint16_t v) {
  out.push_back(static_cast<std::uint8_t>(v >> 8));
  out.push_back(static_cast<std::uint8_t>(v));
}

inline void put32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  put16(out, static_cast<std::uint16_t>(v >> 16));
  put16(out, static_cast<std::uint16_t>(v));
}

inline std::uint16_t get16(const std::uint8_t* p) { return static_cast<std::uint16_t>(p[0] << 8 | p[1]); }

inline std::uint32_t get32(const std::uint8_t* p) {
  return static_cast<std::uint32_t>(get16(p)) << 16 | get16(p + 2);
}

}  // namespace detail

}  // namespace mfft::net
