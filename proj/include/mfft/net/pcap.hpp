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

// Classic libpcap capture files: little-endian, microsecond timestamps,
// Ethernet link type.

#pragma once

#include <cstdint>
#include <fstream>
#include <istream>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace mfft::net {

inline constexpr std::uint32_t kPcapMagic = 0xa1b2c3d4;
inline constexpr std::uint32_t kPcapSnaplen = 65535;
inline constexpr std::uint32_t kPcapLinktypeEthernet = 1;

struct PcapRecord {
  std::uint32_t ts_sec = 0;
  std::uint32_t ts_usec = 0;
  std::vector<std::uint8_t> data;
};

namespace detail {

inline void put_le(std::ostream& os, std::uint32_t v, int bytes) {
  for (int i = 0; i < bytes; ++i) os.put(static_cast<char>(v >> (8 * i) & 0xff));
}

inline std::uint32_t get_le(std::istream& is, int bytes) {
  std::uint32_t v = 0;
  for (int i = 0; i < bytes; ++i) {
    const int c = is.get();
    if (c == std::char_traits<char>::eof()) throw std::runtime_error("pcap: unexpected end of file");
    v |= static_cast<std::uint32_t>(c) << (8 * i);
  }
  return v;
}

}  // namespace detail

class PcapWriter {
 public:
  explicit PcapWriter(std::ostream& os) : os_(os) {
    detail::put_le(os_, kPcapMagic, 4);
    detail::put_le(os_, 2, 2);
    detail::put_le(os_, 4, 2);
    detail::put_le(os_, 0, 4);  // thiszone
    detail::put_le(os_, 0, 4);  // sigfigs
    detail::put_le(os_, kPcapSnaplen, 4);
    detail::put_le(os_, kPcapLinktypeEthernet, 4);
  }

  void write(std::span<const std::uint8_t> frame, std::uint32_t ts_sec = 0, std::uint32_t ts_usec = 0) {
    if (frame.size() > kPcapSnaplen) throw std::invalid_argument("pcap: frame longer than snaplen");
    detail::put_le(os_, ts_sec, 4);
    detail::put_le(os_, ts_usec, 4);
    detail::put_le(os_, static_cast<std::uint32_t>(frame.size()), 4);
    detail::put_le(os_, static_cast<std::uint32_t>(frame.size()), 4);
    os_.write(reinterpret_cast<const char*>(frame.data()), static_cast<std::streamsize>(frame.size()));
    ++count_;
  }

  std::size_t count() const { return count_; }

 private:
  std::ostream& os_;
  std::size_t count_ = 0;
};

/// Reads files written by PcapWriter (and any little-endian microsecond pcap).
inline std::vector<PcapRecord> read_pcap(std::istream& is) {
  if (detail::get_le(is, 4) != kPcapMagic) throw std::runtime_error("pcap: bad magic");
  const auto major = detail::get_le(is, 2), minor = detail::get_le(is, 2);
  if (major != 2 || minor != 4) throw std::runtime_error("pcap: unsupported version");
  detail::get_le(is, 4);
  detail::get_le(is, 4);
  const std::uint32_t snaplen = detail::get_le(is, 4);
  if (detail::get_le(is, 4) != kPcapLinktypeEthernet) throw std::runtime_error("pcap: not an Ethernet capture");
  std::vector<PcapRecord> out;
  while (is.peek() != std::char_traits<char>::eof()) {
    PcapRecord r;
    r.ts_sec = detail::get_le(is, 4);
    r.ts_usec = detail::get_le(is, 4);
    const std::uint32_t incl = detail::get_le(is, 4);
    detail::get_le(is, 4);
    if (incl > snaplen) throw std::runtime_error("pcap: record longer than snaplen");
    r.data.resize(incl);
    if (!is.read(reinterpret_cast<char*>(r.data.data()), incl)) throw std::runtime_error("pcap: truncated record");
    out.push_back(std::move(r));
  }
  return out;
}

inline std::vector<PcapRecord> load_pcap(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open " + path);
  return read_pcap(is);
}

}  // namespace mfft::net
