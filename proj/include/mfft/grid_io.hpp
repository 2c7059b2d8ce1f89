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

// Binary grid files. Layout (all integers and floats little-endian):
//   bytes 0..7   magic "MFFTGRID"
//   u32 N, u32 components (mu), u32 kind (0 real, 1 complex), u32 reserved (0)
//   binary64 values, component-major, then z, y, x (x fastest);
//   complex words are stored as (re, im).

#pragma once

#include <array>
#include <bit>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "mfft/numerics.hpp"

namespace mfft {

enum class WordKind : std::uint32_t { real = 0, complex = 1 };

/// Malformed or unreadable grid file.
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct GridFile {
  WordKind kind = WordKind::real;
  std::vector<RealGrid> real;        // used when kind == real
  std::vector<ComplexGrid> complex;  // used when kind == complex

  std::size_t components() const { return kind == WordKind::real ? real.size() : complex.size(); }
  std::size_t n() const {
    if (components() == 0) return 0;
    return kind == WordKind::real ? real.front().n() : complex.front().n();
  }
  friend bool operator==(const GridFile&, const GridFile&) = default;
};

inline constexpr std::array<char, 8> kGridMagic = {'M', 'F', 'F', 'T', 'G', 'R', 'I', 'D'};

namespace detail {

inline void put_u32(std::ostream& os, std::uint32_t v) {
  const char b[4] = {static_cast<char>(v), static_cast<char>(v >> 8), static_cast<char>(v >> 16),
                     static_cast<char>(v >> 24)};
  os.write(b, 4);
}

inline void put_f64(std::ostream& os, double d) {
  const auto v = std::bit_cast<std::uint64_t>(d);
  char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<char>(v >> (8 * i));
  os.write(b, 8);
}

inline void read_exact(std::istream& is, char* dst, std::size_t n) {
  is.read(dst, static_cast<std::streamsize>(n));
  if (static_cast<std::size_t>(is.gcount()) != n) throw FormatError("grid file: unexpected end of data");
}

inline std::uint32_t get_u32(std::istream& is) {
  unsigned char b[4];
  read_exact(is, reinterpret_cast<char*>(b), 4);
  return std::uint32_t{b[0]} | std::uint32_t{b[1]} << 8 | std::uint32_t{b[2]} << 16 | std::uint32_t{b[3]} << 24;
}

inline double get_f64(std::istream& is) {
  unsigned char b[8];
  read_exact(is, reinterpret_cast<char*>(b), 8);
  std::uint64_t v = 0;
  for (int i = 7; i >= 0; --i) v = v << 8 | b[i];
  return std::bit_cast<double>(v);
}

}  // namespace detail

inline void write_grid_file(std::ostream& os, const GridFile& g) {
  const std::size_t n = g.n();
  if (g.components() == 0) throw std::invalid_argument("grid file: no components");
  os.write(kGridMagic.data(), kGridMagic.size());
  detail::put_u32(os, static_cast<std::uint32_t>(n));
  detail::put_u32(os, static_cast<std::uint32_t>(g.components()));
  detail::put_u32(os, static_cast<std::uint32_t>(g.kind));
  detail::put_u32(os, 0);
  if (g.kind == WordKind::real) {
    for (const auto& c : g.real) {
      if (c.n() != n) throw std::invalid_argument("grid file: components differ in size");
      for (double v : c.values()) detail::put_f64(os, v);
    }
  } else {
    for (const auto& c : g.complex) {
      if (c.n() != n) throw std::invalid_argument("grid file: components differ in size");
      for (const Complex& v : c.values()) {
        detail::put_f64(os, v.real());
        detail::put_f64(os, v.imag());
      }
    }
  }
  if (!os) throw FormatError("grid file: write failed");
}

inline GridFile read_grid_file(std::istream& is) {
  std::array<char, 8> magic{};
  detail::read_exact(is, magic.data(), magic.size());
  if (magic != kGridMagic) throw FormatError("grid file: bad magic");
  const std::uint32_t n = detail::get_u32(is);
  const std::uint32_t mu = detail::get_u32(is);
  const std::uint32_t kind = detail::get_u32(is);
  detail::get_u32(is);
  if (n == 0 || mu == 0) throw FormatError("grid file: empty grid");
  if (n > 4096) throw FormatError("grid file: N=" + std::to_string(n) + " too large");
  if (kind > 1) throw FormatError("grid file: unknown word kind " + std::to_string(kind));

  GridFile g;
  g.kind = static_cast<WordKind>(kind);
  const std::size_t count = std::size_t{n} * n * n;
  for (std::uint32_t c = 0; c < mu; ++c) {
    if (g.kind == WordKind::real) {
      std::vector<double> data(count);
      for (auto& v : data) v = detail::get_f64(is);
      g.real.emplace_back(n, std::move(data));
    } else {
      std::vector<Complex> data(count);
      for (auto& v : data) {
        const double re = detail::get_f64(is);
        v = {re, detail::get_f64(is)};
      }
      g.complex.emplace_back(n, std::move(data));
    }
  }
  if (is.peek() != std::char_traits<char>::eof()) throw FormatError("grid file: trailing bytes");
  return g;
}

inline void save_grid_file(const std::filesystem::path& path, const GridFile& g) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw FormatError("cannot open " + path.string() + " for writing");
  write_grid_file(os, g);
}

inline GridFile load_grid_file(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw FormatError("cannot open " + path.string());
  return read_grid_file(is);
}

}  // namespace mfft
