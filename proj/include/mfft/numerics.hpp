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

// Reference mathematics: twiddle factors, direct-sum DFT oracles and
// real-to-complex packing. Nothing in here is fast on purpose; these routines
// are the yardstick the pipelined engine and the distributed simulation are
// measured against.

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace mfft {

using Complex = std::complex<double>;

/// Bytes per real binary64 value; a complex word is twice this.
inline constexpr std::size_t kWordBytes = 8;
inline constexpr std::size_t kComplexBytes = 2 * kWordBytes;

enum class Direction { forward, inverse };

constexpr bool is_power_of_two(std::uint64_t n) { return n != 0 && (n & (n - 1)) == 0; }

constexpr unsigned log2_exact(std::uint64_t n) {
  unsigned s = 0;
  while ((std::uint64_t{1} << s) < n) ++s;
  return s;
}

/// exp(-i 2 pi index / n), evaluated with one sin/cos pair per call so that
/// tables built from it never accumulate rounding drift.
inline Complex twiddle(std::uint64_t index, std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("twiddle: transform size must be positive");
  index %= n;
  if (index == 0) return {1.0, 0.0};
  const double angle = -2.0 * std::numbers::pi * static_cast<double>(index) / static_cast<double>(n);
  return {std::cos(angle), std::sin(angle)};
}

/// All n powers W_n^m, m = 0..n-1, each computed independently.
inline std::vector<Complex> twiddle_table(std::uint64_t n) {
  std::vector<Complex> table(n);
  for (std::uint64_t m = 0; m < n; ++m) table[m] = twiddle(m, n);
  return table;
}

/// Direct O(N^2) DFT. The inverse uses conjugate twiddles and a 1/N scale.
inline std::vector<Complex> dft_1d(std::span<const Complex> x, Direction dir = Direction::forward) {
  const std::size_t n = x.size();
  if (n == 0) throw std::invalid_argument("dft_1d: empty input");
  const auto w = twiddle_table(n);
  std::vector<Complex> out(n);
  for (std::size_t k = 0; k < n; ++k) {
    Complex acc{0.0, 0.0};
    std::size_t m = 0;  // k*j mod n, advanced incrementally to avoid overflow
    for (std::size_t j = 0; j < n; ++j) {
      const Complex wk = dir == Direction::forward ? w[m] : std::conj(w[m]);
      acc += wk * x[j];
      m += k;
      if (m >= n) m -= n;
    }
    out[k] = dir == Direction::forward ? acc : acc / static_cast<double>(n);
  }
  return out;
}

inline std::vector<Complex> to_complex(std::span<const double> x) {
  std::vector<Complex> out(x.size());
  std::transform(x.begin(), x.end(), out.begin(), [](double v) { return Complex{v, 0.0}; });
  return out;
}

/// Keeps the first N/2+1 bins of a full spectrum of real data; the remaining
/// bins are redundant through X[k] = conj(X[N-k]).
inline std::vector<Complex> nonredundant_bins(std::span<const Complex> spectrum) {
  if (spectrum.size() % 2 != 0)
    throw std::invalid_argument("nonredundant_bins: length must be even");
  return {spectrum.begin(), spectrum.begin() + static_cast<std::ptrdiff_t>(spectrum.size() / 2 + 1)};
}

inline std::vector<Complex> pack_real_to_complex(std::span<const double> x) {
  if (x.empty() || x.size() % 2 != 0)
    throw std::invalid_argument("pack_real_to_complex: length must be even and non-zero");
  const auto full = dft_1d(to_complex(x));
  return nonredundant_bins(full);
}

/// Rebuilds all N bins from the N/2+1 non-redundant ones.
inline std::vector<Complex> expand_hermitian(std::span<const Complex> half, std::size_t n) {
  if (n == 0 || n % 2 != 0 || half.size() != n / 2 + 1)
    throw std::invalid_argument("expand_hermitian: expected N/2+1 bins for even N");
  std::vector<Complex> full(n);
  std::copy(half.begin(), half.end(), full.begin());
  for (std::size_t k = n / 2 + 1; k < n; ++k) full[k] = std::conj(half[n - k]);
  return full;
}

enum class Axis { x = 0, y = 1, z = 2 };

/// Cubic N^3 grid, x fastest: offset = (z*N + y)*N + x.
template <typename T>
class Grid3 {
 public:
  Grid3() = default;
  explicit Grid3(std::size_t n, T fill = T{}) : n_(n), data_(n * n * n, fill) {}
  Grid3(std::size_t n, std::vector<T> data) : n_(n), data_(std::move(data)) {
    if (data_.size() != n_ * n_ * n_)
      throw std::invalid_argument("Grid3: data length is not N^3 (grid must be cubic)");
  }

  std::size_t n() const { return n_; }
  std::size_t size() const { return data_.size(); }

  std::size_t offset(std::size_t x, std::size_t y, std::size_t z) const { return (z * n_ + y) * n_ + x; }
  T& operator()(std::size_t x, std::size_t y, std::size_t z) { return data_[offset(x, y, z)]; }
  const T& operator()(std::size_t x, std::size_t y, std::size_t z) const { return data_[offset(x, y, z)]; }

  std::span<T> values() { return data_; }
  std::span<const T> values() const { return data_; }
  std::vector<T>& storage() { return data_; }
  const std::vector<T>& storage() const { return data_; }

  friend bool operator==(const Grid3&, const Grid3&) = default;

 private:
  std::size_t n_ = 0;
  std::vector<T> data_;
};

using RealGrid = Grid3<double>;
using ComplexGrid = Grid3<Complex>;

inline ComplexGrid to_complex(const RealGrid& g) {
  return ComplexGrid(g.n(), to_complex(g.values()));
}

/// Applies the direct DFT along one axis of the grid.
inline void dft_along(ComplexGrid& g, Axis axis, Direction dir) {
  const std::size_t n = g.n();
  std::vector<Complex> line(n);
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      auto at = [&](std::size_t t) -> Complex& {
        switch (axis) {
          case Axis::x: return g(t, a, b);
          case Axis::y: return g(a, t, b);
          case Axis::z: return g(a, b, t);
        }
        return g(t, a, b);
      };
      for (std::size_t t = 0; t < n; ++t) line[t] = at(t);
      const auto out = dft_1d(line, dir);
      for (std::size_t t = 0; t < n; ++t) at(t) = out[t];
    }
  }
}

/// 3D DFT as three nested 1D sweeps; the order of axes is a parameter so the
/// order-independence can be checked.
inline ComplexGrid dft_3d(const ComplexGrid& field, Direction dir = Direction::forward,
                          std::array<Axis, 3> order = {Axis::x, Axis::y, Axis::z}) {
  if (field.n() == 0 || field.size() != field.n() * field.n() * field.n())
    throw std::invalid_argument("dft_3d: grid must be cubic with N >= 1");
  ComplexGrid out = field;
  for (Axis a : order) dft_along(out, a, dir);
  return out;
}

// ---------------------------------------------------------------------------
// Error metrics. All tolerances in this project are expressed as the largest
// elementwise absolute deviation divided by the L2 norm of the input that
// produced the values.

inline double l2_norm(std::span<const Complex> x) {
  double s = 0.0;
  for (const auto& v : x) s += std::norm(v);
  return std::sqrt(s);
}

inline double l2_norm(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return std::sqrt(s);
}

inline double max_abs_diff(std::span<const Complex> a, std::span<const Complex> b) {
  if (a.size() != b.size()) throw std::invalid_argument("max_abs_diff: size mismatch");
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

/// max|a-b| / ||reference||_2, falling back to the absolute error for a zero
/// reference.
inline double relative_error(std::span<const Complex> a, std::span<const Complex> b, double reference_norm) {
  const double d = max_abs_diff(a, b);
  return reference_norm > 0.0 ? d / reference_norm : d;
}

}  // namespace mfft
