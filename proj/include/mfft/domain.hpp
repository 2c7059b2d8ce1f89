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

// Pencil decomposition of an N^3 grid over a Pu x Pv process grid. Indices
// are (i, j, k) along (x, y, z); ranges are contiguous blocks.

#pragma once

#include <algorithm>
#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "mfft/numerics.hpp"

namespace mfft {

enum class Phase { x, y, z };
enum class Fold { xy, yz };

struct NodeCoord {
  std::size_t u = 0;
  std::size_t v = 0;
  friend auto operator<=>(const NodeCoord&, const NodeCoord&) = default;
};

/// Half-open index range.
struct IndexRange {
  std::size_t begin = 0;
  std::size_t end = 0;
  std::size_t size() const { return end - begin; }
  bool contains(std::size_t i) const { return i >= begin && i < end; }
  friend bool operator==(const IndexRange&, const IndexRange&) = default;
};

/// Axis-aligned block of grid points.
struct Box {
  std::array<IndexRange, 3> range;  // i, j, k
  std::size_t points() const { return range[0].size() * range[1].size() * range[2].size(); }
  bool contains(std::size_t i, std::size_t j, std::size_t k) const {
    return range[0].contains(i) && range[1].contains(j) && range[2].contains(k);
  }
  friend bool operator==(const Box&, const Box&) = default;
};

class PencilGrid {
 public:
  PencilGrid(std::size_t n, std::size_t pu, std::size_t pv, std::size_t word_bytes = kWordBytes)
      : n_(n), pu_(pu), pv_(pv), s_(word_bytes) {
    if (n == 0 || pu == 0 || pv == 0)
      throw std::invalid_argument("PencilGrid: N, Pu and Pv must be positive");
    if (n % pu != 0 || n % pv != 0)
      throw std::invalid_argument("PencilGrid: Pu and Pv must divide N (N=" + std::to_string(n) +
                                  ", Pu=" + std::to_string(pu) + ", Pv=" + std::to_string(pv) + ")");
  }

  std::size_t n() const { return n_; }
  std::size_t pu() const { return pu_; }
  std::size_t pv() const { return pv_; }
  std::size_t p() const { return pu_ * pv_; }
  std::size_t word_bytes() const { return s_; }

  /// Ranks are v-major: rank = v * Pu + u, so a row (fixed v) is contiguous.
  std::size_t rank(NodeCoord c) const { return c.v * pu_ + c.u; }
  NodeCoord coord(std::size_t rank) const { return {rank % pu_, rank / pu_}; }

  IndexRange u_block(std::size_t u) const { return {u * n_ / pu_, (u + 1) * n_ / pu_}; }
  IndexRange v_block(std::size_t v) const { return {v * n_ / pv_, (v + 1) * n_ / pv_}; }

  /// Points held by a node in a given phase.
  Box pencil(NodeCoord c, Phase phase) const {
    const IndexRange all{0, n_};
    switch (phase) {
      case Phase::x: return {{all, u_block(c.u), v_block(c.v)}};
      case Phase::y: return {{u_block(c.u), all, v_block(c.v)}};
      case Phase::z: return {{u_block(c.u), v_block(c.v), all}};
    }
    throw std::invalid_argument("PencilGrid: unknown phase");
  }

  friend bool operator==(const PencilGrid&, const PencilGrid&) = default;

 private:
  std::size_t n_, pu_, pv_, s_;
};

inline NodeCoord owner_of(std::size_t i, std::size_t j, std::size_t k, const PencilGrid& g, Phase phase) {
  const std::size_t n = g.n();
  if (i >= n || j >= n || k >= n)
    throw std::invalid_argument("owner_of: point (" + std::to_string(i) + "," + std::to_string(j) + "," +
                                std::to_string(k) + ") outside N=" + std::to_string(n));
  switch (phase) {
    case Phase::x: return {j * g.pu() / n, k * g.pv() / n};
    case Phase::y: return {i * g.pu() / n, k * g.pv() / n};
    case Phase::z: return {i * g.pu() / n, j * g.pv() / n};
  }
  throw std::invalid_argument("owner_of: unknown phase");
}

struct Transfer {
  NodeCoord src;
  NodeCoord dst;
  Box points;
};

/// Data movement of one fold: blocks that change node and blocks that stay.
struct TransposePlan {
  Fold fold = Fold::xy;
  std::vector<Transfer> transfers;  // src != dst, ordered by (src rank, dst rank)
  std::vector<Transfer> kept;       // src == dst
};

inline TransposePlan transpose_map(const PencilGrid& g, Fold fold) {
  const Phase from = fold == Fold::xy ? Phase::x : Phase::y;
  const Phase to = fold == Fold::xy ? Phase::y : Phase::z;
  TransposePlan plan{fold, {}, {}};
  for (std::size_t sr = 0; sr < g.p(); ++sr) {
    const NodeCoord src = g.coord(sr);
    // XY stays within the row (same v), YZ within the column (same u).
    const std::size_t peers = fold == Fold::xy ? g.pu() : g.pv();
    for (std::size_t q = 0; q < peers; ++q) {
      const NodeCoord dst = fold == Fold::xy ? NodeCoord{q, src.v} : NodeCoord{src.u, q};
      const Box a = g.pencil(src, from), b = g.pencil(dst, to);
      Box common;
      for (int d = 0; d < 3; ++d)
        common.range[d] = {std::max(a.range[d].begin, b.range[d].begin), std::min(a.range[d].end, b.range[d].end)};
      (dst == src ? plan.kept : plan.transfers).push_back({src, dst, common});
    }
  }
  return plan;
}

/// Byte volumes per node: real phase, complex phase (with the extra N/2+1
/// plane), and application RAM (two real N^3 fields).
struct VolumeReport {
  std::uint64_t v = 0;
  std::uint64_t v_prime = 0;
  std::uint64_t ram_per_node = 0;
};

inline VolumeReport volumes(const PencilGrid& g) {
  const std::uint64_t n = g.n(), s = g.word_bytes(), p = g.p();
  return {s * n * n * n / p, s * (n * n * n + 2 * n * n) / p, 2 * s * n * n * n / p};
}

enum class MemoryModel {
  sequential,           // Y and Z pencils resident together: 2V'
  pipelined,            // one complex volume plus two X planes per row peer: V' + 2sN^2/Pu
  pipelined_streaming,  // streaming components back to back: 2V' + 2sN^2/Pu
};

inline std::uint64_t memory_occupancy(const PencilGrid& g, MemoryModel model) {
  const VolumeReport vol = volumes(g);
  const std::uint64_t n = g.n();
  const std::uint64_t planes = 2 * g.word_bytes() * n * n / g.pu();
  switch (model) {
    case MemoryModel::sequential: return 2 * vol.v_prime;
    case MemoryModel::pipelined: return vol.v_prime + planes;
    case MemoryModel::pipelined_streaming: return 2 * vol.v_prime + planes;
  }
  throw std::invalid_argument("memory_occupancy: unknown model");
}

inline std::string to_string(Phase p) {
  switch (p) {
    case Phase::x: return "X";
    case Phase::y: return "Y";
    case Phase::z: return "Z";
  }
  return "?";
}

inline std::string to_string(Fold f) { return f == Fold::xy ? "XY" : "YZ"; }

}  // namespace mfft
