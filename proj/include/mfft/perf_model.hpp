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

// Analytical timing, bandwidth and memory models of the node architectures,
// plus the interconnect bandwidth models. Times are in seconds, rates in
// bytes per second; block latencies are given in clock cycles.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "mfft/domain.hpp"
#include "mfft/numerics.hpp"

namespace mfft {

enum class ArchKind { sequential, pipelined, parallel, sequential_streaming, pipelined_streaming };

/// Which divisor the streaming pipelined estimate uses: 4PRk is the closed
/// form, 2PRk is what the published prediction table evaluates.
enum class StreamingForm { quarter, half };

struct ArchSpec {
  ArchKind kind = ArchKind::pipelined;
  unsigned k = 1;       // engine multiplicity
  unsigned mu = 1;      // vector components
  unsigned rows = 4;    // R of each engine
  bool doubled_x = false;  // pipelined only: 2k X engines so Y never stalls
  double l_dma = 0;     // cycles
  double l_comm = 0;    // cycles
  double l_fft = 0;     // cycles
  double t_clk = 1.0 / 180e6;
  std::uint64_t n = 512;
  std::uint64_t pu = 1;
  std::uint64_t pv = 1;
  StreamingForm streaming_form = StreamingForm::quarter;

  std::uint64_t p() const { return pu * pv; }

  void validate() const {
    if (k == 0 || mu == 0 || rows == 0) throw std::invalid_argument("ArchSpec: k, mu and R must be >= 1");
    if (n == 0 || pu == 0 || pv == 0) throw std::invalid_argument("ArchSpec: N, Pu and Pv must be >= 1");
    if (!(t_clk > 0)) throw std::invalid_argument("ArchSpec: clock period must be positive");
    if (l_dma < 0 || l_comm < 0 || l_fft < 0) throw std::invalid_argument("ArchSpec: negative latency");
  }
};

inline std::string to_string(ArchKind k) {
  switch (k) {
    case ArchKind::sequential: return "sequential";
    case ArchKind::pipelined: return "pipelined";
    case ArchKind::parallel: return "parallel";
    case ArchKind::sequential_streaming: return "sequential_streaming";
    case ArchKind::pipelined_streaming: return "pipelined_streaming";
  }
  return "?";
}

inline ArchKind parse_arch_kind(const std::string& s) {
  for (ArchKind k : {ArchKind::sequential, ArchKind::pipelined, ArchKind::parallel, ArchKind::sequential_streaming,
                     ArchKind::pipelined_streaming})
    if (to_string(k) == s) return k;
  throw std::invalid_argument("unknown architecture kind '" + s + "'");
}

struct ComponentCounts {
  unsigned q = 0;       // FFT engines
  unsigned n_hdma = 0;  // host DMA controllers
  unsigned n_ldma = 0;  // local-memory DMA controllers
  unsigned n_net = 0;   // network controllers
  friend bool operator==(const ComponentCounts&, const ComponentCounts&) = default;
};

inline ComponentCounts component_counts(const ArchSpec& a) {
  const unsigned k = a.k;
  switch (a.kind) {
    case ArchKind::sequential:
    case ArchKind::sequential_streaming: return {k, k, 2 * k, k};
    case ArchKind::pipelined:
      return a.doubled_x ? ComponentCounts{4 * k, 2 * k, 4 * k, 2 * k} : ComponentCounts{3 * k, k, 4 * k, 2 * k};
    case ArchKind::pipelined_streaming: return {4 * k, 2 * k, 4 * k, 2 * k};
    case ArchKind::parallel: return {a.mu * k, a.mu * k, 2 * a.mu * k, a.mu * k};
  }
  throw std::invalid_argument("component_counts: unknown kind");
}

struct TimelineEvent {
  std::string label;
  double time = 0;
  std::string description;
};

struct Timeline {
  std::vector<TimelineEvent> events;  // t0..t11
  // Pipelined only: both expressions for t8 and which one governs.
  std::optional<double> t8_dependency;  // first N-1 planes Y-transformed
  std::optional<double> t8_stall;       // Y waits for the whole X transform
  bool stall_active = false;

  double total() const { return events.back().time; }
};

namespace detail {

struct Terms {
  double dma, comm, fft;  // seconds
  double n3, n2, n, pr;   // N^3, N^2, N, P*R
};

inline Terms terms(const ArchSpec& a) {
  const double n = static_cast<double>(a.n);
  return {a.l_dma * a.t_clk, a.l_comm * a.t_clk, a.l_fft * a.t_clk, n * n * n, n * n, n,
          static_cast<double>(a.p()) * a.rows};
}

inline Timeline sequential_timeline(const ArchSpec& a, double q) {
  const Terms t = terms(a);
  const double x_stream = a.t_clk * t.n3 / (2 * t.pr * q);
  const double c_stream = a.t_clk * (t.n3 + 2 * t.n2) / (4 * t.pr * q);
  std::vector<double> v(12);
  v[0] = 0;
  v[1] = t.dma;
  v[2] = v[1] + t.fft;
  v[3] = v[2] + t.comm;
  v[4] = v[1] + t.fft + x_stream;
  v[5] = v[4] + t.dma;
  v[6] = v[5] + t.fft;
  v[7] = v[6] + t.comm;
  v[8] = v[5] + t.fft + c_stream;
  v[9] = v[8] + t.dma;
  v[10] = v[9] + t.fft;
  v[11] = v[10] + t.dma + c_stream;
  const char* what[12] = {"DMA read of X pencils from host memory",
                          "X transform starts",
                          "X output reaches the network controller",
                          "Y pencils start landing in local memory",
                          "whole volume X-transformed; Y pencils readable",
                          "Y transform starts",
                          "Y output reaches the network controller",
                          "Z pencils start landing in local memory",
                          "whole volume Y-transformed; Z pencils readable",
                          "Z transform starts",
                          "Z output flows to host memory",
                          "all data written back to host memory"};
  Timeline tl;
  for (int i = 0; i < 12; ++i) tl.events.push_back({"t" + std::to_string(i), v[i], what[i]});
  return tl;
}

inline Timeline pipelined_timeline(const ArchSpec& a) {
  const Terms t = terms(a);
  const double k = a.k;
  std::vector<double> v(12);
  v[0] = 0;
  v[1] = t.dma;
  v[2] = v[1] + t.fft;
  v[3] = v[2] + t.comm;
  v[4] = v[3] + a.t_clk * t.n2 / (2 * t.pr * k);
  v[5] = v[4] + t.dma;
  v[6] = v[5] + t.fft;
  v[7] = v[6] + t.comm;
  const double dep = v[7] + a.t_clk * (t.n - 1) * t.n2 / (4 * t.pr * k);
  // Z cannot start before X has finished; with doubled X engines X takes half as long.
  const double x_done = v[2] + a.t_clk * t.n3 / ((a.doubled_x ? 4 : 2) * t.pr * k);
  v[8] = std::max(dep, x_done);
  v[9] = v[8] + t.dma;
  v[10] = v[9] + t.fft;
  v[11] = v[10] + t.dma + a.t_clk * t.n3 / (4 * t.pr * k);
  const char* what[12] = {"DMA read from host memory",
                          "X transform starts",
                          "X output reaches the network controller",
                          "Y pencils start landing in local memory",
                          "first plane X-transformed; Y pencils readable",
                          "Y transform starts",
                          "Y output reaches the network controller",
                          "Z pencils start landing in local memory",
                          "Y transform done up to the last plane; Z pencils readable",
                          "Z transform starts",
                          "Z output flows to host memory",
                          "all data written back to host memory"};
  Timeline tl;
  for (int i = 0; i < 12; ++i) tl.events.push_back({"t" + std::to_string(i), v[i], what[i]});
  tl.t8_dependency = dep;
  tl.t8_stall = x_done;
  tl.stall_active = x_done > dep;
  return tl;
}

}  // namespace detail

/// Event times of one single-component transform. Streaming kinds have no
/// per-event breakdown.
inline Timeline timeline(const ArchSpec& a) {
  a.validate();
  switch (a.kind) {
    case ArchKind::sequential:
    case ArchKind::parallel:  // each component owns k engines
      return detail::sequential_timeline(a, a.k);
    case ArchKind::pipelined: return detail::pipelined_timeline(a);
    default: throw std::invalid_argument("timeline: no event breakdown for " + to_string(a.kind));
  }
}

/// Total time of all mu components. The default is the large-N form (block
/// latencies and N^2 terms dropped); `exact` keeps them.
inline double total_time(const ArchSpec& a, bool exact = false) {
  a.validate();
  const detail::Terms t = detail::terms(a);
  const double k = a.k, mu = a.mu;
  switch (a.kind) {
    case ArchKind::sequential:
    case ArchKind::parallel:
      return exact ? timeline(a).total() : 2 * a.t_clk * t.n3 / (2 * t.pr * k);
    case ArchKind::pipelined:
      if (exact) return timeline(a).total();
      return a.doubled_x ? a.t_clk * t.n3 / (2 * t.pr * k) : 3 * a.t_clk * t.n3 / (4 * t.pr * k);
    case ArchKind::sequential_streaming: {
      ArchSpec one = a;
      one.kind = ArchKind::sequential;
      return exact ? mu * timeline(one).total() : 2 * mu * a.t_clk * t.n3 / (2 * t.pr * k);
    }
    case ArchKind::pipelined_streaming: {
      const double div = a.streaming_form == StreamingForm::quarter ? 4 : 2;
      const double stream = (mu + 1) * a.t_clk * t.n3 / (div * t.pr * k);
      // Fill and drain of the pipeline once, as in the single-component form.
      return exact ? 3 * t.dma + 2 * t.fft + stream : stream;
    }
  }
  throw std::invalid_argument("total_time: unknown kind");
}

/// Data throughput that keeps the engines busy (two complex words per cycle
/// per row per engine stream).
inline double required_bandwidth(const ArchSpec& a) {
  const double unit = 4.0 * kWordBytes * a.rows / a.t_clk;
  return a.kind == ArchKind::parallel ? unit * a.k * a.mu : unit * a.k;
}

/// Row and column network bandwidth: B (P-1)/P along each axis.
inline std::pair<double, double> axis_network_bandwidth(const ArchSpec& a) {
  const double b = required_bandwidth(a);
  const double pu = static_cast<double>(a.pu), pv = static_cast<double>(a.pv);
  return {b * (pu - 1) / pu, b * (pv - 1) / pv};
}

inline MemoryModel memory_model_of(const ArchSpec& a) {
  switch (a.kind) {
    case ArchKind::sequential:
    case ArchKind::sequential_streaming:
    case ArchKind::parallel: return MemoryModel::sequential;
    case ArchKind::pipelined: return MemoryModel::pipelined;
    case ArchKind::pipelined_streaming: return MemoryModel::pipelined_streaming;
  }
  throw std::invalid_argument("memory_model_of: unknown kind");
}

/// Local memory per node; the parallel layout holds mu components at once.
inline std::uint64_t local_memory(const ArchSpec& a) {
  const PencilGrid g(a.n, a.pu, a.pv);
  const std::uint64_t m = memory_occupancy(g, memory_model_of(a));
  return a.kind == ArchKind::parallel ? m * a.mu : m;
}

// ---------------------------------------------------------------------------
// Interconnect.

enum class Topology { switched, torus };

inline std::string to_string(Topology t) { return t == Topology::switched ? "switched" : "torus"; }

inline Topology parse_topology(const std::string& s) {
  if (s == "switched") return Topology::switched;
  if (s == "torus") return Topology::torus;
  throw std::invalid_argument("unknown topology '" + s + "'");
}

inline std::uint64_t exact_sqrt(std::uint64_t p) {
  auto r = static_cast<std::uint64_t>(std::llround(std::sqrt(static_cast<double>(p))));
  while (r * r > p) --r;
  while ((r + 1) * (r + 1) <= p) ++r;
  if (p == 0 || r * r != p) throw std::invalid_argument("P=" + std::to_string(p) + " is not a perfect square");
  return r;
}

/// Per-node bandwidth the network must sustain on a sqrt(P) x sqrt(P) grid.
/// A switch gives full bisection bandwidth; a torus pays for multi-hop
/// routes, a factor sqrt(P)/2 over the switch.
inline double network_bandwidth(Topology topo, unsigned rows, double t_clk, std::uint64_t p) {
  const double side = static_cast<double>(exact_sqrt(p));
  const double s = kWordBytes;
  if (topo == Topology::switched) return 4 * s * rows / t_clk * (side - 1) / side;
  return 2 * s * rows / t_clk * (side - 1);
}

// ---------------------------------------------------------------------------
// Normalised architecture comparison.

struct ComparisonColumn {
  ArchKind kind;
  double total_time = 0;  // units of t_clk N^3 / 2P
  double bandwidth = 0;   // units of 4s / t_clk
  double ram = 0;         // units of s N^3 / P, N^2 terms dropped
  ComponentCounts counts;
};

namespace detail {

// Leading N^3 coefficient of the local memory of one component.
inline double ram_units(ArchKind k) {
  switch (memory_model_of(ArchSpec{.kind = k})) {
    case MemoryModel::sequential: return 2;
    case MemoryModel::pipelined: return 1;
    case MemoryModel::pipelined_streaming: return 2;
  }
  return 0;
}

inline ComparisonColumn normalised(ArchSpec a) {
  // R = 1 and t_clk = 1 so the units come out directly; N is irrelevant at
  // leading order.
  a.rows = 1;
  a.t_clk = 1;
  a.n = 1024;
  a.pu = a.pv = 1;
  const double unit = static_cast<double>(a.n * a.n * a.n) / 2.0;
  ComparisonColumn c{a.kind, total_time(a) / unit, required_bandwidth(a) / (4.0 * kWordBytes),
                     ram_units(a.kind) * (a.kind == ArchKind::parallel ? a.mu : 1), component_counts(a)};
  return c;
}

}  // namespace detail

/// Sequential streaming, pipelined streaming and parallel, all at
/// multiplicity k.
inline std::vector<ComparisonColumn> architecture_comparison(unsigned mu, unsigned k) {
  if (mu == 0 || k == 0) throw std::invalid_argument("architecture_comparison: mu and k must be >= 1");
  std::vector<ComparisonColumn> cols;
  for (ArchKind kind : {ArchKind::sequential_streaming, ArchKind::pipelined_streaming, ArchKind::parallel})
    cols.push_back(detail::normalised(ArchSpec{.kind = kind, .k = k, .mu = mu}));
  return cols;
}

/// Sequential streaming against pipelined streaming with the same number of
/// engines q (q a multiple of 4).
inline std::vector<ComparisonColumn> fixed_engine_comparison(unsigned mu, unsigned q) {
  if (mu == 0 || q == 0 || q % 4 != 0)
    throw std::invalid_argument("fixed_engine_comparison: q must be a positive multiple of 4");
  return {detail::normalised(ArchSpec{.kind = ArchKind::sequential_streaming, .k = q, .mu = mu}),
          detail::normalised(ArchSpec{.kind = ArchKind::pipelined_streaming, .k = q / 4, .mu = mu})};
}

// ---------------------------------------------------------------------------
// System-level prediction grid.

struct PredictConfig {
  std::vector<std::uint64_t> ns = {512, 1024, 2048, 4096, 8192};
  std::vector<std::uint64_t> ps = {1, 4, 16, 64, 256, 1024};
  unsigned mu = 1;
  unsigned rows = 4;
  unsigned k = 1;
  double clock_hz = 180e6;
  std::uint64_t device_bytes = std::uint64_t{8} << 30;
  StreamingForm form = StreamingForm::half;
  MemoryModel memory = MemoryModel::pipelined;
};

struct PredictCell {
  std::uint64_t n = 0;
  std::uint64_t p = 0;
  std::uint64_t memory_bytes = 0;
  std::optional<double> seconds;  // empty when the node memory does not fit
};

struct PredictTable {
  PredictConfig config;
  std::vector<std::vector<PredictCell>> cells;  // [n index][p index]
};

/// Streaming pipelined time on square process grids, masked where local
/// memory exceeds the device.
inline PredictTable predict_table(const PredictConfig& cfg) {
  PredictTable t{cfg, {}};
  for (std::uint64_t n : cfg.ns) {
    std::vector<PredictCell> row;
    for (std::uint64_t p : cfg.ps) {
      const std::uint64_t side = exact_sqrt(p);
      ArchSpec a{.kind = ArchKind::pipelined_streaming, .k = cfg.k, .mu = cfg.mu, .rows = cfg.rows,
                 .t_clk = 1.0 / cfg.clock_hz, .n = n, .pu = side, .pv = side, .streaming_form = cfg.form};
      PredictCell c{n, p, memory_occupancy(PencilGrid(n, side, side), cfg.memory), std::nullopt};
      if (c.memory_bytes <= cfg.device_bytes) c.seconds = total_time(a);
      row.push_back(c);
    }
    t.cells.push_back(std::move(row));
  }
  return t;
}

}  // namespace mfft
