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

#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>

#include "mfft/numerics.hpp"
#include "mfft/pipeline/butterfly.hpp"

namespace mfft::pipeline {

/// Everything that fixes the function and cycle cost of one 1D engine.
struct EngineConfig {
  std::size_t n = 8;
  std::size_t rows = 1;
  OperatorLatency op{};
  double clock_hz = 250e6;
  /// Extra register in front of the first stage. Off by default; the
  /// published latency tables count one.
  unsigned input_register_cycles = 0;

  static EngineConfig uniform(std::size_t n, std::size_t rows, unsigned l_op, double clock_hz) {
    return EngineConfig{n, rows, {l_op, l_op, l_op}, clock_hz, 0};
  }

  unsigned stages() const { return log2_exact(n); }
  /// Cycles one frame occupies a row: N / 2R.
  std::size_t frame_cycles() const { return n / (2 * rows); }
  unsigned butterfly_latency() const { return op.butterfly(); }
  double clock_period() const { return 1.0 / clock_hz; }

  void validate() const {
    if (!is_power_of_two(n) || n < 2)
      throw std::invalid_argument("EngineConfig: N must be a power of two >= 2, got " + std::to_string(n));
    if (!is_power_of_two(rows) || rows > n / 2)
      throw std::invalid_argument("EngineConfig: R must be a power of two with R <= N/2");
    if (op.a > 14 || op.b > 14 || op.c > 14)
      throw std::invalid_argument("EngineConfig: operator latencies must be in 0..14");
    if (!(clock_hz > 0.0)) throw std::invalid_argument("EngineConfig: clock must be positive");
  }
};

/// Cycle and rate figures of one engine.
struct CycleReport {
  std::uint64_t latency_cycles = 0;  // first output, counted from first input
  std::uint64_t total_cycles = 0;    // latency + N/2R
  double latency_seconds = 0;
  double total_seconds = 0;
  double bytes_per_second = 0;  // 2R complex words in and out per cycle
  double gib_per_second = 0;
  double gflops = 0;
};

/// (l_but + 1) log2 N + N/2R - 1, plus any input register.
inline std::uint64_t closed_form_latency(const EngineConfig& cfg) {
  return std::uint64_t{cfg.butterfly_latency() + 1} * cfg.stages() + cfg.frame_cycles() - 1 +
         cfg.input_register_cycles;
}

namespace detail {

inline CycleReport report_from_latency(const EngineConfig& cfg, std::uint64_t latency) {
  CycleReport r;
  const double t = cfg.clock_period();
  r.latency_cycles = latency;
  r.total_cycles = latency + cfg.frame_cycles();
  r.latency_seconds = static_cast<double>(r.latency_cycles) * t;
  r.total_seconds = static_cast<double>(r.total_cycles) * t;
  r.bytes_per_second = 4.0 * static_cast<double>(kWordBytes * cfg.rows) / t;
  r.gib_per_second = r.bytes_per_second / static_cast<double>(1u << 30);
  // 10 flops per butterfly, R log2 N butterflies busy every cycle.
  r.gflops = 10.0 * static_cast<double>(cfg.rows * cfg.stages()) / t / 1e9;
  return r;
}

}  // namespace detail

/// Analytical figures; no data is moved.
inline CycleReport engine_metrics(const EngineConfig& cfg) {
  cfg.validate();
  return detail::report_from_latency(cfg, closed_form_latency(cfg));
}

}  // namespace mfft::pipeline
