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
#include <utility>

#include "mfft/numerics.hpp"
#include "mfft/pipeline/delay_line.hpp"
#include "mfft/pipeline/word.hpp"

namespace mfft::pipeline {

/// Intermediate values of the three arithmetic stages.
struct ButterflyTrace {
  double a1 = 0, a2 = 0, a3 = 0, a4 = 0;
  double b1 = 0, b2 = 0, b3 = 0, b4 = 0;
  double c1 = 0, c2 = 0;
};

namespace detail {

inline void stage_a(Complex xi, Complex xj, ButterflyTrace& t) {
  t.a1 = xi.real() + xj.real();
  t.a2 = xi.real() - xj.real();
  t.a3 = xi.imag() + xj.imag();
  t.a4 = xi.imag() - xj.imag();
}

inline void stage_b(Complex w, ButterflyTrace& t) {
  t.b1 = t.a2 * w.real();
  t.b2 = t.a4 * w.imag();
  t.b3 = t.a2 * w.imag();
  t.b4 = t.a4 * w.real();
}

// c1 = Re((a2 + i a4) w), c2 = Im(...).
inline void stage_c(ButterflyTrace& t) {
  t.c1 = t.b1 - t.b2;
  t.c2 = t.b3 + t.b4;
}

}  // namespace detail

/// DIF radix-2 kernel: (xi + xj, (xi - xj) * w), evaluated stage by stage.
inline std::pair<Complex, Complex> butterfly(Complex xi, Complex xj, Complex w,
                                             ButterflyTrace* trace = nullptr) {
  ButterflyTrace t;
  detail::stage_a(xi, xj, t);
  detail::stage_b(w, t);
  detail::stage_c(t);
  if (trace) *trace = t;
  return {{t.a1, t.a3}, {t.c1, t.c2}};
}

/// Per-stage operator latencies in cycles.
struct OperatorLatency {
  unsigned a = 0;
  unsigned b = 0;
  unsigned c = 0;

  /// Adds the input register and the register after each stage.
  unsigned butterfly() const { return a + b + c + 4; }
};

/// Cycle-level butterfly: input register, stage A, l_A+1 cycles, stage B,
/// l_B+1 cycles, stage C, l_C+1 cycles. The twiddle rides along with the data
/// until stage B needs it.
class ButterflyUnit {
 public:
  explicit ButterflyUnit(OperatorLatency lat)
      : lat_(lat), input_reg_(1), after_a_(lat.a + 1), after_b_(lat.b + 1), after_c_(lat.c + 1) {}

  unsigned latency() const { return lat_.butterfly(); }

  Lane tick(const Lane& in, Complex w) {
    Slot s = input_reg_.shift(Slot{in, w, {}});
    if (valid(s)) detail::stage_a(s.lane.hi.value, s.lane.lo.value, s.trace);
    s = after_a_.shift(s);
    if (valid(s)) detail::stage_b(s.w, s.trace);
    s = after_b_.shift(s);
    if (valid(s)) {
      detail::stage_c(s.trace);
      s.lane.hi.value = {s.trace.a1, s.trace.a3};
      s.lane.lo.value = {s.trace.c1, s.trace.c2};
    }
    s = after_c_.shift(s);
    return s.lane;
  }

 private:
  struct Slot {
    Lane lane;
    Complex w;
    ButterflyTrace trace;
  };
  static bool valid(const Slot& s) { return s.lane.hi.valid && s.lane.lo.valid; }

  OperatorLatency lat_;
  DelayLine<Slot> input_reg_;
  DelayLine<Slot> after_a_;
  DelayLine<Slot> after_b_;
  DelayLine<Slot> after_c_;
};

}  // namespace mfft::pipeline
