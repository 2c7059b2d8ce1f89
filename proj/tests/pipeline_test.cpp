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

#include <gtest/gtest.h>

#include <algorithm>
#include <map>
#include <set>
#include <tuple>

#include "mfft/fft_pipeline.hpp"
#include "test_util.hpp"

namespace mfft::pipeline {
namespace {

using mfft::testing::random_complex;

TEST(Butterfly, IdenticalInputsCancel) {
  const auto [x0, x1] = butterfly({1, 0}, {1, 0}, {1, 0});
  EXPECT_EQ(x0, Complex(2, 0));
  EXPECT_EQ(x1, Complex(0, 0));
}

TEST(Butterfly, DifferenceRotatedByMinusI) {
  const auto [x0, x1] = butterfly({1, 0}, {0, 0}, {0, -1});
  EXPECT_EQ(x0, Complex(1, 0));
  EXPECT_EQ(x1, Complex(0, -1));
}

TEST(Butterfly, MatchesExpandedRealImaginaryEquations) {
  const auto v = random_complex(3 * 200, 42);
  for (std::size_t i = 0; i < 200; ++i) {
    const Complex xi = v[3 * i], xj = v[3 * i + 1], w = v[3 * i + 2];
    ButterflyTrace t;
    const auto [x0, x1] = butterfly(xi, xj, w, &t);
    const double re_i = xi.real() + xj.real();
    const double im_i = xi.imag() + xj.imag();
    const double re_j = w.real() * (xi.real() - xj.real()) - w.imag() * (xi.imag() - xj.imag());
    const double im_j = w.imag() * (xi.real() - xj.real()) + w.real() * (xi.imag() - xj.imag());
    EXPECT_LT(std::abs(x0 - Complex(re_i, im_i)), 1e-15);
    EXPECT_LT(std::abs(x1 - Complex(re_j, im_j)), 1e-15);
    EXPECT_DOUBLE_EQ(t.a2, xi.real() - xj.real());
    EXPECT_DOUBLE_EQ(t.b4, t.a4 * w.real());
  }
}

TEST(ButterflyUnit, LatencyIsStageSumPlusFour) {
  ButterflyUnit u({3, 5, 7});
  EXPECT_EQ(u.latency(), 19u);
  int first = -1;
  for (int t = 0; t < 40; ++t) {
    Lane in{};
    if (t == 0) in = {{{1, 2}, 0, true}, {{3, 4}, 1, true}};
    const Lane out = u.tick(in, {0, 1});
    if (out.hi.valid) {
      first = t;
      EXPECT_EQ(out.hi.value, Complex(4, 6));
      EXPECT_EQ(out.lo.value, Complex(2, -2));  // (-2-2i)*i
    }
  }
  EXPECT_EQ(first, 19);
}

TEST(DelayLine, ZeroLengthIsAWire) {
  DelayLine<int> d(0);
  EXPECT_EQ(d.shift(5), 5);
  DelayLine<int> d3(3);
  std::vector<int> out;
  for (int i = 1; i <= 6; ++i) out.push_back(d3.shift(i));
  EXPECT_EQ(out, (std::vector<int>{0, 0, 0, 1, 2, 3}));
}

Lane tagged(std::uint32_t hi, std::uint32_t lo) {
  return {{{static_cast<double>(hi), 0}, hi, true}, {{static_cast<double>(lo), 0}, lo, true}};
}

TEST(DataShuffler, LengthOneMatchesHandTrace) {
  // Upper stream a_t carries tag t, lower stream b_t carries tag 100+t. The
  // expected sequence was traced by hand through both muxes and registers.
  DataShuffler sh(1);
  std::vector<std::pair<int, int>> seen;
  for (std::uint32_t t = 0; t < 12; ++t) {
    const Lane out = sh.tick(t < 8 ? tagged(t, 100 + t) : Lane{});
    if (out.hi.valid && out.lo.valid) seen.emplace_back(out.hi.tag, out.lo.tag);
    if (t < 2) {
      EXPECT_FALSE(out.hi.valid && out.lo.valid) << t;
    }
  }
  const std::vector<std::pair<int, int>> expected = {{0, 1},     {100, 101}, {2, 3},     {102, 103},
                                                     {4, 5},     {104, 105}, {6, 7},     {106, 107}};
  EXPECT_EQ(seen, expected);
}

TEST(DataShuffler, FirstOutputAfterLPlusOne) {
  DataShuffler sh(4);
  EXPECT_EQ(sh.delay(), 5u);
  int first = -1;
  for (std::uint32_t t = 0; t < 20 && first < 0; ++t) {
    const Lane out = sh.tick(t < 8 ? tagged(t, 100 + t) : Lane{});
    if (out.hi.valid) first = static_cast<int>(t);
  }
  EXPECT_EQ(first, 5);
}

TEST(DataShuffler, ZeroLengthRejected) { EXPECT_THROW(DataShuffler(0), std::invalid_argument); }

TEST(DataShuffler, SwapsHalfSelectWithCycleBit) {
  for (std::size_t len : {1u, 2u, 4u, 8u}) {
    const std::size_t cycles = 4 * len;
    DataShuffler sh(len);
    std::vector<Lane> out;
    for (std::size_t t = 0; t < cycles + len + 1; ++t) {
      const Lane o = sh.tick(t < cycles ? tagged(static_cast<std::uint32_t>(t),
                                                 static_cast<std::uint32_t>(1000 + t))
                                        : Lane{});
      if (t >= len + 1) out.push_back(o);
    }
    ASSERT_EQ(out.size(), cycles);
    for (std::size_t c = 0; c < cycles; ++c) {
      const bool bit = (c / len) % 2 == 1;
      const std::uint32_t hi = bit ? static_cast<std::uint32_t>(1000 + c - len) : static_cast<std::uint32_t>(c);
      const std::uint32_t lo = bit ? static_cast<std::uint32_t>(1000 + c) : static_cast<std::uint32_t>(c + len);
      EXPECT_EQ(out[c].hi.tag, hi) << "L=" << len << " c=" << c;
      EXPECT_EQ(out[c].lo.tag, lo) << "L=" << len << " c=" << c;
    }
  }
}

TEST(RowExchange, WiresRowPairsAfterOneRegister) {
  RowExchange x(4, 1);
  std::vector<Lane> in = {tagged(0, 10), tagged(1, 11), tagged(2, 12), tagged(3, 13)};
  const auto first = x.tick(in);
  for (const auto& l : first) EXPECT_FALSE(l.hi.valid);
  const auto out = x.tick(std::vector<Lane>(4));
  // Rows 0<->2 and 1<->3 pair up.
  EXPECT_EQ(out[0].hi.tag, 0u);
  EXPECT_EQ(out[0].lo.tag, 2u);
  EXPECT_EQ(out[2].hi.tag, 10u);
  EXPECT_EQ(out[2].lo.tag, 12u);
  EXPECT_EQ(out[1].lo.tag, 3u);
  EXPECT_EQ(out[3].hi.tag, 11u);
}

double engine_error(std::size_t n, std::size_t rows, unsigned l_op, std::uint32_t seed) {
  const auto x = random_complex(n, seed);
  const auto got = fft_engine_run(x, EngineConfig::uniform(n, rows, l_op, 200e6));
  return relative_error(got.spectrum, dft_1d(x), l2_norm(x));
}

TEST(Engine, DeltaGivesAllOnes) {
  for (std::size_t rows : {1u, 2u, 4u}) {
    std::vector<Complex> x(8);
    x[0] = 1.0;
    const auto got = fft_engine_run(x, EngineConfig::uniform(8, rows, 2, 200e6));
    for (const auto& v : got.spectrum) EXPECT_EQ(v, Complex(1, 0)) << "R=" << rows;
  }
}

TEST(Engine, MatchesOracleUpTo1024) {
  for (std::size_t n = 8; n <= 1024; n *= 2)
    for (std::size_t rows : {1u, 2u, 4u}) {
      EXPECT_LT(engine_error(n, rows, 1, static_cast<std::uint32_t>(n + rows)), 1e-9)
          << "N=" << n << " R=" << rows;
    }
}

TEST(Engine, MatchesOracleAt8192FourRows) { EXPECT_LT(engine_error(8192, 4, 3, 8192), 1e-9); }

TEST(Engine, WideRowsDownToOneCyclePerFrame) {
  EXPECT_LT(engine_error(16, 8, 0, 1), 1e-9);
  EXPECT_LT(engine_error(64, 32, 2, 2), 1e-9);
  EXPECT_LT(engine_error(2, 1, 0, 3), 1e-9);
}

TEST(Engine, MeasuredLatencyEqualsClosedForm) {
  for (std::size_t n : {8u, 64u, 512u, 2048u})
    for (std::size_t rows : {1u, 2u, 4u})
      for (unsigned l_op : {0u, 3u, 9u, 14u}) {
        auto cfg = EngineConfig::uniform(n, rows, l_op, 300e6);
        const auto x = random_complex(n, 5);
        const auto got = fft_engine_run(x, cfg);
        const std::uint64_t lbut = 3 * l_op + 4;
        const std::uint64_t expected = (lbut + 1) * log2_exact(n) + n / (2 * rows) - 1;
        EXPECT_EQ(got.report.latency_cycles, expected) << n << " " << rows << " " << l_op;
        EXPECT_EQ(got.report.total_cycles, expected + n / (2 * rows));
        cfg.input_register_cycles = 1;
        EXPECT_EQ(fft_engine_run(x, cfg).report.latency_cycles, expected + 1);
      }
}

TEST(Engine, LatencyExamples) {
  const auto x512 = random_complex(512, 1);
  EXPECT_EQ(fft_engine_run(x512, EngineConfig::uniform(512, 1, 3, 250e6)).report.latency_cycles, 381u);
  const auto x1024 = random_complex(1024, 1);
  const auto r = fft_engine_run(x1024, EngineConfig::uniform(1024, 1, 6, 345e6)).report;
  EXPECT_EQ(r.latency_cycles, 741u);
  EXPECT_NEAR(r.total_seconds * 1e6, 3.63, 0.005);
}

TEST(Engine, UnevenOperatorLatencies) {
  EngineConfig cfg{256, 2, {14, 12, 14}, 250e6, 0};
  const auto x = random_complex(256, 77);
  const auto got = fft_engine_run(x, cfg);
  EXPECT_EQ(got.report.latency_cycles, (44u + 1) * 8 + 64 - 1);
  EXPECT_LT(relative_error(got.spectrum, dft_1d(x), l2_norm(x)), 1e-9);
}

TEST(Engine, StreamsWithoutBubbles) {
  for (std::size_t rows : {1u, 2u, 4u}) {
    const std::size_t n = 64;
    std::vector<std::vector<Complex>> frames;
    for (std::uint32_t f = 0; f < 5; ++f) frames.push_back(random_complex(n, 300 + f));
    const PipelinedFftEngine engine(EngineConfig::uniform(n, rows, 2, 200e6));
    const auto got = engine.run_batch(frames);
    EXPECT_EQ(got.report.bubbles, 0u);
    EXPECT_EQ(got.report.last_output_tick - got.report.first_output_tick + 1, 5 * n / (2 * rows));
    for (std::size_t f = 0; f < 5; ++f)
      EXPECT_LT(relative_error(got.spectra[f], dft_1d(frames[f]), l2_norm(frames[f])), 1e-9);
  }
}

TEST(Engine, Linearity) {
  const std::size_t n = 256;
  const auto x = random_complex(n, 1), y = random_complex(n, 2);
  const Complex a{0.7, -1.3}, b{-2.0, 0.25};
  std::vector<Complex> z(n);
  for (std::size_t i = 0; i < n; ++i) z[i] = a * x[i] + b * y[i];
  const auto cfg = EngineConfig::uniform(n, 2, 4, 200e6);
  const auto X = fft_engine_run(x, cfg).spectrum, Y = fft_engine_run(y, cfg).spectrum;
  const auto Z = fft_engine_run(z, cfg).spectrum;
  std::vector<Complex> combo(n);
  for (std::size_t i = 0; i < n; ++i) combo[i] = a * X[i] + b * Y[i];
  EXPECT_LT(relative_error(Z, combo, l2_norm(z)), 1e-9);
}

TEST(Engine, ShiftRegisterStorageIsNMinus2R) {
  for (std::size_t n = 8; n <= 8192; n *= 2)
    for (std::size_t rows : {1u, 2u, 4u}) {
      const PipelinedFftEngine e(EngineConfig::uniform(n, rows, 0, 1e8));
      EXPECT_EQ(e.storage_words(), n - 2 * rows) << n << " " << rows;
    }
}

TEST(Engine, SingleRowCommutatorLengths) {
  const std::size_t n = 64;
  const PipelinedFftEngine e(EngineConfig::uniform(n, 1, 0, 1e8));
  for (unsigned s = 1; s < log2_exact(n); ++s) {
    const auto& x = std::get<PipelinedFftEngine::Commutator>(e.exchange_after(s));
    EXPECT_EQ(x.length, n >> (s + 1)) << "stage " << s;
  }
}

TEST(Engine, MultiRowUsesWiringFirst) {
  const PipelinedFftEngine e(EngineConfig::uniform(64, 4, 0, 1e8));
  EXPECT_TRUE(std::holds_alternative<PipelinedFftEngine::RowSwap>(e.exchange_after(1)));
  EXPECT_TRUE(std::holds_alternative<PipelinedFftEngine::RowSwap>(e.exchange_after(2)));
  EXPECT_EQ(std::get<PipelinedFftEngine::Commutator>(e.exchange_after(3)).length, 4u);
}

// The 8-point DIF flow graph: stage, upper, lower, exponent of W_8.
using Edge = std::tuple<unsigned, std::uint32_t, std::uint32_t, std::uint64_t>;
const std::set<Edge> kDif8 = {
    {1, 0, 4, 0}, {1, 1, 5, 1}, {1, 2, 6, 2}, {1, 3, 7, 3},  //
    {2, 0, 2, 0}, {2, 1, 3, 2}, {2, 4, 6, 0}, {2, 5, 7, 2},  //
    {3, 0, 1, 0}, {3, 2, 3, 0}, {3, 4, 5, 0}, {3, 6, 7, 0}};

TEST(Engine, ReproducesEightPointFlowGraph) {
  for (std::size_t rows : {1u, 2u, 4u}) {
    PipelinedFftEngine e(EngineConfig::uniform(8, rows, 1, 1e8));
    std::set<Edge> seen;
    e.set_trace([&](const ButterflyEvent& ev) { seen.insert({ev.stage, ev.tag_hi, ev.tag_lo, ev.exponent}); });
    e.run(random_complex(8, 9));
    EXPECT_EQ(seen, kDif8) << "R=" << rows;
  }
}

TEST(Engine, ButterflyPairsFollowDifPatternAtLargerSizes) {
  for (std::size_t rows : {1u, 2u, 4u}) {
    const std::size_t n = 128;
    PipelinedFftEngine e(EngineConfig::uniform(n, rows, 0, 1e8));
    std::map<unsigned, std::size_t> count;
    bool ok = true;
    e.set_trace([&](const ButterflyEvent& ev) {
      const std::uint32_t d = static_cast<std::uint32_t>(n >> ev.stage);
      const bool upper = (ev.tag_hi & d) == 0;
      ok = ok && upper && ev.tag_lo == ev.tag_hi + d && ev.exponent == (ev.tag_hi % d) << (ev.stage - 1);
      ++count[ev.stage];
    });
    e.run(random_complex(n, 4));
    EXPECT_TRUE(ok) << "R=" << rows;
    for (unsigned s = 1; s <= 7; ++s) EXPECT_EQ(count[s], n / 2);
  }
}

TEST(Engine, TwiddleRomAddressing) {
  const std::size_t n = 64, rows = 2;
  const PipelinedFftEngine e(EngineConfig::uniform(n, rows, 0, 1e8));
  for (unsigned s = 1; s <= 6; ++s)
    for (std::size_t r = 0; r < rows; ++r) {
      const auto rom = e.twiddle_rom(s, r);
      ASSERT_EQ(rom.size(), n / (2 * rows));
      for (std::size_t c = 0; c < rom.size(); ++c) {
        const std::uint64_t idx = e.in_place_index(s, 0, r, c);
        const std::uint64_t d = n >> s;
        EXPECT_EQ(rom[c].exponent, (idx % d) << (s - 1));
        const double angle = -2.0 * std::numbers::pi * static_cast<double>(rom[c].exponent) / n;
        EXPECT_LT(std::abs(rom[c].w - std::exp(Complex{0, angle})), 1e-15);
      }
    }
}

TEST(Engine, RejectsBadInput) {
  EXPECT_THROW(fft_engine_run(std::vector<Complex>(7), EngineConfig::uniform(8, 1, 0, 1e8)),
               std::invalid_argument);
  EXPECT_THROW(fft_engine_run(std::vector<Complex>(12), EngineConfig::uniform(12, 1, 0, 1e8)),
               std::invalid_argument);
  EXPECT_THROW(PipelinedFftEngine(EngineConfig::uniform(8, 8, 0, 1e8)), std::invalid_argument);
  EXPECT_THROW(PipelinedFftEngine(EngineConfig::uniform(8, 1, 15, 1e8)), std::invalid_argument);
}

TEST(EngineMetrics, RateFigures) {
  const auto r1 = engine_metrics(EngineConfig::uniform(512, 1, 3, 250e6));
  EXPECT_DOUBLE_EQ(r1.bytes_per_second, 32.0 * 250e6);
  EXPECT_NEAR(r1.gib_per_second, 7.45, 0.005);
  EXPECT_NEAR(r1.gflops, 22.5, 1e-9);
  const auto r4 = engine_metrics(EngineConfig::uniform(2048, 4, 6, 376e6));
  EXPECT_NEAR(r4.gflops, 165.44, 1e-9);
  EXPECT_EQ(r4.total_cycles, r4.latency_cycles + 2048 / 8);
}

}  // namespace
}  // namespace mfft::pipeline
