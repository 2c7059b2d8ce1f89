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

// Parallel-pipelined radix-2 DIF engine with R rows. Element n of a frame
// enters as hl*N/2 + r*M + c (M = N/2R): half-select hl, row r, cycle c.
// Stage s pairs index bit S-s, which has to sit in the hl position; between
// stages the next bit is brought there either by fixed row wiring (row bits)
// or by a commutator of length 2^j (cycle bit j). Every stage ends in one
// register: the wiring register, the commutator output register, or, after
// the last stage, the output register.

#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "mfft/numerics.hpp"
#include "mfft/pipeline/butterfly.hpp"
#include "mfft/pipeline/config.hpp"
#include "mfft/pipeline/delay_line.hpp"
#include "mfft/pipeline/shuffler.hpp"
#include "mfft/pipeline/word.hpp"

namespace mfft::pipeline {

inline std::uint64_t bit_reverse(std::uint64_t v, unsigned bits) {
  std::uint64_t r = 0;
  for (unsigned b = 0; b < bits; ++b, v >>= 1) r = (r << 1) | (v & 1);
  return r;
}

/// ROM word: W_N^exponent.
struct TwiddleEntry {
  Complex w;
  std::uint64_t exponent = 0;
};

/// Emitted when a stage consumes a valid pair.
struct ButterflyEvent {
  unsigned stage = 0;  // 1-based
  std::size_t row = 0;
  std::size_t step = 0;
  std::uint64_t tick = 0;
  std::uint32_t tag_hi = 0;
  std::uint32_t tag_lo = 0;
  std::uint64_t exponent = 0;
};

/// Observed behaviour of one streaming run.
struct StreamReport {
  CycleReport cycles;  // latency measured on the first frame
  std::size_t frames = 0;
  std::uint64_t first_output_tick = 0;
  std::uint64_t last_output_tick = 0;
  std::uint64_t bubbles = 0;  // output-idle ticks between first and last output
};

struct EngineRun {
  std::vector<Complex> spectrum;
  CycleReport report;
};

struct BatchRun {
  std::vector<std::vector<Complex>> spectra;
  StreamReport report;
};

class PipelinedFftEngine {
 public:
  struct RowSwap {
    unsigned row_bit;
  };
  struct Commutator {
    std::size_t length;
  };
  using Exchange = std::variant<RowSwap, Commutator>;
  using Layout = std::vector<unsigned>;  // physical bit -> logical index bit

  explicit PipelinedFftEngine(EngineConfig cfg) : cfg_(cfg) {
    cfg_.validate();
    s_ = cfg_.stages();
    m_ = cfg_.frame_cycles();
    m_bits_ = log2_exact(m_);
    plan();
  }

  const EngineConfig& config() const { return cfg_; }

  /// Interconnect between stage s and s+1, s = 1..S-1.
  const Exchange& exchange_after(unsigned stage) const { return exchanges_.at(stage - 1); }

  /// Bit layout seen at the input of `stage` (1-based).
  const Layout& layout_at(unsigned stage) const { return layouts_.at(stage - 1); }

  /// In-place index held by slot (hl, row, step) at the input of `stage`.
  std::uint64_t in_place_index(unsigned stage, unsigned hl, std::size_t row, std::size_t step) const {
    return index_of(layouts_.at(stage - 1), hl, row, step);
  }

  std::span<const TwiddleEntry> twiddle_rom(unsigned stage, std::size_t row) const {
    return rom_.at(stage - 1).at(row);
  }

  /// Commutator shift-register words in one row chain.
  std::size_t storage_words_per_row() const {
    std::size_t w = 0;
    for (const auto& e : exchanges_)
      if (const auto* c = std::get_if<Commutator>(&e)) w += 2 * c->length;
    return w;
  }
  std::size_t storage_words() const { return storage_words_per_row() * cfg_.rows; }

  void set_trace(std::function<void(const ButterflyEvent&)> hook) { trace_ = std::move(hook); }

  EngineRun run(std::span<const Complex> x) const {
    std::vector<std::vector<Complex>> frames{{x.begin(), x.end()}};
    auto batch = run_batch(frames);
    return {std::move(batch.spectra.front()), batch.report.cycles};
  }

  /// Streams frames back to back, 2R words per cycle, and collects the
  /// naturally ordered spectra.
  BatchRun run_batch(std::span<const std::vector<Complex>> frames) const {
    if (frames.empty()) throw std::invalid_argument("PipelinedFftEngine: no frames");
    for (const auto& f : frames)
      if (f.size() != cfg_.n)
        throw std::invalid_argument("PipelinedFftEngine: frame length " + std::to_string(f.size()) +
                                    " does not match N=" + std::to_string(cfg_.n));

    Hardware hw(*this);
    const std::size_t rows = cfg_.rows;
    const std::size_t half = cfg_.n / 2;
    const std::uint64_t words_per_row = frames.size() * m_;
    const std::uint64_t limit = closed_form_latency(cfg_) + words_per_row + 64;

    BatchRun out;
    out.spectra.assign(frames.size(), std::vector<Complex>(cfg_.n));
    out.report.frames = frames.size();
    std::uint64_t produced = 0;  // output cycles collected
    bool seen_output = false;
    std::vector<Lane> lanes(rows);

    for (std::uint64_t tick = 0; produced < words_per_row; ++tick) {
      if (tick > limit) throw std::logic_error("PipelinedFftEngine: pipeline did not drain");
      for (std::size_t r = 0; r < rows; ++r) {
        Lane in{};
        if (tick < words_per_row) {
          const auto& f = frames[tick / m_];
          const std::size_t c = tick % m_;
          const std::size_t lo_idx = r * m_ + c;
          in.hi = {f[lo_idx], static_cast<std::uint32_t>(lo_idx), true};
          in.lo = {f[half + lo_idx], static_cast<std::uint32_t>(half + lo_idx), true};
        }
        lanes[r] = hw.input_regs[r].shift(in);
      }
      hw.step(lanes, tick, trace_);

      if (!lanes[0].hi.valid) {
        if (seen_output) ++out.report.bubbles;
        continue;
      }
      if (!seen_output) {
        seen_output = true;
        out.report.first_output_tick = tick;
      }
      out.report.last_output_tick = tick;
      auto& spectrum = out.spectra[produced / m_];
      const std::size_t c = produced % m_;
      for (std::size_t r = 0; r < rows; ++r) {
        place(spectrum, lanes[r].hi, 0, r, c);
        place(spectrum, lanes[r].lo, 1, r, c);
      }
      ++produced;
    }
    out.report.cycles = detail::report_from_latency(cfg_, out.report.first_output_tick);
    return out;
  }

 private:
  // Live register state for one run; the plan itself stays immutable.
  struct Hardware {
    explicit Hardware(const PipelinedFftEngine& e) : engine(e) {
      const auto& cfg = e.cfg_;
      input_regs.assign(cfg.rows, DelayLine<Lane>(cfg.input_register_cycles));
      output_regs.assign(cfg.rows, DelayLine<Lane>(1));
      units.assign(e.s_, std::vector<ButterflyUnit>(cfg.rows, ButterflyUnit(cfg.op)));
      counters.assign(e.s_, 0);
      started.assign(e.s_, false);
      for (const auto& x : e.exchanges_) {
        if (const auto* rs = std::get_if<RowSwap>(&x)) {
          row_swaps.emplace_back(RowExchange(cfg.rows, rs->row_bit));
          shufflers.emplace_back();
        } else {
          row_swaps.emplace_back(std::nullopt);
          shufflers.emplace_back(cfg.rows, DataShuffler(std::get<Commutator>(x).length));
        }
      }
    }

    void step(std::vector<Lane>& lanes, std::uint64_t tick,
              const std::function<void(const ButterflyEvent&)>& trace) {
      const std::size_t rows = lanes.size();
      for (unsigned s = 0; s < engine.s_; ++s) {
        if (!started[s] && lanes[0].hi.valid) started[s] = true;
        const std::size_t c = counters[s];
        for (std::size_t r = 0; r < rows; ++r) {
          const TwiddleEntry& t = engine.rom_[s][r][c];
          if (trace && lanes[r].hi.valid)
            trace({s + 1, r, c, tick, lanes[r].hi.tag, lanes[r].lo.tag, t.exponent});
          lanes[r] = units[s][r].tick(lanes[r], t.w);
        }
        if (started[s] && ++counters[s] == engine.m_) counters[s] = 0;

        if (s + 1 == engine.s_) {
          for (std::size_t r = 0; r < rows; ++r) lanes[r] = output_regs[r].shift(lanes[r]);
          break;
        }
        if (row_swaps[s]) {
          lanes = row_swaps[s]->tick(lanes);
        } else {
          for (std::size_t r = 0; r < rows; ++r) lanes[r] = shufflers[s][r].tick(lanes[r]);
        }
      }
    }

    const PipelinedFftEngine& engine;
    std::vector<DelayLine<Lane>> input_regs;
    std::vector<DelayLine<Lane>> output_regs;
    std::vector<std::vector<ButterflyUnit>> units;
    std::vector<std::size_t> counters;
    std::vector<bool> started;
    std::vector<std::optional<RowExchange>> row_swaps;
    std::vector<std::vector<DataShuffler>> shufflers;
  };

  void plan() {
    Layout layout(s_);
    for (unsigned p = 0; p < s_; ++p) layout[p] = p;
    const unsigned hl = s_ - 1;
    for (unsigned stage = 1; stage <= s_; ++stage) {
      if (stage > 1) {
        const unsigned want = s_ - stage;
        unsigned p = 0;
        while (layout[p] != want) ++p;
        std::swap(layout[p], layout[hl]);
        if (p >= m_bits_) {
          exchanges_.emplace_back(RowSwap{p - m_bits_});
        } else {
          exchanges_.emplace_back(Commutator{std::size_t{1} << p});
        }
      }
      layouts_.push_back(layout);

      // Upper element n of a pair at stage s: exponent (n mod 2^(S-s)) * 2^(s-1).
      std::vector<std::vector<TwiddleEntry>> per_row(cfg_.rows, std::vector<TwiddleEntry>(m_));
      const std::uint64_t span = std::uint64_t{1} << (s_ - stage);
      for (std::size_t r = 0; r < cfg_.rows; ++r)
        for (std::size_t c = 0; c < m_; ++c) {
          const std::uint64_t n = index_of(layout, 0, r, c);
          const std::uint64_t e = (n % span) << (stage - 1);
          per_row[r][c] = {twiddle(e, cfg_.n), e};
        }
      rom_.push_back(std::move(per_row));
    }
  }

  std::uint64_t index_of(const Layout& layout, unsigned hl, std::size_t row, std::size_t step) const {
    const std::uint64_t phys = (std::uint64_t{hl} << (s_ - 1)) | (std::uint64_t{row} << m_bits_) | step;
    std::uint64_t n = 0;
    for (unsigned p = 0; p < s_; ++p)
      if (phys >> p & 1) n |= std::uint64_t{1} << layout[p];
    return n;
  }

  void place(std::vector<Complex>& spectrum, const Word& w, unsigned hl, std::size_t row,
             std::size_t step) const {
    const std::uint64_t n = index_of(layouts_.back(), hl, row, step);
    if (!w.valid || w.tag != n)
      throw std::logic_error("PipelinedFftEngine: output slot does not hold the expected element");
    spectrum[bit_reverse(n, s_)] = w.value;
  }

  EngineConfig cfg_;
  unsigned s_ = 0;
  std::size_t m_ = 0;
  unsigned m_bits_ = 0;
  std::vector<Exchange> exchanges_;
  std::vector<Layout> layouts_;
  std::vector<std::vector<std::vector<TwiddleEntry>>> rom_;  // [stage][row][step]
  std::function<void(const ButterflyEvent&)> trace_;
};

/// One transform through a fresh engine.
inline EngineRun fft_engine_run(std::span<const Complex> x, const EngineConfig& cfg) {
  if (x.size() != cfg.n)
    throw std::invalid_argument("fft_engine_run: input length does not match N");
  return PipelinedFftEngine(cfg).run(x);
}

}  // namespace mfft::pipeline
