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
#include <span>
#include <stdexcept>
#include <vector>

#include "mfft/pipeline/delay_line.hpp"
#include "mfft/pipeline/word.hpp"

namespace mfft::pipeline {

/// Two-mux commutator. The lower input goes through an L-deep register before
/// the muxes, the upper mux output through another L-deep register after
/// them, then a 1-cycle output register. The select is the MSB of a counter
/// mod 2L that starts with the first valid input and then free-runs.
///
/// Net effect on a frame: exchanges the hi/lo position with cycle bit log2(L).
class DataShuffler {
 public:
  explicit DataShuffler(std::size_t length)
      : length_(length), lower_pre_(length), upper_post_(length), out_reg_(1) {
    if (length == 0) throw std::invalid_argument("DataShuffler: length must be >= 1");
  }

  std::size_t length() const { return length_; }
  std::size_t delay() const { return length_ + 1; }
  /// Words of shift-register storage (output register excluded).
  std::size_t storage_words() const { return lower_pre_.length() + upper_post_.length(); }

  Lane tick(const Lane& in) {
    const Word lower_delayed = lower_pre_.shift(in.lo);
    if (!started_ && (in.hi.valid || in.lo.valid)) started_ = true;
    const bool swap = started_ && counter_ >= length_;
    if (started_ && ++counter_ == 2 * length_) counter_ = 0;

    const Word mux_hi = swap ? lower_delayed : in.hi;
    const Word mux_lo = swap ? in.hi : lower_delayed;
    return out_reg_.shift(Lane{upper_post_.shift(mux_hi), mux_lo});
  }

 private:
  std::size_t length_;
  DelayLine<Word> lower_pre_;
  DelayLine<Word> upper_post_;
  DelayLine<Lane> out_reg_;
  std::size_t counter_ = 0;
  bool started_ = false;
};

/// Fixed wiring between row pairs (r, r | 2^k) followed by one register:
/// exchanges the hi/lo position with row bit k. No storage beyond the
/// register.
class RowExchange {
 public:
  RowExchange(std::size_t rows, unsigned row_bit) : bit_(std::size_t{1} << row_bit), reg_(rows) {
    if (bit_ >= rows) throw std::invalid_argument("RowExchange: row bit out of range");
  }

  std::size_t delay() const { return 1; }

  std::vector<Lane> tick(std::span<const Lane> in) {
    std::vector<Lane> wired(in.size());
    for (std::size_t r0 = 0; r0 < in.size(); ++r0) {
      if (r0 & bit_) continue;
      const std::size_t r1 = r0 | bit_;
      wired[r0] = {in[r0].hi, in[r1].hi};
      wired[r1] = {in[r0].lo, in[r1].lo};
    }
    std::swap(wired, reg_);
    return wired;
  }

 private:
  std::size_t bit_;
  std::vector<Lane> reg_;
};

}  // namespace mfft::pipeline
