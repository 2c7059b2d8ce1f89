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
#include <vector>

namespace mfft::pipeline {

/// Fixed-length shift register. shift() returns the value that was pushed
/// `length()` ticks earlier; a zero-length line is a wire.
template <typename T>
class DelayLine {
 public:
  explicit DelayLine(std::size_t length = 0) : slots_(length) {}

  std::size_t length() const { return slots_.size(); }

  T shift(T in) {
    if (slots_.empty()) return in;
    T out = std::move(slots_[head_]);
    slots_[head_] = std::move(in);
    if (++head_ == slots_.size()) head_ = 0;
    return out;
  }

  void clear() {
    for (auto& s : slots_) s = T{};
    head_ = 0;
  }

 private:
  std::vector<T> slots_;
  std::size_t head_ = 0;
};

}  // namespace mfft::pipeline
