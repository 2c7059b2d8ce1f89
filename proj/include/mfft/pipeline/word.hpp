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

#include <cstdint>

#include "mfft/numerics.hpp"

namespace mfft::pipeline {

/// One complex sample on a stream. `tag` is the in-place index the sample
/// currently stands for, carried through so tests can watch the dataflow.
struct Word {
  Complex value{};
  std::uint32_t tag = 0;
  bool valid = false;
};

/// The two words a row moves per cycle: `hi` is the upper butterfly input.
struct Lane {
  Word hi;
  Word lo;
};

}  // namespace mfft::pipeline
