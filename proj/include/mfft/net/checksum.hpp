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

// Ones'-complement Internet checksum.

#pragma once

#include <cstdint>
#include <span>

namespace mfft::net {

/// Adds big-endian 16-bit words to `acc`; an odd trailing byte is padded
/// with zero.
inline std::uint32_t checksum_accumulate(std::span<const std::uint8_t> data, std::uint32_t acc = 0) {
  std::size_t i = 0;
  for (; i + 1 < data.size(); i += 2) acc += static_cast<std::uint32_t>(data[i] << 8 | data[i + 1]);
  if (i < data.size()) acc += static_cast<std::uint32_t>(data[i] << 8);
  return acc;
}

inline std::uint16_t checksum_fold(std::uint32_t acc) {
  while (acc >> 16) acc = (acc & 0xFFFF) + (acc >> 16);
  return static_cast<std::uint16_t>(~acc & 0xFFFF);
}

inline std::uint16_t internet_checksum(std::span<const std::uint8_t> data) {
  return checksum_fold(checksum_accumulate(data));
}

}  // namespace mfft::net
