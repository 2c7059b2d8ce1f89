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

// Published measurements of the single-engine hardware build and the
// system-level prediction grid, kept as printed so tests and the CLI can diff
// against them. Numeric cells are stored as text to preserve the printed
// precision.

#pragma once

#include <array>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "mfft/pipeline/butterfly.hpp"

namespace mfft::reference {

struct EngineRow {
  unsigned rows;
  unsigned n;
  std::string_view l_op_label;  // as printed, e.g. "14 (12)"
  pipeline::OperatorLatency op;
  double f_max_mhz;  // synthesis result, an input here
  std::string_view watt;
  unsigned latency_cycles;
  std::string_view l_fft_us;
  std::string_view t_fft_us;
  std::string_view gib_per_second;
  std::string_view gflops;
  std::string_view gflops_per_watt;
};

inline constexpr std::array<EngineRow, 60> kEngineRows = {{
    {1, 512, "3", {3, 3, 3}, 250, "4.142", 382, "1.53", "2.55", "7.45", "22.5", "5.43"},
    {1, 1024, "3", {3, 3, 3}, 247, "4.612", 652, "2.64", "4.71", "7.36", "24.7", "5.36"},
    {1, 2048, "3", {3, 3, 3}, 251, "5.262", 1178, "4.69", "8.77", "7.48", "27.61", "5.25"},
    {1, 4096, "3", {3, 3, 3}, 244, "6.02", 2216, "9.08", "17.48", "7.27", "29.28", "4.86"},
    {1, 8192, "3", {3, 3, 3}, 236, "6.967", 4278, "18.13", "35.48", "7.03", "30.68", "4.40"},
    {1, 512, "6", {6, 6, 6}, 348, "4.908", 463, "1.33", "2.07", "10.37", "31.32", "6.38"},
    {1, 1024, "6", {6, 6, 6}, 345, "5.824", 742, "2.15", "3.63", "10.28", "34.5", "5.92"},
    {1, 2048, "6", {6, 6, 6}, 346, "6.894", 1277, "3.69", "6.65", "10.31", "38.06", "5.52"},
    {1, 4096, "6", {6, 6, 6}, 323, "8.016", 2324, "7.20", "13.54", "9.63", "38.76", "4.84"},
    {1, 8192, "6", {6, 6, 6}, 344, "9.119", 4395, "12.78", "24.68", "10.25", "44.72", "4.90"},
    {1, 512, "9", {9, 9, 9}, 379, "5.729", 544, "1.44", "2.11", "11.30", "34.11", "5.95"},
    {1, 1024, "9", {9, 9, 9}, 376, "6.66", 832, "2.21", "3.57", "11.21", "37.6", "5.65"},
    {1, 2048, "9", {9, 9, 9}, 379, "7.781", 1376, "3.63", "6.33", "11.30", "41.69", "5.36"},
    {1, 4096, "9", {9, 9, 9}, 371, "8.997", 2432, "6.56", "12.08", "11.06", "44.52", "4.95"},
    {1, 8192, "9", {9, 9, 9}, 355, "10.21", 4512, "12.71", "24.25", "10.58", "46.15", "4.52"},
    {1, 512, "14 (12)", {14, 12, 14}, 380, "6.941", 661, "1.74", "2.41", "11.32", "34.2", "4.93"},
    {1, 1024, "14 (12)", {14, 12, 14}, 380, "8.131", 962, "2.53", "3.88", "11.32", "38", "4.67"},
    {1, 2048, "14 (12)", {14, 12, 14}, 380, "8.858", 1519, "4.00", "6.69", "11.32", "41.8", "4.72"},
    {1, 4096, "14 (12)", {14, 12, 14}, 365, "10.318", 2588, "7.09", "12.70", "10.88", "43.8", "4.25"},
    {1, 8192, "14 (12)", {14, 12, 14}, 345, "11.81", 4681, "13.57", "25.44", "10.28", "44.85", "3.80"},
    {2, 512, "3", {3, 3, 3}, 238, "6.791", 254, "1.07", "1.61", "14.19", "42.84", "6.31"},
    {2, 1024, "3", {3, 3, 3}, 232, "7.543", 396, "1.71", "2.81", "13.83", "46.4", "6.15"},
    {2, 2048, "3", {3, 3, 3}, 234, "8.248", 666, "2.85", "5.03", "13.95", "51.48", "6.24"},
    {2, 4096, "3", {3, 3, 3}, 230, "9.538", 1192, "5.18", "9.63", "13.71", "55.2", "5.79"},
    {2, 8192, "3", {3, 3, 3}, 244, "11.026", 2230, "9.14", "17.53", "14.54", "63.44", "5.75"},
    {2, 512, "6", {6, 6, 6}, 343, "10.265", 335, "0.98", "1.35", "20.44", "61.74", "6.01"},
    {2, 1024, "6", {6, 6, 6}, 344, "11.775", 486, "1.41", "2.16", "20.50", "68.8", "5.84"},
    {2, 2048, "6", {6, 6, 6}, 345, "12.508", 765, "2.22", "3.70", "20.56", "75.9", "6.07"},
    {2, 4096, "6", {6, 6, 6}, 341, "15.244", 1300, "3.81", "6.82", "20.33", "81.84", "5.37"},
    {2, 8192, "6", {6, 6, 6}, 330, "16.82", 2347, "7.11", "13.32", "19.67", "85.8", "5.10"},
    {2, 512, "9", {9, 9, 9}, 379, "11.465", 416, "1.10", "1.44", "22.59", "68.22", "5.95"},
    {2, 1024, "9", {9, 9, 9}, 378, "13.593", 576, "1.52", "2.20", "22.53", "75.6", "5.56"},
    {2, 2048, "9", {9, 9, 9}, 378, "14.997", 864, "2.29", "3.64", "22.53", "83.16", "5.55"},
    {2, 4096, "9", {9, 9, 9}, 378, "16.852", 1408, "3.72", "6.43", "22.53", "90.72", "5.38"},
    {2, 8192, "9", {9, 9, 9}, 377, "21.084", 2464, "6.54", "11.97", "22.47", "98.8", "4.65"},
    {2, 512, "14 (12)", {14, 12, 14}, 380, "13.14", 533, "1.40", "1.74", "22.65", "68.4", "5.21"},
    {2, 1024, "14 (12)", {14, 12, 14}, 392, "15.61", 706, "1.80", "2.45", "23.37", "78.4", "5.02"},
    {2, 2048, "14 (12)", {14, 12, 14}, 392, "16.747", 1007, "2.57", "3.88", "23.37", "86.24", "5.15"},
    {2, 4096, "14 (12)", {14, 12, 14}, 380, "20.231", 1564, "4.12", "6.81", "22.65", "91.2", "4.51"},
    {2, 8192, "14 (12)", {14, 12, 14}, 380, "24.05", 2633, "6.93", "12.32", "22.65", "98.8", "4.11"},
    {4, 512, "3", {3, 3, 3}, 226, "10.581", 190, "0.84", "1.12", "26.94", "81.36", "7.69"},
    {4, 1024, "3", {3, 3, 3}, 231, "12.809", 268, "1.16", "1.71", "27.54", "92.4", "7.21"},
    {4, 2048, "3", {3, 3, 3}, 230, "14.453", 410, "1.78", "2.90", "27.42", "101.2", "7.00"},
    {4, 4096, "3", {3, 3, 3}, 222, "15.646", 680, "3.06", "5.37", "26.46", "106.56", "6.81"},
    {4, 8192, "3", {3, 3, 3}, 231, "19.39", 1206, "5.22", "9.65", "27.54", "120.12", "6.19"},
    {4, 512, "6", {6, 6, 6}, 337, "16.928", 271, "0.80", "0.99", "40.17", "121.32", "7.17"},
    {4, 1024, "6", {6, 6, 6}, 337, "22.456", 358, "1.06", "1.44", "40.17", "134.8", "6.00"},
    {4, 2048, "6", {6, 6, 6}, 332, "20.552", 509, "1.53", "2.30", "39.58", "146.08", "7.11"},
    {4, 4096, "6", {6, 6, 6}, 333, "27.346", 788, "2.37", "3.90", "39.70", "159.84", "5.85"},
    {4, 8192, "6", {6, 6, 6}, 254, "34.343", 1323, "5.21", "9.24", "30.28", "132.08", "3.85"},
    {4, 512, "9", {9, 9, 9}, 379, "22.436", 352, "0.93", "1.10", "45.18", "136.44", "6.08"},
    {4, 1024, "9", {9, 9, 9}, 377, "25.801", 448, "1.19", "1.53", "44.94", "150.8", "5.84"},
    {4, 2048, "9", {9, 9, 9}, 376, "22.198", 608, "1.62", "2.30", "44.82", "165.44", "7.45"},
    {4, 4096, "9", {9, 9, 9}, 378, "32.156", 896, "2.37", "3.72", "45.06", "181.44", "5.64"},
    {4, 8192, "9", {9, 9, 9}, 291, "38.973", 1440, "4.95", "8.47", "34.69", "151.32", "3.88"},
    {4, 512, "14 (12)", {14, 12, 14}, 379, "23.047", 469, "1.24", "1.41", "45.18", "136.44", "5.92"},
    {4, 1024, "14 (12)", {14, 12, 14}, 379, "26.619", 578, "1.53", "1.86", "45.18", "151.6", "5.70"},
    {4, 2048, "14 (12)", {14, 12, 14}, 379, "21.274", 751, "1.98", "2.66", "45.18", "166.76", "7.84"},
    {4, 4096, "14 (12)", {14, 12, 14}, 384, "28.746", 1052, "2.74", "4.07", "45.78", "184.32", "6.41"},
    {4, 8192, "14 (12)", {14, 12, 14}, 308, "40.541", 1609, "5.22", "8.55", "36.72", "160.16", "3.95"},
}};

/// Parses a printed decimal cell.
inline double parse_cell(std::string_view s) {
  double v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || p != s.data() + s.size()) throw std::invalid_argument("bad cell '" + std::string(s) + "'");
  return v;
}

/// Number of digits after the decimal point in a printed cell.
inline int printed_decimals(std::string_view s) {
  const auto dot = s.find('.');
  return dot == std::string_view::npos ? 0 : static_cast<int>(s.size() - dot - 1);
}

/// True when `value` rounds to the printed cell at its own precision.
inline bool matches_printed(double value, std::string_view printed) {
  const double scale = std::pow(10.0, printed_decimals(printed));
  return std::llround(value * scale) == std::llround(parse_cell(printed) * scale);
}

// Expected calculation time in seconds, R=4, k=1, 180 MHz, 8 GB per node.
// Empty strings are the cells left blank because the data does not fit.
inline constexpr std::array<std::uint64_t, 5> kPredictNs = {512, 1024, 2048, 4096, 8192};
inline constexpr std::array<std::uint64_t, 6> kPredictPs = {1, 4, 16, 64, 256, 1024};
using PredictGrid = std::array<std::array<std::string_view, 6>, 5>;

inline constexpr PredictGrid kPredictMu1 = {{
    {"0.17", "0.047", "0.011", "0.0029", "0.00073", "0.00018"},
    {"", "0.37", "0.093", "0.023", "0.0058", "0.0014"},
    {"", "", "0.74", "0.19", "0.047", "0.012"},
    {"", "", "", "", "0.37", "0.093"},
    {"", "", "", "", "", "0.75"},
}};

inline constexpr PredictGrid kPredictMu3 = {{
    {"0.37", "0.093", "0.023", "0.0058", "0.0015", "0.00036"},
    {"", "0.75", "0.19", "0.047", "0.012", "0.0029"},
    {"", "", "1.49", "0.37", "0.093", "0.023"},
    {"", "", "", "", "0.75", "0.19"},
    {"", "", "", "", "", "1.49"},
}};

inline const PredictGrid& predict_grid(unsigned mu) {
  if (mu == 1) return kPredictMu1;
  if (mu == 3) return kPredictMu3;
  throw std::invalid_argument("no published prediction grid for mu=" + std::to_string(mu));
}

// Normalised architecture comparison, as functions of mu. Units: time
// t_clk N^3/2P, bandwidth 4s/t_clk, RAM sN^3/P.
struct ComparisonRow {
  double time, bandwidth, ram;
  unsigned ldma, hdma, q, net;
};

// The fixed-engine comparison only prints the first three rows.
struct ShortComparisonRow {
  double time, bandwidth, ram;
};

inline ComparisonRow published_k1(std::string_view arch, double mu) {
  const auto m = static_cast<unsigned>(mu);
  if (arch == "sequential") return {2 * mu, 1, 2, 2, 1, 1, 1};
  if (arch == "pipelined") return {(mu + 1) / 2, 1, 2, 4, 2, 4, 2};
  if (arch == "parallel") return {2, mu, 2 * mu, 2 * m, m, m, m};
  throw std::invalid_argument("unknown architecture");
}

inline ShortComparisonRow published_q4(std::string_view arch, double mu) {
  if (arch == "sequential") return {mu / 2, 4, 2};
  if (arch == "pipelined") return {(mu + 1) / 2, 1, 2};
  throw std::invalid_argument("unknown architecture");
}

}  // namespace mfft::reference
