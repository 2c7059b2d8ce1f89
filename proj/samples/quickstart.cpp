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

// Small tour: one engine run, one distributed transform, one prediction.

#include <cstdio>

#include "mfft/dist_sim.hpp"
#include "mfft/fft_pipeline.hpp"
#include "mfft/perf_model.hpp"

int main() {
  using namespace mfft;

  // 1D engine, N=64 on two rows.
  const auto cfg = pipeline::EngineConfig::uniform(64, 2, 3, 250e6);
  std::vector<Complex> x(64);
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = Complex(std::cos(0.3 * static_cast<double>(i)), 0.0);
  const auto run = pipeline::fft_engine_run(x, cfg);
  std::printf("engine N=64 R=2: latency %llu cycles, error vs DFT %.3g\n",
              static_cast<unsigned long long>(run.report.latency_cycles),
              max_abs_diff(run.spectrum, dft_1d(x)));

  // 3D transform of a real field on a 2x2 node grid.
  RealGrid field(8);
  for (std::size_t z = 0; z < 8; ++z)
    for (std::size_t y = 0; y < 8; ++y)
      for (std::size_t i = 0; i < 8; ++i) field(i, y, z) = static_cast<double>((i * 3 + y * 5 + z * 7) % 11);
  const auto r = run_distributed_3dfft(field, PencilGrid(8, 2, 2));
  std::printf("distributed N=8 P=4: %zu messages, error vs dft_3d %.3g\n", r.ledger.messages.size(),
              max_abs_diff(r.spectrum.values(), dft_3d(to_complex(field)).values()));

  // Streaming pipelined time for three components, N=2048 on 16 nodes.
  PredictConfig p;
  p.mu = 3;
  p.ns = {2048};
  p.ps = {16};
  std::printf("predicted time N=2048 P=16 mu=3: %.3g s\n", *predict_table(p).cells[0][0].seconds);
}
