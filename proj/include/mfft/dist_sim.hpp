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

// Functional simulation of the distributed 3D FFT on a Pu x Pv grid of
// virtual nodes: X transform, XY fold, Y transform, YZ fold, Z transform.
//
// Real input is transformed real-to-complex: after the X phase only bins
// kx = 0..N/2 are kept. Bins kx < N/2 are dealt out in contiguous blocks of
// N/2Pu over the row; the Nyquist bin kx = N/2 goes to the last node of the
// row (u = Pu-1) as a side buffer, and in the YZ fold is split by ky like
// every other plane. Complex input (used by the inverse) deals out all N bins.

#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <future>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "mfft/domain.hpp"
#include "mfft/numerics.hpp"
#include "mfft/pipeline/engine.hpp"

namespace mfft {

/// One bulk transfer of a fold.
struct Message {
  NodeCoord src;
  NodeCoord dst;
  Fold fold = Fold::xy;
  std::vector<Complex> payload;
};

/// Delivers a message and returns the payload as received. The default moves
/// it untouched; wire.hpp provides one that goes through the frame codec.
using Transport = std::function<std::vector<Complex>(const Message&)>;

struct DistOptions {
  std::size_t rows = 1;
  pipeline::OperatorLatency op{1, 1, 1};
  double clock_hz = 200e6;
  bool parallel = false;  // run the nodes of a phase on separate threads
  Transport transport;
};

struct LinkRecord {
  NodeCoord src;
  NodeCoord dst;
  Fold fold = Fold::xy;
  std::uint64_t bytes = 0;
  friend bool operator==(const LinkRecord&, const LinkRecord&) = default;
};

/// Per-node byte counts of one fold, indexed by rank.
struct FoldTraffic {
  std::vector<std::uint64_t> sent;
  std::vector<std::uint64_t> received;
  std::vector<std::uint64_t> kept;
  friend bool operator==(const FoldTraffic&, const FoldTraffic&) = default;
};

struct CommLedger {
  std::array<FoldTraffic, 2> folds;
  std::vector<LinkRecord> messages;  // in send order

  const FoldTraffic& fold(Fold f) const { return folds[static_cast<std::size_t>(f)]; }

  std::size_t message_count(NodeCoord src, NodeCoord dst, Fold f) const {
    std::size_t n = 0;
    for (const auto& m : messages) n += m.src == src && m.dst == dst && m.fold == f;
    return n;
  }

  /// Bytes exchanged between nodes that differ in both u and v.
  std::uint64_t cross_bytes() const {
    std::uint64_t b = 0;
    for (const auto& m : messages)
      if (m.src.u != m.dst.u && m.src.v != m.dst.v) b += m.bytes;
    return b;
  }

  friend bool operator==(const CommLedger&, const CommLedger&) = default;
};

struct NodeReport {
  NodeCoord coord;
  std::array<std::size_t, 3> lines{};             // 1D transforms per phase
  std::array<std::uint64_t, 3> engine_cycles{};   // streaming cycles per phase
  friend bool operator==(const NodeReport&, const NodeReport&) = default;
};

struct DistResult {
  ComplexGrid spectrum;
  CommLedger ledger;
  std::vector<NodeReport> nodes;  // by rank
};

namespace detail {

class DistributedFft {
 public:
  DistributedFft(const PencilGrid& grid, bool real_input, const DistOptions& opt)
      : g_(grid), real_(real_input), opt_(opt), n_(grid.n()) {
    if (!is_power_of_two(n_) || n_ < 2)
      throw std::invalid_argument("distributed FFT: N must be a power of two >= 2");
    regular_ = real_ ? n_ / 2 : n_;
    if (regular_ % g_.pu() != 0)
      throw std::invalid_argument("distributed FFT: real input needs Pu to divide N/2 (N=" +
                                  std::to_string(n_) + ", Pu=" + std::to_string(g_.pu()) + ")");
    block_ = regular_ / g_.pu();
    engine_cfg_ = pipeline::EngineConfig{n_, opt.rows, opt.op, opt.clock_hz, 0};
    engine_cfg_.validate();
  }

  DistResult run(const ComplexGrid& field) {
    if (field.n() != n_) throw std::invalid_argument("distributed FFT: field size does not match grid");
    const std::size_t p = g_.p();
    DistResult out{ComplexGrid(n_), {}, std::vector<NodeReport>(p)};
    for (auto& f : out.ledger.folds) f = {std::vector<std::uint64_t>(p), std::vector<std::uint64_t>(p),
                                          std::vector<std::uint64_t>(p)};
    for (std::size_t r = 0; r < p; ++r) out.nodes[r].coord = g_.coord(r);

    // X pencils: line (k', j') -> index k' * N/Pu + j', samples along x.
    std::vector<Lines> x(p);
    for (std::size_t r = 0; r < p; ++r) {
      const Box b = g_.pencil(g_.coord(r), Phase::x);
      for (std::size_t k = b.range[2].begin; k < b.range[2].end; ++k)
        for (std::size_t j = b.range[1].begin; j < b.range[1].end; ++j) {
          std::vector<Complex> line(n_);
          for (std::size_t i = 0; i < n_; ++i) line[i] = field(i, j, k);
          x[r].push_back(std::move(line));
        }
    }
    transform_all(x, 0, out.nodes);

    auto y = fold_xy(x, out.ledger);
    transform_all(y, 1, out.nodes);
    auto z = fold_yz(y, out.ledger);
    transform_all(z, 2, out.nodes);
    gather(z, out.spectrum);
    return out;
  }

 private:
  using Lines = std::vector<std::vector<Complex>>;

  // Bins held by column u in the Y and Z phases, Nyquist last.
  std::size_t local_bins(std::size_t u) const { return block_ + (has_nyquist(u) ? 1 : 0); }
  bool has_nyquist(std::size_t u) const { return real_ && u + 1 == g_.pu(); }
  std::size_t bin_of(std::size_t u, std::size_t b) const { return b < block_ ? u * block_ + b : n_ / 2; }

  void transform_all(std::vector<Lines>& nodes, int phase, std::vector<NodeReport>& reports) const {
    auto work = [&](std::size_t r) {
      reports[r].lines[phase] = nodes[r].size();
      if (nodes[r].empty()) return;
      const pipeline::PipelinedFftEngine engine(engine_cfg_);
      auto batch = engine.run_batch(nodes[r]);
      reports[r].engine_cycles[phase] = batch.report.last_output_tick + 1;
      nodes[r] = std::move(batch.spectra);
    };
    if (opt_.parallel) {
      std::vector<std::future<void>> jobs;
      for (std::size_t r = 0; r < nodes.size(); ++r) jobs.push_back(std::async(std::launch::async, work, r));
      for (auto& j : jobs) j.get();  // barrier; rethrows
    } else {
      for (std::size_t r = 0; r < nodes.size(); ++r) work(r);
    }
  }

  std::vector<Complex> deliver(Message&& m, CommLedger& ledger) const {
    const std::uint64_t bytes = m.payload.size() * kComplexBytes;
    auto& t = ledger.folds[static_cast<std::size_t>(m.fold)];
    if (m.src == m.dst) {
      t.kept[g_.rank(m.src)] += bytes;
      return std::move(m.payload);
    }
    t.sent[g_.rank(m.src)] += bytes;
    t.received[g_.rank(m.dst)] += bytes;
    ledger.messages.push_back({m.src, m.dst, m.fold, bytes});
    if (!opt_.transport) return std::move(m.payload);
    auto got = opt_.transport(m);
    if (got.size() != m.payload.size()) throw std::runtime_error("transport changed the payload length");
    return got;
  }

  // XY: node (u,v) sends bins of column q to (q,v). Payload runs k', j', bin.
  std::vector<Lines> fold_xy(const std::vector<Lines>& x, CommLedger& ledger) const {
    const std::size_t p = g_.p(), nj = n_ / g_.pu(), nk = n_ / g_.pv();
    std::vector<Lines> y(p);
    for (std::size_t r = 0; r < p; ++r)
      y[r].assign(nk * local_bins(g_.coord(r).u), std::vector<Complex>(n_));

    for (std::size_t sr = 0; sr < p; ++sr) {
      const NodeCoord src = g_.coord(sr);
      for (std::size_t q = 0; q < g_.pu(); ++q) {
        const NodeCoord dst{q, src.v};
        const std::size_t bins = local_bins(q);
        Message m{src, dst, Fold::xy, {}};
        m.payload.reserve(nk * nj * bins);
        for (std::size_t kk = 0; kk < nk; ++kk)
          for (std::size_t jj = 0; jj < nj; ++jj) {
            const auto& line = x[sr][kk * nj + jj];
            for (std::size_t b = 0; b < block_; ++b) m.payload.push_back(line[bin_of(q, b)]);
          }
        if (has_nyquist(q))
          for (std::size_t kk = 0; kk < nk; ++kk)
            for (std::size_t jj = 0; jj < nj; ++jj) m.payload.push_back(x[sr][kk * nj + jj][n_ / 2]);

        const auto data = deliver(std::move(m), ledger);
        // Y line (k', bin) over j; this source fills j in its u block.
        const std::size_t j0 = src.u * nj;
        auto& lines = y[g_.rank(dst)];
        std::size_t at = 0;
        for (std::size_t kk = 0; kk < nk; ++kk)
          for (std::size_t jj = 0; jj < nj; ++jj)
            for (std::size_t b = 0; b < block_; ++b) lines[kk * bins + b][j0 + jj] = data[at++];
        if (has_nyquist(q))
          for (std::size_t kk = 0; kk < nk; ++kk)
            for (std::size_t jj = 0; jj < nj; ++jj) lines[kk * bins + block_][j0 + jj] = data[at++];
      }
    }
    return y;
  }

  // YZ: node (u,v) sends ky block w to (u,w). Payload runs k', bin, ky'.
  std::vector<Lines> fold_yz(const std::vector<Lines>& y, CommLedger& ledger) const {
    const std::size_t p = g_.p(), nk = n_ / g_.pv();
    std::vector<Lines> z(p);
    for (std::size_t r = 0; r < p; ++r)
      z[r].assign(nk * local_bins(g_.coord(r).u), std::vector<Complex>(n_));

    for (std::size_t sr = 0; sr < p; ++sr) {
      const NodeCoord src = g_.coord(sr);
      const std::size_t bins = local_bins(src.u);
      for (std::size_t w = 0; w < g_.pv(); ++w) {
        const NodeCoord dst{src.u, w};
        const std::size_t ky0 = w * nk;
        Message m{src, dst, Fold::yz, {}};
        m.payload.reserve(nk * bins * nk);
        for (std::size_t kk = 0; kk < nk; ++kk)
          for (std::size_t b = 0; b < bins; ++b)
            for (std::size_t ky = 0; ky < nk; ++ky) m.payload.push_back(y[sr][kk * bins + b][ky0 + ky]);

        const auto data = deliver(std::move(m), ledger);
        // Z line (ky', bin) over k; this source fills k in its v block.
        const std::size_t k0 = src.v * nk;
        auto& lines = z[g_.rank(dst)];
        std::size_t at = 0;
        for (std::size_t kk = 0; kk < nk; ++kk)
          for (std::size_t b = 0; b < bins; ++b)
            for (std::size_t ky = 0; ky < nk; ++ky) lines[ky * bins + b][k0 + kk] = data[at++];
      }
    }
    return z;
  }

  void gather(const std::vector<Lines>& z, ComplexGrid& out) const {
    const std::size_t nk = n_ / g_.pv();
    for (std::size_t r = 0; r < g_.p(); ++r) {
      const NodeCoord c = g_.coord(r);
      const std::size_t bins = local_bins(c.u);
      for (std::size_t ky = 0; ky < nk; ++ky)
        for (std::size_t b = 0; b < bins; ++b) {
          const auto& line = z[r][ky * bins + b];
          for (std::size_t kz = 0; kz < n_; ++kz) out(bin_of(c.u, b), c.v * nk + ky, kz) = line[kz];
        }
    }
    if (!real_) return;
    // Redundant half of a real-input spectrum.
    for (std::size_t kz = 0; kz < n_; ++kz)
      for (std::size_t ky = 0; ky < n_; ++ky)
        for (std::size_t kx = n_ / 2 + 1; kx < n_; ++kx)
          out(kx, ky, kz) = std::conj(out(n_ - kx, (n_ - ky) % n_, (n_ - kz) % n_));
  }

  PencilGrid g_;
  bool real_;
  DistOptions opt_;
  std::size_t n_;
  std::size_t regular_ = 0;
  std::size_t block_ = 0;
  pipeline::EngineConfig engine_cfg_;
};

}  // namespace detail

/// Forward transform of a real field. The spectrum is in natural order.
inline DistResult run_distributed_3dfft(const RealGrid& field, const PencilGrid& grid,
                                        const DistOptions& opt = {}) {
  return detail::DistributedFft(grid, true, opt).run(to_complex(field));
}

/// Forward transform of a complex field (all N bins dealt out in the XY fold).
inline DistResult run_distributed_3dfft(const ComplexGrid& field, const PencilGrid& grid,
                                        const DistOptions& opt = {}) {
  return detail::DistributedFft(grid, false, opt).run(field);
}

/// Inverse through the forward machinery: conjugate, transform, conjugate,
/// scale by 1/N^3. The returned grid holds the field (real input gives a
/// negligible imaginary part).
inline DistResult run_distributed_inverse(const ComplexGrid& spectrum, const PencilGrid& grid,
                                          const DistOptions& opt = {}) {
  ComplexGrid conj = spectrum;
  for (auto& v : conj.values()) v = std::conj(v);
  DistResult r = run_distributed_3dfft(conj, grid, opt);
  const double scale = 1.0 / static_cast<double>(r.spectrum.size());
  for (auto& v : r.spectrum.values()) v = std::conj(v) * scale;
  return r;
}

}  // namespace mfft
