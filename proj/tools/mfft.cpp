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

// mfft: verification suites, model tables and distributed runs from the
// command line. Exit codes: 0 ok, 1 verification failed, 2 usage or config
// error, 3 file or format error.

#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "mfft/dist_sim.hpp"
#include "mfft/domain.hpp"
#include "mfft/fft_pipeline.hpp"
#include "mfft/grid_io.hpp"
#include "mfft/net/arp.hpp"
#include "mfft/net/datapath.hpp"
#include "mfft/net/pcap.hpp"
#include "mfft/numerics.hpp"
#include "mfft/perf_model.hpp"
#include "mfft/reference_tables.hpp"
#include "mfft/report.hpp"
#include "mfft/wire.hpp"

namespace {

using namespace mfft;

constexpr int kExitOk = 0;
constexpr int kExitFailed = 1;
constexpr int kExitUsage = 2;
constexpr int kExitIo = 3;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Check list printed by `verify`.

struct Check {
  std::string suite;
  std::string name;
  double measured = 0;
  double tolerance = 0;
  bool pass = false;
};

class CheckList {
 public:
  void add(std::string suite, std::string name, double measured, double tolerance, bool pass) {
    items_.push_back({std::move(suite), std::move(name), measured, tolerance, pass});
    const auto& c = items_.back();
    std::printf("%-4s %-6s %-58s measured=%-12s tolerance=%s\n", c.pass ? "PASS" : "FAIL", c.suite.c_str(),
                c.name.c_str(), format_number(c.measured).c_str(), format_number(c.tolerance).c_str());
    std::fflush(stdout);
  }

  /// Error-style check: pass when measured <= tolerance.
  void bound(std::string suite, std::string name, double measured, double tolerance) {
    add(std::move(suite), std::move(name), measured, tolerance, measured <= tolerance);
  }

  /// Exact check: measured is 0 when it holds.
  void exact(std::string suite, std::string name, bool holds) {
    add(std::move(suite), std::move(name), holds ? 0 : 1, 0, holds);
  }

  std::size_t failures() const {
    return static_cast<std::size_t>(std::count_if(items_.begin(), items_.end(), [](const Check& c) { return !c.pass; }));
  }
  std::size_t size() const { return items_.size(); }

 private:
  std::vector<Check> items_;
};

std::vector<Complex> random_line(std::size_t n, std::uint32_t seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<Complex> x(n);
  for (auto& v : x) v = {u(rng), u(rng)};
  return x;
}

RealGrid random_field(std::size_t n, std::uint32_t seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> v(n * n * n);
  for (auto& x : v) x = u(rng);
  return RealGrid(n, std::move(v));
}

// ---------------------------------------------------------------------------
// verify

struct VerifyOptions {
  std::string suite = "all";
  std::size_t n = 0;  // 0 selects the suite default
  std::size_t r = 0;
  unsigned l_op = 3;
  std::size_t pu = 2;
  std::size_t pv = 2;
  std::uint32_t seed = 1;
  std::size_t cases = 200;
  double tolerance = 1e-9;
};

void verify_fft(const VerifyOptions& o, CheckList& checks) {
  std::vector<std::pair<std::size_t, std::size_t>> configs;
  if (o.n) {
    configs.emplace_back(o.n, o.r ? o.r : 1);
  } else {
    for (std::size_t n = 8; n <= 8192; n *= 2)
      for (std::size_t r : {1u, 2u, 4u})
        if (!o.r || r == o.r) configs.emplace_back(n, r);
  }
  for (auto [n, r] : configs) {
    const auto cfg = pipeline::EngineConfig::uniform(n, r, o.l_op, 250e6);
    cfg.validate();
    const auto x = random_line(n, o.seed + static_cast<std::uint32_t>(n + r));
    const auto run = pipeline::fft_engine_run(x, cfg);
    const double err = relative_error(run.spectrum, dft_1d(x), l2_norm(x));
    checks.bound("fft", "engine vs DFT, N=" + std::to_string(n) + " R=" + std::to_string(r), err, o.tolerance);
  }
}

void verify_tables(CheckList& checks) {
  for (const auto& row : reference::kEngineRows) {
    const auto c = check_engine_row(row, true);
    const std::string tag = "R=" + std::to_string(row.rows) + " N=" + std::to_string(row.n) + " l_op=" +
                            std::string(row.l_op_label);
    checks.add("tables", tag + " latency cycles", static_cast<double>(c.latency_delta), 1, c.latency_ok);
    checks.exact("tables", tag + " l_FFT, T_FFT, B_FFT", c.l_fft_ok && c.t_fft_ok && c.bandwidth_ok);
    checks.add("tables", tag + " GFLOPS " + format_number(c.report.gflops) + " vs " + std::string(row.gflops),
               std::abs(c.report.gflops - reference::parse_cell(row.gflops)), 0, c.gflops_ok);
  }
}

void verify_dist(const VerifyOptions& o, CheckList& checks) {
  const std::size_t n = o.n ? o.n : 16;
  const PencilGrid g(n, o.pu, o.pv);
  const auto field = random_field(n, o.seed);
  const auto input = to_complex(field);
  const double norm = l2_norm(input.values());
  const std::string tag = "N=" + std::to_string(n) + " Pu=" + std::to_string(o.pu) + " Pv=" + std::to_string(o.pv);

  DistOptions opt;
  if (o.r) opt.rows = o.r;
  const auto fwd = run_distributed_3dfft(field, g, opt);
  checks.bound("dist", "forward vs 3D DFT, " + tag,
               relative_error(fwd.spectrum.values(), dft_3d(input).values(), norm), o.tolerance);
  const auto back = run_distributed_inverse(fwd.spectrum, g, opt);
  checks.bound("dist", "inverse round trip, " + tag, relative_error(back.spectrum.values(), input.values(), norm),
               o.tolerance);
  checks.exact("dist", "no traffic between nodes differing in u and v", fwd.ledger.cross_bytes() == 0);

  const auto vol = volumes(g);
  const auto& xy = fwd.ledger.fold(Fold::xy);
  bool rows_ok = true;
  for (std::size_t v = 0; v < g.pv(); ++v) {
    std::uint64_t row_sent = 0;
    for (std::size_t u = 0; u < g.pu(); ++u) row_sent += xy.sent[g.rank({u, v})];
    rows_ok = rows_ok && row_sent * g.pu() == g.pu() * vol.v_prime * (g.pu() - 1);
  }
  checks.exact("dist", "XY fold moves (Pu-1)/Pu of each row's data", rows_ok);

  DistOptions par = opt;
  par.parallel = true;
  const auto again = run_distributed_3dfft(field, g, par);
  checks.exact("dist", "parallel run is bit-identical", again.spectrum == fwd.spectrum && again.ledger == fwd.ledger);
}

void verify_codec(const VerifyOptions& o, CheckList& checks) {
  std::mt19937 rng(o.seed);
  std::size_t bad_round_trips = 0;
  std::size_t missed_flips = 0;
  for (std::size_t i = 0; i < o.cases; ++i) {
    net::FrameSpec s;
    for (auto& b : s.dst_mac.bytes) b = static_cast<std::uint8_t>(rng());
    for (auto& b : s.src_mac.bytes) b = static_cast<std::uint8_t>(rng());
    s.src_ip = {static_cast<std::uint32_t>(rng())};
    s.dst_ip = {static_cast<std::uint32_t>(rng())};
    s.src_port = static_cast<std::uint16_t>(rng());
    s.dst_port = static_cast<std::uint16_t>(rng());
    s.dscp = static_cast<std::uint8_t>(rng() & 63);
    s.identification = static_cast<std::uint16_t>(rng());
    s.ttl = static_cast<std::uint8_t>(rng());
    std::vector<std::uint8_t> payload(rng() % (net::kMaxUdpPayload + 1));
    for (auto& b : payload) b = static_cast<std::uint8_t>(rng());
    for (const auto& dp : net::kDatapaths) {
      const auto back = net::decode_frame(net::encode_frame(s, payload, dp), dp);
      bad_round_trips += back.headers.spec() != s || back.payload != payload;
    }
    const auto frame = net::serialize_udp(s, payload);
    for (std::size_t bit = 0; bit < 160; ++bit) {
      auto corrupt = frame;
      corrupt[net::kEthernetHeaderBytes + bit / 8] ^= static_cast<std::uint8_t>(1u << (bit % 8));
      try {
        net::parse_udp(corrupt);
        ++missed_flips;
      } catch (const net::CodecException& e) {
        missed_flips += e.error() != net::CodecError::checksum_mismatch;
      }
    }
  }
  checks.add("codec", "round trip over all datapath widths, " + std::to_string(o.cases) + " cases",
             static_cast<double>(bad_round_trips), 0, bad_round_trips == 0);
  checks.add("codec", "IPv4 header bit flips caught by the checksum", static_cast<double>(missed_flips), 0,
             missed_flips == 0);
  bool rejected = false;
  try {
    net::serialize_udp({}, std::vector<std::uint8_t>(net::kMaxUdpPayload + 1));
  } catch (const net::CodecException& e) {
    rejected = e.error() == net::CodecError::payload_too_large;
  }
  checks.exact("codec", "payload over 1472 bytes rejected", rejected);
  net::ArpCache cache;
  for (std::uint32_t i = 0; i <= net::ArpCache::kCapacity; ++i) cache.insert({i}, {});
  checks.exact("codec", "ARP cache evicts the oldest of 257 entries",
               cache.size() == 256 && !cache.lookup({0}) && cache.lookup({1}));
}

void verify_model(CheckList& checks) {
  for (unsigned mu : {1u, 3u}) {
    PredictConfig cfg;
    cfg.mu = mu;
    const auto t = predict_table(cfg);
    const auto& ref = reference::predict_grid(mu);
    bool mask = true;
    for (std::size_t i = 0; i < ref.size(); ++i)
      for (std::size_t j = 0; j < ref[i].size(); ++j) mask = mask && t.cells[i][j].seconds.has_value() == !ref[i][j].empty();
    checks.exact("model", "prediction mask, mu=" + std::to_string(mu), mask);
  }
  double worst = 0;
  for (std::uint64_t p : {4u, 16u, 64u, 256u, 1024u}) {
    const double ratio = network_bandwidth(Topology::torus, 4, 1 / 180e6, p) /
                         network_bandwidth(Topology::switched, 4, 1 / 180e6, p);
    worst = std::max(worst, std::abs(ratio - std::sqrt(static_cast<double>(p)) / 2));
  }
  checks.bound("model", "torus/switched = sqrt(P)/2", worst, 1e-12);
  const double sw = network_bandwidth(Topology::switched, 4, 1 / 180e6, 1024);
  checks.bound("model", "switched bandwidth at P=1024 is 22.32 GB/s", std::abs(sw / 1e9 - 22.32), 5e-3);
  double ratio_err = 0;
  for (unsigned mu = 1; mu <= 3; ++mu) {
    const auto cols = architecture_comparison(mu, 1);
    ratio_err = std::max(ratio_err, std::abs(cols[0].total_time / cols[1].total_time - 4.0 * mu / (mu + 1)));
  }
  checks.bound("model", "sequential/pipelined time = 4mu/(mu+1)", ratio_err, 1e-12);
}

int cmd_verify(const VerifyOptions& o) {
  if (o.n && (!is_power_of_two(o.n) || o.n < 2)) throw UsageError("--n must be a power of two >= 2");
  if (o.r && !is_power_of_two(o.r)) throw UsageError("--r must be a power of two");
  CheckList checks;
  const bool all = o.suite == "all";
  if (all || o.suite == "fft") verify_fft(o, checks);
  if (all || o.suite == "tables") verify_tables(checks);
  if (all || o.suite == "dist") verify_dist(o, checks);
  if (all || o.suite == "codec") verify_codec(o, checks);
  if (all || o.suite == "model") verify_model(checks);
  std::printf("%zu checks, %zu failed\n", checks.size(), checks.failures());
  return checks.failures() ? kExitFailed : kExitOk;
}

// ---------------------------------------------------------------------------
// Output helpers.

class Output {
 public:
  explicit Output(const std::string& path) {
    if (path.empty() || path == "-") return;
    file_.open(path, std::ios::binary);
    if (!file_) throw IoError("cannot open " + path + " for writing");
  }
  std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }
  void close() {
    if (file_.is_open()) {
      file_.close();
      if (!file_) throw IoError("write failed");
    }
  }

 private:
  std::ofstream file_;
};

// ---------------------------------------------------------------------------
// predict

struct PredictOptions {
  unsigned mu = 1;
  unsigned r = 4;
  unsigned k = 1;
  double f_mhz = 180;
  std::uint64_t device_bytes = std::uint64_t{8} << 30;
  std::string form = "half";
  std::string memory = "pipelined";
  std::vector<std::uint64_t> ns = {512, 1024, 2048, 4096, 8192};
  std::vector<std::uint64_t> ps = {1, 4, 16, 64, 256, 1024};
  std::string topology = "switched";
  double link_gbps = 200;
  std::uint64_t max_side = 32;
  std::string format = "csv";
  std::string output;
  std::string curves_output;
};

MemoryModel parse_memory_model(const std::string& s) {
  if (s == "sequential") return MemoryModel::sequential;
  if (s == "pipelined") return MemoryModel::pipelined;
  if (s == "pipelined_streaming") return MemoryModel::pipelined_streaming;
  throw UsageError("unknown memory model " + s);
}

int cmd_predict(const PredictOptions& o) {
  for (auto p : o.ps) {
    try {
      exact_sqrt(p);
    } catch (const std::invalid_argument&) {
      throw UsageError("P=" + std::to_string(p) + " is not a perfect square; the " + o.topology +
                       " model needs a sqrt(P) x sqrt(P) grid");
    }
  }
  PredictConfig cfg;
  cfg.ns = o.ns;
  cfg.ps = o.ps;
  cfg.mu = o.mu;
  cfg.rows = o.r;
  cfg.k = o.k;
  cfg.clock_hz = o.f_mhz * 1e6;
  cfg.device_bytes = o.device_bytes;
  cfg.form = o.form == "half" ? StreamingForm::half : StreamingForm::quarter;
  cfg.memory = parse_memory_model(o.memory);
  const auto fmt = parse_table_format(o.format);

  std::vector<std::uint64_t> curve_ps;
  for (std::uint64_t side = 1; side <= o.max_side; ++side) curve_ps.push_back(side * side);
  const auto curves = bandwidth_curves(o.r, cfg.clock_hz, curve_ps, o.link_gbps);

  Output out(o.output);
  write_table(out.stream(), predict_as_table(predict_table(cfg)), fmt);
  if (o.curves_output.empty()) {
    out.stream() << '\n';
    write_table(out.stream(), curves, fmt);
  } else {
    Output c(o.curves_output);
    write_table(c.stream(), curves, fmt);
    c.close();
  }
  out.close();
  const auto topo = parse_topology(o.topology);
  const auto side = torus_threshold_side(o.r, cfg.clock_hz, o.link_gbps);
  if (topo == Topology::torus)
    std::fprintf(stderr, "torus exceeds %s Gb/s from sqrt(P) = %llu\n", format_number(o.link_gbps).c_str(),
                 static_cast<unsigned long long>(side));
  return kExitOk;
}

// ---------------------------------------------------------------------------
// tables

struct TablesOptions {
  std::string which = "all";
  bool simulate = false;
  unsigned mu = 1;
  unsigned k = 1;
  std::string arch = "pipelined";
  std::uint64_t n = 1024;
  std::uint64_t pu = 4;
  std::uint64_t pv = 4;
  unsigned r = 4;
  double f_mhz = 180;
  double l_dma = 0;
  double l_comm = 0;
  double l_fft = 0;
  bool doubled_x = false;
  std::string format = "text";
  std::string output;
};

int cmd_tables(const TablesOptions& o) {
  const auto fmt = parse_table_format(o.format);
  std::vector<Table> tables;
  const bool all = o.which == "all";
  if (all || o.which == "engine") {
    std::vector<EngineCheck> checks;
    for (const auto& row : reference::kEngineRows) checks.push_back(check_engine_row(row, o.simulate));
    tables.push_back(engine_table(checks));
  }
  if (all || o.which == "comparison")
    tables.push_back(comparison_table(architecture_comparison(o.mu, o.k),
                                      "Architectures at k=" + std::to_string(o.k) + ", mu=" + std::to_string(o.mu)));
  if (all || o.which == "fixed-q")
    tables.push_back(comparison_table(fixed_engine_comparison(o.mu, 4 * o.k),
                                      "Q=" + std::to_string(4 * o.k) + ", mu=" + std::to_string(o.mu)));
  if (all || o.which == "timeline") {
    ArchSpec a;
    a.kind = parse_arch_kind(o.arch);
    a.k = o.k;
    a.mu = o.mu;
    a.rows = o.r;
    a.t_clk = 1 / (o.f_mhz * 1e6);
    a.n = o.n;
    a.pu = o.pu;
    a.pv = o.pv;
    a.l_dma = o.l_dma;
    a.l_comm = o.l_comm;
    a.l_fft = o.l_fft;
    a.doubled_x = o.doubled_x;
    auto t = timeline_table(timeline(a));
    t.title = "Timeline, " + to_string(a.kind) + " N=" + std::to_string(a.n) + " P=" + std::to_string(a.p());
    tables.push_back(std::move(t));
  }
  Output out(o.output);
  for (std::size_t i = 0; i < tables.size(); ++i) {
    if (i) out.stream() << '\n';
    write_table(out.stream(), tables[i], fmt);
  }
  out.close();
  return kExitOk;
}

// ---------------------------------------------------------------------------
// simulate

struct SimulateOptions {
  std::string input;
  std::string output;
  std::string ledger;
  std::size_t pu = 1;
  std::size_t pv = 1;
  std::size_t r = 1;
  unsigned l_op = 1;
  bool inverse = false;
  bool parallel = false;
  bool check_oracle = false;
  double tolerance = 1e-9;
  bool wire = false;
  std::string pcap;
  std::string rate = "10G";
  unsigned width = 0;
};

net::LineRate parse_rate(const std::string& s) {
  for (auto r : {net::LineRate::g1, net::LineRate::g10, net::LineRate::g40, net::LineRate::g100})
    if (net::to_string(r) == s) return r;
  throw UsageError("unknown line rate " + s);
}

int cmd_simulate(const SimulateOptions& o) {
  if (!o.pcap.empty() && !o.wire) throw UsageError("--pcap needs --wire");
  const GridFile in = load_grid_file(o.input);
  const std::size_t n = in.n();
  if (o.inverse && in.kind != WordKind::complex) throw UsageError("--inverse needs a complex grid");
  if (o.check_oracle && n > 64) throw UsageError("--check-oracle is limited to N <= 64");
  const PencilGrid g(n, o.pu, o.pv);

  std::optional<net::DatapathConfig> dp;
  if (o.wire) dp = o.width ? net::make_datapath(parse_rate(o.rate), o.width) : net::make_datapath(parse_rate(o.rate));
  std::ofstream pcap_file;
  if (!o.pcap.empty()) {
    pcap_file.open(o.pcap, std::ios::binary);
    if (!pcap_file) throw IoError("cannot open " + o.pcap + " for writing");
  }
  std::optional<WireTransport> wire;
  if (dp) wire.emplace(*dp, o.pcap.empty() ? nullptr : &pcap_file);

  DistOptions opt;
  opt.rows = o.r;
  opt.op = {o.l_op, o.l_op, o.l_op};
  opt.parallel = o.parallel;
  if (wire) opt.transport = wire->transport();

  GridFile out{WordKind::complex, {}, {}};
  Table ledger{"", {"component", "fold", "src_u", "src_v", "dst_u", "dst_v", "bytes", "packets"}, {}};
  std::uint64_t total_bytes = 0;
  std::size_t messages = 0;
  double worst = 0;
  for (std::size_t c = 0; c < in.components(); ++c) {
    const ComplexGrid field = in.kind == WordKind::complex ? in.complex[c] : to_complex(in.real[c]);
    DistResult r = o.inverse ? run_distributed_inverse(field, g, opt)
                   : in.kind == WordKind::real ? run_distributed_3dfft(in.real[c], g, opt)
                                               : run_distributed_3dfft(field, g, opt);
    if (o.check_oracle) {
      const auto oracle = o.inverse ? dft_3d(field, Direction::inverse) : dft_3d(field);
      auto expect = oracle;
      if (o.inverse)
        for (auto& v : expect.values()) v /= static_cast<double>(field.size());
      const double ref = o.inverse ? l2_norm(expect.values()) : l2_norm(field.values());
      worst = std::max(worst, relative_error(r.spectrum.values(), expect.values(), ref));
    }
    for (const auto& m : r.ledger.messages) {
      ledger.rows.push_back({std::to_string(c), to_string(m.fold), std::to_string(m.src.u), std::to_string(m.src.v),
                             std::to_string(m.dst.u), std::to_string(m.dst.v), std::to_string(m.bytes),
                             std::to_string(packets_for(m.bytes))});
      total_bytes += m.bytes;
      ++messages;
    }
    out.complex.push_back(std::move(r.spectrum));
  }
  if (!o.output.empty()) save_grid_file(o.output, out);
  if (!o.ledger.empty()) {
    Output l(o.ledger);
    write_csv(l.stream(), ledger);
    l.close();
  }
  if (pcap_file.is_open()) {
    pcap_file.close();
    if (!pcap_file) throw IoError("pcap write failed");
  }

  std::printf("N=%zu Pu=%zu Pv=%zu components=%zu messages=%zu bytes=%llu\n", n, o.pu, o.pv, in.components(),
              messages, static_cast<unsigned long long>(total_bytes));
  if (wire) {
    const auto s = wire->stats();
    std::printf("wire %s/%u-bit: frames=%zu frame_bytes=%zu words=%zu\n", net::to_string(dp->rate).c_str(),
                dp->width_bits, s.frames, s.frame_bytes, s.words);
  }
  if (o.check_oracle) {
    const bool ok = worst <= o.tolerance;
    std::printf("%s oracle max_error=%s tolerance=%s\n", ok ? "PASS" : "FAIL", format_number(worst).c_str(),
                format_number(o.tolerance).c_str());
    if (!ok) return kExitFailed;
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------
// gen-grid

struct GenOptions {
  std::size_t n = 8;
  std::string kind = "random";
  bool complex = false;
  unsigned mu = 1;
  std::uint32_t seed = 1;
  std::string output;
};

int cmd_gen_grid(const GenOptions& o) {
  if (o.n == 0 || o.n > 4096) throw UsageError("--n must be in 1..4096");
  GridFile g{o.complex ? WordKind::complex : WordKind::real, {}, {}};
  std::mt19937 rng(o.seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (unsigned c = 0; c < o.mu; ++c) {
    RealGrid re(o.n), im(o.n);
    for (std::size_t z = 0; z < o.n; ++z)
      for (std::size_t y = 0; y < o.n; ++y)
        for (std::size_t x = 0; x < o.n; ++x) {
          double a = 0, b = 0;
          if (o.kind == "random") {
            a = u(rng);
            b = o.complex ? u(rng) : 0.0;
          } else if (o.kind == "delta") {
            a = x == 0 && y == 0 && z == 0 ? 1.0 : 0.0;
          } else if (o.kind == "constant") {
            a = 1.0;
          } else {  // cosine along x, one period
            a = std::cos(2 * std::numbers::pi * static_cast<double>(x) / static_cast<double>(o.n));
          }
          re(x, y, z) = a;
          im(x, y, z) = b;
        }
    if (o.complex) {
      ComplexGrid cg(o.n);
      for (std::size_t i = 0; i < cg.size(); ++i) cg.values()[i] = {re.values()[i], im.values()[i]};
      g.complex.push_back(std::move(cg));
    } else {
      g.real.push_back(std::move(re));
    }
  }
  save_grid_file(o.output, g);
  return kExitOk;
}

// ---------------------------------------------------------------------------
// Config file: flat key=value lines become --key=value arguments placed ahead
// of the command-line ones; keys also given on the command line are dropped.

std::vector<std::string> read_config(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw IoError("cannot open config " + path);
  std::vector<std::string> args;
  std::string line;
  int lineno = 0;
  auto trim = [](std::string s) {
    const auto b = s.find_first_not_of(" \t\r");
    const auto e = s.find_last_not_of(" \t\r");
    return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
  };
  while (std::getline(is, line)) {
    ++lineno;
    line = trim(line.substr(0, line.find('#')));
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw UsageError(path + ":" + std::to_string(lineno) + ": expected key=value");
    std::string key = trim(line.substr(0, eq));
    std::replace(key.begin(), key.end(), '_', '-');
    args.push_back("--" + key + "=" + trim(line.substr(eq + 1)));
  }
  return args;
}

std::string option_key(const std::string& arg) {
  if (arg.rfind("--", 0) != 0) return {};
  return arg.substr(2, arg.find('=') == std::string::npos ? std::string::npos : arg.find('=') - 2);
}

std::vector<std::string> merge_config(std::vector<std::string> args) {
  std::string config;
  for (std::size_t i = 0; i < args.size();) {
    if (args[i] == "--config" && i + 1 < args.size()) {
      config = args[i + 1];
      args.erase(args.begin() + static_cast<std::ptrdiff_t>(i), args.begin() + static_cast<std::ptrdiff_t>(i + 2));
    } else if (args[i].rfind("--config=", 0) == 0) {
      config = args[i].substr(9);
      args.erase(args.begin() + static_cast<std::ptrdiff_t>(i));
    } else {
      ++i;
    }
  }
  if (config.empty()) return args;
  std::set<std::string> given;
  for (const auto& a : args) given.insert(option_key(a));
  std::vector<std::string> injected;
  for (auto& a : read_config(config))
    if (!given.count(option_key(a))) injected.push_back(std::move(a));
  // Right after the subcommand name.
  const auto sub = std::find_if(args.begin(), args.end(), [](const std::string& a) { return a.rfind("-", 0) != 0; });
  const auto at = sub == args.end() ? args.end() : sub + 1;
  args.insert(at, injected.begin(), injected.end());
  return args;
}

int run(int argc, char** argv) {
  CLI::App app{"Pipelined FFT engine, distributed 3D FFT and performance model toolkit"};
  app.require_subcommand(1);
  app.add_option("--config", "flat key=value file; command-line flags take precedence");

  const std::vector<std::string> formats = {"csv", "md", "text"};

  VerifyOptions vo;
  auto* verify = app.add_subcommand("verify", "run oracle and invariant checks");
  verify->add_option("--suite", vo.suite)->check(CLI::IsMember({"all", "fft", "tables", "dist", "codec", "model"}));
  verify->add_option("--n", vo.n, "transform size (suite default when omitted)");
  verify->add_option("--r", vo.r, "rows per engine");
  verify->add_option("--lop", vo.l_op, "operator latency")->check(CLI::Range(0u, 14u));
  verify->add_option("--pu", vo.pu)->check(CLI::PositiveNumber);
  verify->add_option("--pv", vo.pv)->check(CLI::PositiveNumber);
  verify->add_option("--seed", vo.seed);
  verify->add_option("--cases", vo.cases, "codec round-trip cases");
  verify->add_option("--tolerance", vo.tolerance);

  PredictOptions po;
  auto* predict = app.add_subcommand("predict", "system-level time prediction and network bandwidth curves");
  predict->add_option("--mu", po.mu)->check(CLI::Range(1u, 3u));
  predict->add_option("--r", po.r)->check(CLI::PositiveNumber);
  predict->add_option("--k", po.k)->check(CLI::PositiveNumber);
  predict->add_option("--f", po.f_mhz, "clock in MHz")->check(CLI::PositiveNumber);
  predict->add_option("--device-bytes", po.device_bytes);
  predict->add_option("--form", po.form, "streaming divisor: half (2PRk) or quarter (4PRk)")
      ->check(CLI::IsMember({"half", "quarter"}));
  predict->add_option("--memory", po.memory)->check(CLI::IsMember({"sequential", "pipelined", "pipelined_streaming"}));
  predict->add_option("--ns", po.ns)->delimiter(',');
  predict->add_option("--ps", po.ps)->delimiter(',');
  predict->add_option("--topology", po.topology)->check(CLI::IsMember({"switched", "torus"}));
  predict->add_option("--link-gbps", po.link_gbps)->check(CLI::PositiveNumber);
  predict->add_option("--max-side", po.max_side, "largest sqrt(P) in the bandwidth curves")->check(CLI::PositiveNumber);
  predict->add_option("--format", po.format)->check(CLI::IsMember(formats));
  predict->add_option("--output", po.output);
  predict->add_option("--curves-output", po.curves_output);

  TablesOptions to;
  auto* tables = app.add_subcommand("tables", "engine figures, architecture comparisons and timelines");
  tables->add_option("--which", to.which)->check(CLI::IsMember({"all", "engine", "comparison", "fixed-q", "timeline"}));
  tables->add_flag("--simulate", to.simulate, "measure engine latency with the cycle model");
  tables->add_option("--mu", to.mu)->check(CLI::Range(1u, 3u));
  tables->add_option("--k", to.k)->check(CLI::PositiveNumber);
  tables->add_option("--arch", to.arch)
      ->check(CLI::IsMember({"sequential", "pipelined", "parallel", "sequential_streaming", "pipelined_streaming"}));
  tables->add_option("--n", to.n)->check(CLI::PositiveNumber);
  tables->add_option("--pu", to.pu)->check(CLI::PositiveNumber);
  tables->add_option("--pv", to.pv)->check(CLI::PositiveNumber);
  tables->add_option("--r", to.r)->check(CLI::PositiveNumber);
  tables->add_option("--f", to.f_mhz)->check(CLI::PositiveNumber);
  tables->add_option("--ldma", to.l_dma, "cycles");
  tables->add_option("--lcomm", to.l_comm, "cycles");
  tables->add_option("--lfft", to.l_fft, "cycles");
  tables->add_flag("--doubled-x", to.doubled_x);
  tables->add_option("--format", to.format)->check(CLI::IsMember(formats));
  tables->add_option("--output", to.output);

  SimulateOptions so;
  auto* simulate = app.add_subcommand("simulate", "distributed 3D FFT of a grid file");
  simulate->add_option("--input", so.input)->required();
  simulate->add_option("--output", so.output, "spectrum grid file");
  simulate->add_option("--ledger", so.ledger, "per-message CSV");
  simulate->add_option("--pu", so.pu)->check(CLI::PositiveNumber);
  simulate->add_option("--pv", so.pv)->check(CLI::PositiveNumber);
  simulate->add_option("--r", so.r)->check(CLI::PositiveNumber);
  simulate->add_option("--lop", so.l_op)->check(CLI::Range(0u, 14u));
  simulate->add_flag("--inverse", so.inverse);
  simulate->add_flag("--parallel", so.parallel);
  simulate->add_flag("--check-oracle", so.check_oracle);
  simulate->add_option("--tolerance", so.tolerance);
  simulate->add_flag("--wire", so.wire, "send transposes through the UDP codec");
  simulate->add_option("--pcap", so.pcap, "capture file for --wire");
  simulate->add_option("--rate", so.rate)->check(CLI::IsMember({"1G", "10G", "40G", "100G"}));
  simulate->add_option("--width", so.width, "datapath width in bits (rate default when omitted)");

  GenOptions go;
  auto* gen = app.add_subcommand("gen-grid", "write a test grid file");
  gen->add_option("--n", go.n);
  gen->add_option("--kind", go.kind)->check(CLI::IsMember({"random", "delta", "constant", "cosine"}));
  gen->add_flag("--complex", go.complex);
  gen->add_option("--mu", go.mu)->check(CLI::Range(1u, 3u));
  gen->add_option("--seed", go.seed);
  gen->add_option("--output", go.output)->required();

  std::vector<std::string> args(argv + 1, argv + argc);
  args = merge_config(std::move(args));
  std::reverse(args.begin(), args.end());  // CLI11 consumes from the back
  try {
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  if (verify->parsed()) return cmd_verify(vo);
  if (predict->parsed()) return cmd_predict(po);
  if (tables->parsed()) return cmd_tables(to);
  if (simulate->parsed()) return cmd_simulate(so);
  if (gen->parsed()) return cmd_gen_grid(go);
  return kExitUsage;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const UsageError& e) {
    std::fprintf(stderr, "usage error: %s\n", e.what());
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "invalid configuration: %s\n", e.what());
    return kExitUsage;
  } catch (const IoError& e) {
    std::fprintf(stderr, "i/o error: %s\n", e.what());
    return kExitIo;
  } catch (const mfft::FormatError& e) {
    std::fprintf(stderr, "format error: %s\n", e.what());
    return kExitIo;
  } catch (const mfft::net::CodecException& e) {
    std::fprintf(stderr, "wire error: %s\n", e.what());
    return kExitFailed;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitFailed;
  }
}
