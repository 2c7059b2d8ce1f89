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

// Table generators shared by the CLI, the acceptance run and the tests.
// Column schemas are listed in docs/formats.md.

#pragma once

#include <cstdio>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "mfft/fft_pipeline.hpp"
#include "mfft/perf_model.hpp"
#include "mfft/reference_tables.hpp"

namespace mfft {

struct Table {
  std::string title;
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;  // "" is an empty cell
};

/// Shortest round-trippable-enough form used by every emitter.
inline std::string format_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

inline std::string csv_cell(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
  return q + '"';
}

inline void write_csv(std::ostream& os, const Table& t) {
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) os << (i ? "," : "") << csv_cell(cells[i]);
    os << '\n';
  };
  line(t.header);
  for (const auto& r : t.rows) line(r);
}

inline void write_markdown(std::ostream& os, const Table& t) {
  if (!t.title.empty()) os << "### " << t.title << "\n\n";
  auto line = [&](const std::vector<std::string>& cells) {
    os << '|';
    for (const auto& c : cells) os << ' ' << c << " |";
    os << '\n';
  };
  line(t.header);
  os << '|';
  for (std::size_t i = 0; i < t.header.size(); ++i) os << "---|";
  os << '\n';
  for (const auto& r : t.rows) line(r);
}

inline void write_text(std::ostream& os, const Table& t) {
  std::vector<std::size_t> w(t.header.size(), 0);
  auto widen = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size() && i < w.size(); ++i) w[i] = std::max(w[i], cells[i].size());
  };
  widen(t.header);
  for (const auto& r : t.rows) widen(r);
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) os << "  ";
      os << std::string(w[i] - cells[i].size(), ' ') << cells[i];
    }
    os << '\n';
  };
  if (!t.title.empty()) os << t.title << '\n';
  line(t.header);
  for (const auto& r : t.rows) line(r);
}

enum class TableFormat { csv, md, text };

inline TableFormat parse_table_format(const std::string& s) {
  if (s == "csv") return TableFormat::csv;
  if (s == "md") return TableFormat::md;
  if (s == "text") return TableFormat::text;
  throw std::invalid_argument("unknown table format '" + s + "'");
}

inline void write_table(std::ostream& os, const Table& t, TableFormat f) {
  switch (f) {
    case TableFormat::csv: write_csv(os, t); break;
    case TableFormat::md: write_markdown(os, t); break;
    case TableFormat::text: write_text(os, t); break;
  }
}

inline std::string to_string(const Table& t, TableFormat f) {
  std::ostringstream os;
  write_table(os, t, f);
  return os.str();
}

// ---------------------------------------------------------------------------
// Single-engine figures against the published rows.

struct EngineCheck {
  const reference::EngineRow* row = nullptr;
  pipeline::CycleReport report;
  bool simulated = false;
  long latency_delta = 0;  // computed minus printed
  bool latency_ok = false;
  bool l_fft_ok = false;
  bool t_fft_ok = false;
  bool bandwidth_ok = false;
  bool gflops_ok = false;

  bool ok() const { return latency_ok && l_fft_ok && t_fft_ok && bandwidth_ok && gflops_ok; }
};

inline pipeline::EngineConfig engine_config_of(const reference::EngineRow& r) {
  pipeline::EngineConfig cfg{r.n, r.rows, r.op, r.f_max_mhz * 1e6, 1};
  cfg.validate();
  return cfg;
}

/// With `simulate` the latency is measured by streaming a frame through the
/// cycle model; otherwise the closed form is used.
inline EngineCheck check_engine_row(const reference::EngineRow& r, bool simulate) {
  const auto cfg = engine_config_of(r);
  EngineCheck c;
  c.row = &r;
  c.simulated = simulate;
  if (simulate) {
    std::vector<Complex> x(r.n);
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = Complex(static_cast<double>(i % 7), -static_cast<double>(i % 3));
    c.report = pipeline::fft_engine_run(x, cfg).report;
  } else {
    c.report = pipeline::engine_metrics(cfg);
  }
  c.latency_delta = static_cast<long>(c.report.latency_cycles) - static_cast<long>(r.latency_cycles);
  c.latency_ok = c.latency_delta >= -1 && c.latency_delta <= 1;
  c.l_fft_ok = reference::matches_printed(c.report.latency_seconds * 1e6, r.l_fft_us);
  c.t_fft_ok = reference::matches_printed(c.report.total_seconds * 1e6, r.t_fft_us);
  c.bandwidth_ok = reference::matches_printed(c.report.gib_per_second, r.gib_per_second);
  c.gflops_ok = reference::matches_printed(c.report.gflops, r.gflops);
  return c;
}

inline Table engine_table(const std::vector<EngineCheck>& checks) {
  Table t{"Single engine figures at the published f_max",
          {"R", "N", "l_op", "f_mhz", "latency_cycles", "printed_latency", "l_fft_us", "t_fft_us", "b_fft_gib_s",
           "gflops", "printed_gflops", "match"},
          {}};
  for (const auto& c : checks) {
    const auto& r = *c.row;
    t.rows.push_back({std::to_string(r.rows), std::to_string(r.n), std::string(r.l_op_label),
                      format_number(r.f_max_mhz), std::to_string(c.report.latency_cycles),
                      std::to_string(r.latency_cycles), format_number(c.report.latency_seconds * 1e6),
                      format_number(c.report.total_seconds * 1e6), format_number(c.report.gib_per_second),
                      format_number(c.report.gflops), std::string(r.gflops), c.ok() ? "yes" : "no"});
  }
  return t;
}

// ---------------------------------------------------------------------------
// Performance model tables.

inline Table predict_as_table(const PredictTable& p) {
  Table t{"Expected calculation time (s), mu=" + std::to_string(p.config.mu), {"N"}, {}};
  for (auto pp : p.config.ps) t.header.push_back("P=" + std::to_string(pp));
  for (const auto& row : p.cells) {
    std::vector<std::string> cells{std::to_string(row.front().n)};
    for (const auto& c : row) cells.push_back(c.seconds ? format_number(*c.seconds) : "");
    t.rows.push_back(std::move(cells));
  }
  return t;
}

/// Per-node network bandwidth of both topologies against P, in Gb/s.
inline Table bandwidth_curves(unsigned rows, double clock_hz, const std::vector<std::uint64_t>& ps,
                              double link_gbps) {
  Table t{"Network bandwidth per node (Gb/s)", {"P", "sqrtP", "switched_gbps", "torus_gbps", "link_gbps", "torus_over_link"}, {}};
  for (auto p : ps) {
    const double sw = network_bandwidth(Topology::switched, rows, 1 / clock_hz, p) * 8 / 1e9;
    const double to = network_bandwidth(Topology::torus, rows, 1 / clock_hz, p) * 8 / 1e9;
    t.rows.push_back({std::to_string(p), std::to_string(exact_sqrt(p)), format_number(sw), format_number(to),
                      format_number(link_gbps), to > link_gbps ? "yes" : "no"});
  }
  return t;
}

/// Smallest side sqrt(P) at which the torus requirement exceeds the link.
inline std::uint64_t torus_threshold_side(unsigned rows, double clock_hz, double link_gbps) {
  const double per_hop = 2.0 * kWordBytes * rows * clock_hz * 8 / 1e9;  // Gb/s per (sqrt(P)-1)
  std::uint64_t side = 1;
  while (per_hop * static_cast<double>(side - 1) <= link_gbps) ++side;
  return side;
}

inline Table comparison_table(const std::vector<ComparisonColumn>& cols, const std::string& title) {
  Table t{title, {"quantity"}, {}};
  for (const auto& c : cols) t.header.push_back(to_string(c.kind));
  auto row = [&](const std::string& name, auto get) {
    std::vector<std::string> cells{name};
    for (const auto& c : cols) cells.push_back(get(c));
    t.rows.push_back(std::move(cells));
  };
  row("total_time", [](const ComparisonColumn& c) { return format_number(c.total_time); });
  row("bandwidth", [](const ComparisonColumn& c) { return format_number(c.bandwidth); });
  row("ram", [](const ComparisonColumn& c) { return format_number(c.ram); });
  row("n_ldma", [](const ComparisonColumn& c) { return std::to_string(c.counts.n_ldma); });
  row("n_hdma", [](const ComparisonColumn& c) { return std::to_string(c.counts.n_hdma); });
  row("q", [](const ComparisonColumn& c) { return std::to_string(c.counts.q); });
  row("n_net", [](const ComparisonColumn& c) { return std::to_string(c.counts.n_net); });
  return t;
}

inline Table timeline_table(const Timeline& tl) {
  Table t{"Timeline", {"event", "time_s", "description"}, {}};
  for (const auto& e : tl.events) t.rows.push_back({e.label, format_number(e.time), e.description});
  return t;
}

}  // namespace mfft
