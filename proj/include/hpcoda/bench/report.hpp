#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "hpcoda/common/numeric.hpp"
#include "hpcoda/fixture/generator.hpp"
#include "hpcoda/ingest/csv.hpp"
#include "hpcoda/kg/builder.hpp"
#include "hpcoda/rdf/ntriples.hpp"

namespace hpcoda::bench {

inline constexpr double kMiB = 1024.0 * 1024.0;

struct GraphStats {
  kg::SchemaMode mode = kg::SchemaMode::UnifiedUri;
  std::int64_t triples = 0;
  std::int64_t nodes = 0;
  std::int64_t bytes = 0;  // N-Triples serialization

  double mib() const { return static_cast<double>(bytes) / kMiB; }
  friend bool operator==(const GraphStats&, const GraphStats&) = default;
};

inline GraphStats graph_stats(const rdf::TripleStore& store, kg::SchemaMode mode) {
  const auto st = store.stats();
  const auto rep = rdf::measure_ntriples(store);
  return {mode, static_cast<std::int64_t>(st.triple_count), static_cast<std::int64_t>(st.node_count),
          static_cast<std::int64_t>(rep.bytes_written)};
}

// Percentages are truncated, not rounded, to two decimals.
inline double truncate2(double percent) { return std::floor(percent * 100.0 + 1e-9) / 100.0; }

// 1 - smaller/larger, as a percentage truncated to two decimals.
inline double reduction_percent(double larger, double smaller) {
  if (larger <= 0) return 0.0;
  return truncate2((1.0 - smaller / larger) * 100.0);
}

inline std::string percent_text(double p) {
  std::ostringstream out;
  out.setf(std::ios::fixed);
  out.precision(2);
  out << p;
  return out.str();
}

struct CompareReport {
  std::array<GraphStats, 3> stats;  // legacy, unified, unified-bnode
  double reduction_unified_vs_legacy = 0;
  double reduction_bnode_vs_unified = 0;
  std::int64_t reading_triples_legacy = 0;
  std::int64_t reading_triples_unified = 0;
  std::optional<std::int64_t> baseline_bytes;

  const GraphStats& legacy() const { return stats[0]; }
  const GraphStats& unified() const { return stats[1]; }
  const GraphStats& bnode() const { return stats[2]; }

  double reading_triple_reduction() const {
    return reduction_percent(static_cast<double>(reading_triples_legacy), static_cast<double>(reading_triples_unified));
  }
  std::optional<double> ratio_vs_baseline(const GraphStats& g) const {
    if (!baseline_bytes || *baseline_bytes <= 0) return std::nullopt;
    return static_cast<double>(g.bytes) / static_cast<double>(*baseline_bytes);
  }
};

inline constexpr std::array<kg::SchemaMode, 3> kAllModes{kg::SchemaMode::LegacyOda, kg::SchemaMode::UnifiedUri,
                                                         kg::SchemaMode::UnifiedBnode};

// Builds the three graphs (in parallel), serializes each and compares.
inline CompareReport compare_modes(const ingest::Dataset& ds, std::optional<std::int64_t> baseline_bytes = std::nullopt) {
  CompareReport rep;
  rep.baseline_bytes = baseline_bytes;
  std::array<std::int64_t, 3> reading_triples{};
  std::array<std::exception_ptr, 3> errors{};
  std::vector<std::thread> workers;
  for (std::size_t i = 0; i < kAllModes.size(); ++i) {
    workers.emplace_back([&, i] {
      try {
        kg::BuildOptions opts;
        opts.mode = kAllModes[i];
        auto res = kg::build(ds, opts);
        reading_triples[i] = static_cast<std::int64_t>(res.reading_triples);
        rep.stats[i] = graph_stats(res.store, kAllModes[i]);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    });
  }
  for (auto& w : workers) w.join();
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
  rep.reading_triples_legacy = reading_triples[0];
  rep.reading_triples_unified = reading_triples[1];
  rep.reduction_unified_vs_legacy =
      reduction_percent(static_cast<double>(rep.legacy().bytes), static_cast<double>(rep.unified().bytes));
  rep.reduction_bnode_vs_unified =
      reduction_percent(static_cast<double>(rep.unified().bytes), static_cast<double>(rep.bnode().bytes));
  return rep;
}

inline std::string mib_text(std::int64_t bytes) {
  std::ostringstream out;
  out.setf(std::ios::fixed);
  out.precision(2);
  out << static_cast<double>(bytes) / kMiB;
  return out.str();
}

inline std::string mode_label(kg::SchemaMode m) {
  switch (m) {
    case kg::SchemaMode::LegacyOda: return "Legacy ODA";
    case kg::SchemaMode::UnifiedUri: return "Unified (URI)";
    case kg::SchemaMode::UnifiedBnode: return "Unified (blank nodes)";
  }
  return "?";
}

inline void write_compare_text(const CompareReport& r, std::ostream& out) {
  const std::vector<std::string> head{"Version", "# Triples", "# Nodes", "Size [MiB]", "Bytes"};
  std::vector<std::vector<std::string>> rows;
  for (const auto& g : r.stats)
    rows.push_back({mode_label(g.mode), with_thousands(g.triples), with_thousands(g.nodes), mib_text(g.bytes),
                    with_thousands(g.bytes)});
  std::vector<std::size_t> w(head.size());
  for (std::size_t i = 0; i < head.size(); ++i) {
    w[i] = head[i].size();
    for (const auto& row : rows) w[i] = std::max(w[i], row[i].size());
  }
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i == 0) {
        out << cells[i] << std::string(w[i] - cells[i].size(), ' ');
      } else {
        out << "  " << std::string(w[i] - cells[i].size(), ' ') << cells[i];
      }
    }
    out << '\n';
  };
  line(head);
  for (const auto& row : rows) line(row);
  out << "reading triples: legacy " << with_thousands(r.reading_triples_legacy) << ", unified "
      << with_thousands(r.reading_triples_unified) << " (" << percent_text(r.reading_triple_reduction())
      << "% fewer)\n";
  out << "size reduction unified vs legacy: " << percent_text(r.reduction_unified_vs_legacy) << "%\n";
  out << "size reduction blank nodes vs unified: " << percent_text(r.reduction_bnode_vs_unified) << "%\n";
  if (r.baseline_bytes) {
    for (const auto* g : {&r.unified(), &r.bnode()}) {
      std::ostringstream ratio;
      ratio.setf(std::ios::fixed);
      ratio.precision(1);
      ratio << *r.ratio_vs_baseline(*g);
      out << "ratio vs tabular baseline, " << mode_label(g->mode) << ": " << ratio.str() << "x\n";
    }
  }
}

inline void write_compare_csv(const CompareReport& r, std::ostream& out) {
  out << "mode,triples,nodes,bytes\n";
  for (const auto& g : r.stats)
    out << ingest::csv::join_row({std::string(kg::mode_name(g.mode)), std::to_string(g.triples),
                                  std::to_string(g.nodes), std::to_string(g.bytes)});
}

// --- closed-form counts

struct DryRunCounts {
  std::int64_t readings = 0;
  std::int64_t static_triples = 0;   // topology, users, jobs
  std::int64_t reading_triples = 0;  // per-reading templates (and new time nodes with dedup)
  std::int64_t record_triples = 0;   // legacy DataRecord descriptions
  std::int64_t total() const { return static_triples + reading_triples + record_triples; }
};

namespace detail {

// Sample timestamps, one stream.
inline std::vector<std::int64_t> sample_times(const fixture::FixtureParams& p) {
  std::vector<std::int64_t> out;
  const auto n = p.samples_per_stream();
  out.reserve(static_cast<std::size_t>(n));
  for (std::int64_t i = 0; i < n; ++i) out.push_back(p.start_time + i * p.sampling_interval);
  return out;
}

inline std::int64_t distinct_days(const std::vector<std::int64_t>& times) {
  std::set<std::int64_t> days;
  for (const auto t : times) days.insert(t >= 0 ? t / 86'400 : (t - 86'399) / 86'400);
  return static_cast<std::int64_t>(days.size());
}

}  // namespace detail

// Triple counts for a fixture shape without generating readings.
inline DryRunCounts dry_run_counts(const fixture::FixtureParams& shape, kg::SchemaMode mode, bool dedup = false) {
  shape.check();
  fixture::FixtureParams statics = shape;
  statics.with_readings = false;
  const ingest::Dataset ds = fixture::generate(statics);
  kg::BuildOptions opts;
  opts.mode = mode;
  opts.dedup_time_nodes = dedup;
  const auto built = kg::build(ds, opts);

  DryRunCounts c;
  c.readings = shape.projected_readings();
  c.static_triples = static_cast<std::int64_t>(built.static_triples + built.job_triples);
  const auto times = detail::sample_times(shape);
  if (mode == kg::SchemaMode::LegacyOda) {
    c.reading_triples = 6 * c.readings;
    // One record per (node, plugin, day); every node has a single plugin.
    if (shape.sensors_per_node > 0)
      c.record_triples = 2 * static_cast<std::int64_t>(ds.compute_nodes.size()) * detail::distinct_days(times);
  } else if (!dedup) {
    c.reading_triples = 4 * c.readings;
  } else {
    // Shared time nodes: one timestamp triple per instant not already used by a job.
    std::set<std::int64_t> job_times;
    for (const auto& j : ds.jobs) {
      job_times.insert(j.start);
      job_times.insert(j.end);
    }
    std::int64_t fresh = 0;
    if (c.readings > 0)
      for (const auto t : times) fresh += job_times.count(t) ? 0 : 1;
    c.reading_triples = 3 * c.readings + fresh;
  }
  return c;
}

// Counts for an explicit reading total R (no shape): templates only.
inline DryRunCounts dry_run_counts_for_readings(std::int64_t readings, kg::SchemaMode mode) {
  DryRunCounts c;
  c.readings = readings;
  c.reading_triples = (mode == kg::SchemaMode::LegacyOda ? 6 : 4) * readings;
  return c;
}

// --- Table 5 replay and projections

struct Table5Replay {
  static constexpr std::int64_t kReadings = 4'229'280;
  static constexpr std::int64_t kLegacyTotal = 25'375'684;
  static constexpr std::int64_t kUnifiedTotal = 16'917'120;
  static constexpr std::int64_t kMaxStaticResidual = 10;

  std::int64_t legacy_reading_triples = 0;
  std::int64_t unified_reading_triples = 0;
  std::int64_t legacy_residual = 0;
  std::int64_t unified_residual = 0;

  bool consistent() const {
    return legacy_residual >= 0 && legacy_residual <= kMaxStaticResidual && unified_residual == 0;
  }
};

inline Table5Replay replay_table5() {
  Table5Replay r;
  r.legacy_reading_triples = dry_run_counts_for_readings(Table5Replay::kReadings, kg::SchemaMode::LegacyOda).reading_triples;
  r.unified_reading_triples =
      dry_run_counts_for_readings(Table5Replay::kReadings, kg::SchemaMode::UnifiedUri).reading_triples;
  r.legacy_residual = Table5Replay::kLegacyTotal - r.legacy_reading_triples;
  r.unified_residual = Table5Replay::kUnifiedTotal - r.unified_reading_triples;
  return r;
}

inline void write_table5_replay(const Table5Replay& r, std::ostream& out) {
  out << "readings: " << with_thousands(Table5Replay::kReadings) << '\n'
      << "legacy reading triples: " << with_thousands(r.legacy_reading_triples) << " (reported total "
      << with_thousands(Table5Replay::kLegacyTotal) << ", static residual " << r.legacy_residual << ")\n"
      << "unified reading triples: " << with_thousands(r.unified_reading_triples) << " (reported total "
      << with_thousands(Table5Replay::kUnifiedTotal) << ", static residual " << r.unified_residual << ")\n";
}

// Static part counted once, the remainder scaled by days.
inline std::int64_t project_storage(const GraphStats& day, std::int64_t days, std::int64_t static_bytes = 0) {
  if (days < 0) throw std::invalid_argument("days must be non-negative");
  return static_bytes + (day.bytes - static_bytes) * days;
}

inline double project_gib(double mib_per_day, std::int64_t days, double static_mib = 0.0) {
  if (days < 0) throw std::invalid_argument("days must be non-negative");
  return (static_mib + (mib_per_day - static_mib) * static_cast<double>(days)) / 1024.0;
}

inline double round2(double v) { return std::round(v * 100.0) / 100.0; }

// Reported per-day sizes in MiB for the three versions, and the raw tabular size.
struct ReportedSizes {
  static constexpr double kLegacyMiB = 1074.89;
  static constexpr double kUnifiedMiB = 657.36;
  static constexpr double kBnodeMiB = 481.00;
  static constexpr double kTabularMiB = 2.77;
};

struct FormulaSelfTest {
  double reduction_unified_vs_legacy = 0;  // expect 38.84
  double reduction_bnode_vs_unified = 0;   // expect 26.82
  double gib_legacy_28d = 0;               // expect 29.39
  double gib_unified_28d = 0;              // expect 17.97
  double gib_bnode_28d = 0;                // expect 13.15
  double ratio_unified = 0;                // ~237.3 (reported as 238)
  double ratio_bnode = 0;                  // ~173.6 (reported as 174)
};

inline FormulaSelfTest formula_self_test() {
  FormulaSelfTest t;
  t.reduction_unified_vs_legacy = reduction_percent(ReportedSizes::kLegacyMiB, ReportedSizes::kUnifiedMiB);
  t.reduction_bnode_vs_unified = reduction_percent(ReportedSizes::kUnifiedMiB, ReportedSizes::kBnodeMiB);
  t.gib_legacy_28d = round2(project_gib(ReportedSizes::kLegacyMiB, 28));
  t.gib_unified_28d = round2(project_gib(ReportedSizes::kUnifiedMiB, 28));
  t.gib_bnode_28d = round2(project_gib(ReportedSizes::kBnodeMiB, 28));
  t.ratio_unified = ReportedSizes::kUnifiedMiB / ReportedSizes::kTabularMiB;
  t.ratio_bnode = ReportedSizes::kBnodeMiB / ReportedSizes::kTabularMiB;
  return t;
}

}  // namespace hpcoda::bench
