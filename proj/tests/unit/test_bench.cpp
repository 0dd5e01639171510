#include <gtest/gtest.h>

#include <sstream>

#include "hpcoda/bench/report.hpp"
#include "hpcoda/bench/suite.hpp"

using namespace hpcoda;
using namespace hpcoda::bench;

namespace {

fixture::FixtureParams suite_shape(std::uint64_t seed) {
  fixture::FixtureParams p;
  p.seed = seed;
  p.data_centers = 2;
  p.racks_per_system = 2;
  p.nodes_per_rack = 4;
  p.sensors_per_node = 6;
  p.sampling_interval = 900;
  p.duration = 3 * 86'400;
  p.start_time = 1'746'057'600;
  p.users_per_system = 4;
  p.jobs_per_system = 30;
  p.metrics_per_job = 10;
  p.job_centric = true;
  return p;
}

}  // namespace

TEST(Percent, TruncatedNotRounded) {
  EXPECT_DOUBLE_EQ(reduction_percent(1074.89, 657.36), 38.84);
  EXPECT_DOUBLE_EQ(reduction_percent(657.36, 481.00), 26.82);
  EXPECT_DOUBLE_EQ(reduction_percent(6, 4), 33.33);
  EXPECT_DOUBLE_EQ(reduction_percent(0, 4), 0.0);
  EXPECT_EQ(percent_text(33.33), "33.33");
}

TEST(Projection, ReportedFigures) {
  const auto t = formula_self_test();
  EXPECT_NEAR(t.gib_legacy_28d, 29.39, 0.01);
  EXPECT_NEAR(t.gib_unified_28d, 17.97, 0.01);
  EXPECT_NEAR(t.gib_bnode_28d, 13.15, 0.01);
  EXPECT_EQ(std::lround(t.ratio_unified), 237);
  EXPECT_LE(std::abs(std::lround(t.ratio_unified) - 238), 1);
  EXPECT_EQ(std::lround(t.ratio_bnode), 174);
}

TEST(Projection, StaticPartCountedOnce) {
  GraphStats day;
  day.bytes = 1000;
  EXPECT_EQ(project_storage(day, 28), 28'000);
  EXPECT_EQ(project_storage(day, 28, 100), 100 + 900 * 28);
  EXPECT_EQ(project_storage(day, 0, 100), 100);
  EXPECT_THROW(project_storage(day, -1), std::invalid_argument);
}

TEST(DryRun, Table5Replay) {
  const auto r = replay_table5();
  EXPECT_EQ(r.legacy_reading_triples, 25'375'680);
  EXPECT_EQ(r.unified_reading_triples, 16'917'120);
  EXPECT_EQ(r.legacy_residual, 4);
  EXPECT_EQ(r.unified_residual, 0);
  EXPECT_TRUE(r.consistent());
}

TEST(DryRun, MatchesActualBuild) {
  fixture::FixtureParams p;
  p.nodes_per_rack = 3;
  p.sensors_per_node = 4;
  p.sampling_interval = 1800;
  p.duration = 2 * 86'400;
  p.users_per_system = 2;
  p.jobs_per_system = 8;
  p.metrics_per_job = 3;
  const auto ds = fixture::generate(p);
  for (const auto mode : kAllModes) {
    for (const bool dedup : {false, true}) {
      if (mode == kg::SchemaMode::LegacyOda && dedup) continue;
      kg::BuildOptions o;
      o.mode = mode;
      o.dedup_time_nodes = dedup;
      const auto built = kg::build(ds, o);
      const auto c = dry_run_counts(p, mode, dedup);
      EXPECT_EQ(c.readings, static_cast<std::int64_t>(ds.readings.size()));
      EXPECT_EQ(c.reading_triples, static_cast<std::int64_t>(built.reading_triples)) << kg::mode_name(mode) << dedup;
      EXPECT_EQ(c.record_triples, static_cast<std::int64_t>(built.record_triples));
      EXPECT_EQ(c.total(), static_cast<std::int64_t>(built.store.size()));
    }
  }
}

TEST(Compare, ReportShape) {
  fixture::FixtureParams p;
  p.nodes_per_rack = 2;
  p.sensors_per_node = 3;
  p.sampling_interval = 600;
  const auto rep = compare_modes(fixture::generate(p), 1000);
  EXPECT_EQ(rep.reading_triple_reduction(), 33.33);
  EXPECT_GT(rep.legacy().bytes, rep.unified().bytes);
  EXPECT_GT(rep.unified().bytes, rep.bnode().bytes);
  EXPECT_EQ(rep.unified().triples, rep.bnode().triples);
  ASSERT_TRUE(rep.ratio_vs_baseline(rep.unified()));
  std::ostringstream text, csv;
  write_compare_text(rep, text);
  write_compare_csv(rep, csv);
  EXPECT_NE(text.str().find("Legacy ODA"), std::string::npos);
  EXPECT_NE(csv.str().find(std::to_string(rep.bnode().bytes)), std::string::npos);
  const std::string lines = csv.str();
  EXPECT_EQ(std::count(lines.begin(), lines.end(), '\n'), 4);
  EXPECT_EQ(lines.find("\n\n"), std::string::npos);
}

TEST(Manifest, ScopedKeysOverride) {
  const auto m = parse_manifest("# c\ntop = 3\nC6.5.top = 5\n\nname=x y\n");
  EXPECT_EQ(m.params_for("C1.1").str("top"), "3");
  EXPECT_EQ(m.params_for("C6.5").str("top"), "5");
  EXPECT_EQ(m.params_for("C6.5").str("name"), "x y");
  EXPECT_THROW(parse_manifest("novalue\n"), ParseError);
}

TEST(Manifest, Substitution) {
  const Params p(std::map<std::string, std::string>{{"a", "1"}, {"b", "two"}});
  EXPECT_EQ(substitute("x ${a} ${b}${a}", p), "x 1 two1");
  EXPECT_THROW(substitute("${missing}", p), DataError);
  EXPECT_THROW(substitute("${a", p), DataError);
}

TEST(Manifest, SplitStages) {
  const auto s = split_stages("SELECT 1\n#--- next\nSELECT 2\n");
  ASSERT_EQ(s.size(), 2u);
  EXPECT_EQ(s[1], "SELECT 2\n");
}

TEST(Oracle, TableMatchingTolerance) {
  Table a{{Cell::number(1.0), Cell::text_of("x")}, {Cell::number(2.0), Cell::text_of("y")}};
  Table b{{Cell::number(2.0 * (1 + 1e-12)), Cell::text_of("y")}, {Cell::number(1.0), Cell::text_of("x")}};
  EXPECT_TRUE(tables_match(a, {b, false}));
  EXPECT_FALSE(tables_match(a, {b, true}));
  Table c{{Cell::number(1.001), Cell::text_of("x")}, {Cell::number(2.0), Cell::text_of("y")}};
  EXPECT_FALSE(tables_match(a, {c, false}));
}

TEST(Suite, AllQuestionsOnSeed1) {
  const auto ds = fixture::generate(suite_shape(1));
  const auto g = kg::build_graph(ds, suite_build_options());
  const auto res = run_suite(g, HPCODA_QUERY_DIR, ds, load_manifest(std::string(HPCODA_QUERY_DIR) + "/manifest.txt"));
  ASSERT_EQ(res.entries.size(), 36u);
  for (const auto& e : res.entries) EXPECT_TRUE(e.passed()) << e.id << ": " << e.message;
}

TEST(Suite, EmptyDatasetAgreesWithOracle) {
  const ingest::Dataset ds;
  const auto g = kg::build_graph(ds, suite_build_options());
  const auto res = run_suite(g, HPCODA_QUERY_DIR, ds, load_manifest(std::string(HPCODA_QUERY_DIR) + "/manifest.txt"));
  EXPECT_TRUE(res.all_passed());
}

TEST(Suite, MissingQueryRecordedNotThrown) {
  const ingest::Dataset ds;
  const auto g = kg::build_graph(ds, suite_build_options());
  const auto res = run_suite(g, "/nonexistent-dir", ds, Manifest{});
  EXPECT_EQ(res.entries.size(), 36u);
  EXPECT_EQ(res.parsed(), 0u);
  EXPECT_FALSE(res.all_passed());
}
