#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <random>

#include "hpcoda/common/fs.hpp"
#include "hpcoda/fixture/generator.hpp"
#include "hpcoda/ingest/csv.hpp"
#include "hpcoda/ingest/loader.hpp"

using namespace hpcoda;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("hpcoda_unit_" + std::to_string(std::random_device{}()));
    fs::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
};

ingest::Dataset minimal() {
  ingest::Dataset ds;
  ds.data_centers.push_back({1, "CINECA", "Bologna"});
  ds.hpc_systems.push_back({1, 1, "marconi100"});
  ds.racks.push_back({1, 1});
  ds.compute_nodes.push_back({1, 1, 0, 0, 0});
  ds.plugins.push_back({1, "ipmi"});
  ds.sensors.push_back({1, "ipmi", "total_power", "power", "W"});
  ds.readings.push_back({1, "total_power", 1'643'673'600, 812.5});
  return ds;
}

void replace_in_file(const fs::path& p, const std::string& from, const std::string& to) {
  auto text = read_file(p);
  const auto pos = text.find(from);
  ASSERT_NE(pos, std::string::npos);
  text.replace(pos, from.size(), to);
  std::ofstream(p, std::ios::binary) << text;
}

fixture::FixtureParams m100_day() {
  fixture::FixtureParams p;
  p.sensors_per_node = 104;
  p.sampling_interval = 20;
  p.duration = 86'400;
  return p;
}

}  // namespace

TEST(Csv, QuotedFieldsRoundTrip) {
  const std::vector<std::string> fields{"plain", "with,comma", "with \"quote\"", ""};
  const auto row = ingest::csv::join_row(fields);
  ingest::csv::Reader r(row, "t.csv");
  ingest::csv::Record rec;
  ASSERT_TRUE(r.next(rec));
  EXPECT_EQ(rec.fields, fields);
  EXPECT_FALSE(r.next(rec));
}

TEST(Csv, UnterminatedQuoteFails) {
  ingest::csv::Reader r("\"open,1\n", "t.csv");
  ingest::csv::Record rec;
  EXPECT_THROW(r.next(rec), DataError);
}

TEST(Ingest, MinimalFixtureLoads) {
  TempDir dir;
  ingest::write_dataset(minimal(), dir.path);
  const auto ds = ingest::load_dataset(dir.path);
  EXPECT_EQ(ds.data_centers.size(), 1u);
  EXPECT_EQ(ds.hpc_systems.size(), 1u);
  EXPECT_EQ(ds.racks.size(), 1u);
  EXPECT_EQ(ds.compute_nodes.size(), 1u);
  EXPECT_EQ(ds.sensors.size(), 1u);
  EXPECT_EQ(ds.readings.size(), 1u);
  EXPECT_EQ(ds, minimal());
}

TEST(Ingest, DanglingSensorNamed) {
  TempDir dir;
  ingest::write_dataset(minimal(), dir.path);
  replace_in_file(dir.path / "readings.csv", "1,total_power,", "1,foo,");
  try {
    ingest::load_dataset(dir.path);
    FAIL();
  } catch (const DataError& e) {
    EXPECT_NE(std::string(e.what()).find("foo"), std::string::npos);
  }
}

TEST(Ingest, OtherDataErrors) {
  {
    TempDir dir;
    ingest::write_dataset(minimal(), dir.path);
    replace_in_file(dir.path / "racks.csv", "1,1", "1,9");
    EXPECT_THROW(ingest::load_dataset(dir.path), DataError);
  }
  {
    TempDir dir;
    ingest::write_dataset(minimal(), dir.path);
    replace_in_file(dir.path / "readings.csv", "812.5", "hot");
    EXPECT_THROW(ingest::load_dataset(dir.path), DataError);
  }
  {
    TempDir dir;
    ingest::write_dataset(minimal(), dir.path);
    fs::remove(dir.path / "sensors.csv");
    EXPECT_THROW(ingest::load_dataset(dir.path), IoError);
  }
}

TEST(Ingest, EmptyDatasetHasHeadersOnly) {
  TempDir dir;
  const auto files = ingest::write_dataset({}, dir.path);
  EXPECT_EQ(files.size(), 10u);
  for (const auto& f : files) {
    const auto text = read_file(f);
    EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 1) << f;
  }
  EXPECT_EQ(ingest::load_dataset(dir.path), ingest::Dataset{});
}

TEST(Slice, FullEmptyAndHour) {
  auto p = m100_day();
  p.sensors_per_node = 1;
  const auto ds = fixture::generate(p);
  ASSERT_EQ(ds.readings.size(), 4320u);
  EXPECT_EQ(ingest::slice_by_time(ds, p.start_time, p.start_time + p.duration), ds);
  EXPECT_TRUE(ingest::slice_by_time(ds, p.start_time + 5, p.start_time + 5).readings.empty());
  EXPECT_EQ(ingest::slice_by_time(ds, p.start_time, p.start_time + 3600).readings.size(), 180u);
  EXPECT_THROW(ingest::slice_by_time(ds, 10, 5), std::invalid_argument);
}

TEST(Fixture, M100DayReadingCount) {
  const auto p = m100_day();
  EXPECT_EQ(p.projected_readings(), 449'280);
  const auto ds = fixture::generate(p);
  EXPECT_EQ(ds.readings.size(), 449'280u);
  EXPECT_EQ(ds.sensors.size(), 104u);
  TempDir dir;
  fixture::write_fixture(ds, dir.path);
  const auto text = read_file(dir.path / "readings.csv");
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 449'281);
}

TEST(Fixture, ZeroDurationHasStaticEntitiesOnly) {
  auto p = m100_day();
  p.duration = 0;
  const auto ds = fixture::generate(p);
  EXPECT_TRUE(ds.readings.empty());
  EXPECT_EQ(ds.sensors.size(), 104u);
}

TEST(Fixture, CapRefusesWithProjectedCount) {
  auto p = m100_day();
  p.max_readings = 1000;
  try {
    fixture::generate(p);
    FAIL();
  } catch (const DataError& e) {
    EXPECT_NE(std::string(e.what()).find("449280"), std::string::npos);
  }
  p.with_readings = false;
  EXPECT_NO_THROW(fixture::generate(p));
}

TEST(Fixture, InvalidParameters) {
  fixture::FixtureParams p;
  p.sampling_interval = 0;
  EXPECT_THROW(fixture::generate(p), std::invalid_argument);
  p = {};
  p.jobs_per_system = 3;
  EXPECT_THROW(fixture::generate(p), std::invalid_argument);
}

TEST(Fixture, DeterministicPerSeed) {
  fixture::FixtureParams p;
  p.seed = 7;
  p.nodes_per_rack = 3;
  p.sensors_per_node = 4;
  p.sampling_interval = 600;
  p.users_per_system = 3;
  p.jobs_per_system = 12;
  p.metrics_per_job = 5;
  TempDir a, b;
  const auto fa = fixture::write_fixture(fixture::generate(p), a.path);
  const auto fb = fixture::write_fixture(fixture::generate(p), b.path);
  ASSERT_EQ(fa.size(), fb.size());
  for (std::size_t i = 0; i < fa.size(); ++i) EXPECT_EQ(read_file(fa[i]), read_file(fb[i]));
  p.seed = 8;
  EXPECT_NE(fixture::generate(p), ingest::load_dataset(a.path));
}

TEST(Fixture, ForeignKeysResolve) {
  fixture::FixtureParams p;
  p.data_centers = 2;
  p.systems_per_dc = 2;
  p.racks_per_system = 2;
  p.nodes_per_rack = 2;
  p.sensors_per_node = 3;
  p.sampling_interval = 3600;
  p.users_per_system = 2;
  p.jobs_per_system = 6;
  p.metrics_per_job = 11;
  p.job_centric = true;
  const auto ds = fixture::generate(p);
  const ingest::DatasetIndex idx(ds);
  for (const auto& n : ds.compute_nodes) EXPECT_NE(idx.system_of_node(n.id), nullptr);
  for (const auto& s : ds.sensors) EXPECT_NE(idx.plugin(s.node_id, s.plugin_name), nullptr);
  for (const auto& j : ds.jobs) {
    EXPECT_NE(idx.user(j.user_id), nullptr);
    EXPECT_LE(j.start, j.end);
    for (const auto n : j.node_ids) EXPECT_NE(idx.node(n), nullptr);
  }
  for (const auto& m : ds.job_metrics) EXPECT_NE(idx.job(m.job_id), nullptr);
  for (const auto& r : ds.readings) {
    const auto* s = idx.sensor(r.node_id, r.sensor_name);
    ASSERT_NE(s, nullptr);
    const auto [lo, hi] = fixture::detail::value_range(s->type);
    EXPECT_GE(r.value, lo);
    EXPECT_LE(r.value, hi);
  }
  // Job-centric systems get the extended metric catalogue.
  EXPECT_TRUE(std::any_of(ds.job_metrics.begin(), ds.job_metrics.end(), [](const auto& m) { return m.name == "cycles"; }));
}
