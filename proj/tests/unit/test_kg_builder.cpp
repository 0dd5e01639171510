#include <gtest/gtest.h>

#include <algorithm>

#include "hpcoda/fixture/generator.hpp"
#include "hpcoda/kg/builder.hpp"
#include "hpcoda/rdf/ntriples.hpp"

using namespace hpcoda;
using namespace hpcoda::kg;
using rdf::Datatype;
using rdf::Term;
using rdf::Triple;

namespace {

Term hpc(const std::string& local) { return Term::iri(rdf::vocab::hpc(local)); }

bool has(const std::vector<Triple>& ts, const Triple& t) { return std::find(ts.begin(), ts.end(), t) != ts.end(); }

std::size_t count_pred(const std::vector<Triple>& ts, const std::string& local) {
  return static_cast<std::size_t>(std::count_if(ts.begin(), ts.end(), [&](const Triple& t) { return t.predicate == hpc(local); }));
}

ingest::Dataset one_node() {
  ingest::Dataset ds;
  ds.data_centers.push_back({1, "CINECA", "Bologna"});
  ds.hpc_systems.push_back({1, 1, "marconi100"});
  ds.racks.push_back({1, 1});
  ds.compute_nodes.push_back({1, 1, 1, 2, 3});
  ds.plugins.push_back({1, "ipmi"});
  ds.sensors.push_back({1, "ipmi", "total_power", "power", "W"});
  ds.sensors.push_back({1, "ipmi", "cpu_temp", "temperature", "C"});
  ds.users.push_back({1, 1, "alice"});
  return ds;
}

BuildOptions opts(SchemaMode m, bool dedup = false) {
  BuildOptions o;
  o.mode = m;
  o.dedup_time_nodes = dedup;
  return o;
}

}  // namespace

TEST(Modes, ParseAndName) {
  EXPECT_EQ(parse_mode("legacy"), SchemaMode::LegacyOda);
  EXPECT_EQ(parse_mode("unified"), SchemaMode::UnifiedUri);
  EXPECT_EQ(parse_mode("unified-bnode"), SchemaMode::UnifiedBnode);
  EXPECT_FALSE(parse_mode("other"));
  for (auto m : {SchemaMode::LegacyOda, SchemaMode::UnifiedUri, SchemaMode::UnifiedBnode}) EXPECT_EQ(parse_mode(mode_name(m)), m);
}

TEST(Reading, LegacyEmitsSixTriples) {
  const auto ds = one_node();
  const ingest::DatasetIndex idx(ds);
  const ingest::Reading r{1, "total_power", 1'643'673'620, 810.25};
  const auto ts = emit_reading(idx, r, opts(SchemaMode::LegacyOda));
  ASSERT_EQ(ts.size(), 6u);
  const Term reading = Term::iri(uri::reading(1, "total_power", r.ts));
  EXPECT_TRUE(has(ts, {reading, rdf::rdf_type(), hpc("SensorReading")}));
  EXPECT_TRUE(has(ts, {reading, hpc("value"), Term::dbl(810.25)}));
  EXPECT_TRUE(has(ts, {reading, hpc("readingTimestamp"), Term::literal("2022-02-01T00:00:20+00:00", Datatype::DateTime)}));
  EXPECT_TRUE(has(ts, {reading, hpc("readingUnit"), Term::string("W")}));
  EXPECT_TRUE(has(ts, {Term::iri(uri::sensor(1, "total_power")), hpc("hasReading"), reading}));
  EXPECT_TRUE(has(ts, {reading, hpc("partOfRecord"), Term::iri(uri::data_record(1, "ipmi", r.ts))}));
}

TEST(Reading, UnifiedEmitsFourTriples) {
  const auto ds = one_node();
  const ingest::DatasetIndex idx(ds);
  const ingest::Reading r{1, "cpu_temp", 1'643'673'620, 45.5};
  for (auto m : {SchemaMode::UnifiedUri, SchemaMode::UnifiedBnode}) {
    const auto ts = emit_reading(idx, r, opts(m));
    ASSERT_EQ(ts.size(), 4u);
    EXPECT_EQ(ts[0].predicate, hpc("hasReading"));
    EXPECT_EQ(ts[1].object, Term::dbl(45.5));
    EXPECT_TRUE(ts[2].object.is_blank());
    EXPECT_EQ(ts[3].object, Term::integer(r.ts));
    EXPECT_EQ(ts[0].object.is_blank(), m == SchemaMode::UnifiedBnode);
  }
  BuildOptions iso = opts(SchemaMode::UnifiedUri);
  iso.timestamp_encoding = TimestampEncoding::Iso8601;
  EXPECT_EQ(emit_reading(idx, r, iso)[3].object.datatype(), Datatype::DateTime);
  const auto dedup = emit_reading(idx, r, opts(SchemaMode::UnifiedUri, true));
  EXPECT_EQ(dedup[2].object, Term::iri(uri::time(r.ts)));
}

TEST(Reading, UnknownSensorIsBuildError) {
  const auto ds = one_node();
  const ingest::DatasetIndex idx(ds);
  EXPECT_THROW(emit_reading(idx, {1, "nope", 0, 1.0}, opts(SchemaMode::UnifiedUri)), BuildError);
}

TEST(Static, DataCenterAndSystem) {
  const auto ts = emit_static(one_node(), opts(SchemaMode::UnifiedUri));
  const Term dc = Term::iri(uri::data_center(1));
  EXPECT_TRUE(has(ts, {dc, hpc("hasHPCSystem"), Term::iri(uri::system(1))}));
  EXPECT_TRUE(has(ts, {dc, hpc("dcId"), Term::integer(1)}));
  EXPECT_TRUE(has(ts, {dc, hpc("dcName"), Term::string("CINECA")}));
  EXPECT_TRUE(has(ts, {dc, hpc("location"), Term::string("Bologna")}));
}

TEST(Static, PositionNode) {
  const auto ts = emit_static(one_node(), opts(SchemaMode::UnifiedUri));
  const Term pos = Term::iri(uri::position(1));
  EXPECT_TRUE(has(ts, {Term::iri(uri::node(1)), hpc("hasPosition"), pos}));
  EXPECT_TRUE(has(ts, {pos, hpc("posX"), Term::integer(1)}));
  EXPECT_TRUE(has(ts, {pos, hpc("posY"), Term::integer(2)}));
  EXPECT_TRUE(has(ts, {pos, hpc("posZ"), Term::integer(3)}));
}

TEST(Static, UnitMovesToSensorInUnified) {
  EXPECT_EQ(count_pred(emit_static(one_node(), opts(SchemaMode::UnifiedUri)), "sensorUnit"), 2u);
  EXPECT_EQ(count_pred(emit_static(one_node(), opts(SchemaMode::LegacyOda)), "sensorUnit"), 0u);
}

TEST(Static, EmptyDataset) { EXPECT_TRUE(emit_static({}, opts(SchemaMode::UnifiedUri)).empty()); }

TEST(Job, NodesAndMetrics) {
  ingest::Job j{9, 1, 101, "job9", 0, 1000, 1600, {1, 2, 3}};
  ingest::JobMetric e{9, "energy", 12.5}, w{9, "power", 300};
  const auto ts = emit_job(j, {&e, &w}, opts(SchemaMode::UnifiedUri));
  EXPECT_EQ(count_pred(ts, "usesComputeNode"), 3u);
  EXPECT_EQ(count_pred(ts, "hasJobMetric"), 2u);
  const auto metric_triples = std::count_if(ts.begin(), ts.end(), [](const Triple& t) {
    return t.subject.text().find("/jobmetric/") != std::string::npos || t.object.text().find("/jobmetric/") != std::string::npos;
  });
  EXPECT_EQ(metric_triples, 8);
  EXPECT_TRUE(has(ts, {Term::iri(uri::job(9)), hpc("jobDuration"), Term::literal("PT600S", Datatype::Duration)}));
  EXPECT_TRUE(has(ts, {Term::iri(uri::job_metric(9, "energy")), hpc("metricName"), Term::string("energy")}));
}

TEST(Job, ZeroLengthAndReversed) {
  ingest::Job j{1, 1, 1, "j", 0, 50, 50, {1}};
  const auto ts = emit_job(j, {}, opts(SchemaMode::UnifiedUri));
  EXPECT_TRUE(has(ts, {Term::iri(uri::job(1)), hpc("jobDuration"), Term::literal("PT0S", Datatype::Duration)}));
  j.end = 10;
  EXPECT_THROW(emit_job(j, {}, opts(SchemaMode::UnifiedUri)), BuildError);
}

TEST(Build, ReadingTripleArithmetic) {
  fixture::FixtureParams p;
  p.nodes_per_rack = 5;
  p.sensors_per_node = 4;
  p.sampling_interval = 480;
  p.duration = 86'400;
  p.users_per_system = 2;
  p.jobs_per_system = 6;
  p.metrics_per_job = 3;
  const auto ds = fixture::generate(p);
  ASSERT_EQ(ds.readings.size(), 3600u);
  const auto legacy = build(ds, opts(SchemaMode::LegacyOda));
  const auto uri = build(ds, opts(SchemaMode::UnifiedUri));
  const auto bnode = build(ds, opts(SchemaMode::UnifiedBnode));
  EXPECT_EQ(legacy.reading_triples, 21'600u);
  EXPECT_EQ(uri.reading_triples, 14'400u);
  EXPECT_EQ(bnode.reading_triples, 14'400u);
  EXPECT_EQ(static_cast<std::int64_t>(uri.reading_triples) - static_cast<std::int64_t>(legacy.reading_triples), -7200);
  EXPECT_EQ(legacy.record_triples, 2u * 5u);
  EXPECT_EQ(uri.store.stats().triple_count, bnode.store.stats().triple_count);
  EXPECT_EQ(uri.store.stats().node_count, bnode.store.stats().node_count);

  const auto dedup = build(ds, opts(SchemaMode::UnifiedUri, true));
  EXPECT_LT(dedup.reading_triples, uri.reading_triples);
  EXPECT_GE(dedup.reading_triples, 3u * ds.readings.size());
}

TEST(Build, DeterministicBytes) {
  fixture::FixtureParams p;
  p.sensors_per_node = 3;
  p.sampling_interval = 900;
  p.users_per_system = 1;
  p.jobs_per_system = 3;
  p.metrics_per_job = 2;
  const auto ds = fixture::generate(p);
  for (auto m : {SchemaMode::LegacyOda, SchemaMode::UnifiedUri, SchemaMode::UnifiedBnode}) {
    std::ostringstream a, b;
    rdf::write_ntriples(build_graph(ds, opts(m)), a);
    rdf::write_ntriples(build_graph(ds, opts(m)), b);
    EXPECT_EQ(a.str(), b.str());
  }
}

TEST(Build, UnknownUserIsBuildError) {
  auto ds = one_node();
  ds.jobs.push_back({1, 42, 1, "j", 0, 0, 10, {1}});
  EXPECT_THROW(build(ds, opts(SchemaMode::UnifiedUri)), BuildError);
}
