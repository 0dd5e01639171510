#include <gtest/gtest.h>

#include "hpcoda/fixture/generator.hpp"
#include "hpcoda/kg/builder.hpp"
#include "hpcoda/ontology/document.hpp"
#include "hpcoda/ontology/validate.hpp"

using namespace hpcoda;
using namespace hpcoda::ontology;
using rdf::Datatype;
using rdf::Term;

namespace {
Term hpc(const char* local) { return Term::iri(rdf::vocab::hpc(local)); }

rdf::TripleStore small_graph(kg::SchemaMode mode) {
  fixture::FixtureParams p;
  p.nodes_per_rack = 2;
  p.sensors_per_node = 3;
  p.sampling_interval = 3600;
  p.users_per_system = 2;
  p.jobs_per_system = 4;
  p.metrics_per_job = 2;
  kg::BuildOptions o;
  o.mode = mode;
  return kg::build_graph(fixture::generate(p), o);
}
}  // namespace

TEST(Schema, EntityCounts) {
  const auto s = builtin_schema();
  EXPECT_EQ(s.classes.size(), 12u);
  EXPECT_EQ(s.object_properties.size(), 23u);
  EXPECT_EQ(s.data_properties.size(), 25u);
  EXPECT_EQ(s.declaration_count(), 60u);
  EXPECT_EQ(s.inverse_count(), 8u);
  EXPECT_EQ(s.logical_axiom_count(), 104u);
  EXPECT_EQ(s.total_axiom_count(), 164u);
  EXPECT_NO_THROW(s.check());
}

TEST(Schema, Lookups) {
  const auto s = builtin_schema();
  const auto* reading = s.find_class("SensorReading");
  ASSERT_NE(reading, nullptr);
  EXPECT_FALSE(reading->description.empty());
  const auto* has_reading = s.find_object_property("hasReading");
  ASSERT_NE(has_reading, nullptr);
  EXPECT_EQ(has_reading->domain, "Sensor");
  EXPECT_EQ(has_reading->range, "SensorReading");
  const auto* value = s.find_data_property("value");
  ASSERT_NE(value, nullptr);
  EXPECT_EQ(value->domain, "SensorReading");
  EXPECT_EQ(value->range, Datatype::Double);
  EXPECT_EQ(s.find_class("DataRecord"), nullptr);
  EXPECT_NE(legacy_schema().find_class("DataRecord"), nullptr);
}

TEST(Document, RecountBothFormats) {
  for (const auto fmt : {rdf::RdfFormat::Turtle, rdf::RdfFormat::NTriples}) {
    const auto c = count_axioms_in_document(emit_ontology(builtin_schema(), fmt), fmt);
    EXPECT_EQ(c.declarations(), 60u);
    EXPECT_EQ(c.object_domain_range, 46u);
    EXPECT_EQ(c.data_domain_range, 50u);
    EXPECT_EQ(c.inverse_of, 8u);
    EXPECT_EQ(c.logical(), 104u);
    EXPECT_EQ(c.total(), 164u);
  }
}

TEST(Document, FormatTags) {
  EXPECT_EQ(parse_format_tag("ttl"), rdf::RdfFormat::Turtle);
  EXPECT_EQ(parse_format_tag("nt"), rdf::RdfFormat::NTriples);
  EXPECT_THROW(parse_format_tag("xml"), Error);
}

TEST(Validate, BuilderOutputsAreClean) {
  EXPECT_TRUE(validate_graph(legacy_schema(), small_graph(kg::SchemaMode::LegacyOda)).empty());
  EXPECT_TRUE(validate_graph(builtin_schema(), small_graph(kg::SchemaMode::UnifiedUri)).empty());
  EXPECT_TRUE(validate_graph(builtin_schema(), small_graph(kg::SchemaMode::UnifiedBnode)).empty());
}

TEST(Validate, LegacyTriplesUnknownToUnifiedSchema) {
  const auto v = validate_graph(builtin_schema(), small_graph(kg::SchemaMode::LegacyOda));
  EXPECT_FALSE(v.empty());
  EXPECT_TRUE(std::any_of(v.begin(), v.end(), [](const Violation& x) { return x.kind == ViolationKind::UnknownProperty; }));
}

TEST(Validate, JobWithReadingIsDomainViolation) {
  rdf::TripleStore g;
  g.insert({hpc("job/1"), rdf::rdf_type(), hpc("Job")});
  g.insert({hpc("job/1"), hpc("hasReading"), hpc("reading/1")});
  g.seal();
  const auto v = validate_graph(builtin_schema(), g);
  ASSERT_EQ(v.size(), 1u);
  EXPECT_EQ(v[0].kind, ViolationKind::DomainViolation);
  EXPECT_EQ(v[0].expected, "Sensor");
  EXPECT_NE(describe(v[0]).find("DomainViolation"), std::string::npos);
}

TEST(Validate, StringValueIsDatatypeViolation) {
  rdf::TripleStore g;
  g.insert({hpc("reading/1"), hpc("value"), Term::string("1.5")});
  g.seal();
  const auto v = validate_graph(builtin_schema(), g);
  ASSERT_EQ(v.size(), 1u);
  EXPECT_EQ(v[0].kind, ViolationKind::DatatypeViolation);
}

TEST(Validate, RangeAndLiteralObject) {
  rdf::TripleStore g;
  g.insert({hpc("sensor/1"), rdf::rdf_type(), hpc("Sensor")});
  g.insert({hpc("user/1"), rdf::rdf_type(), hpc("User")});
  g.insert({hpc("sensor/1"), hpc("hasReading"), hpc("user/1")});
  g.insert({hpc("sensor/1"), hpc("hasReading"), Term::integer(3)});
  g.seal();
  const auto v = validate_graph(builtin_schema(), g);
  ASSERT_EQ(v.size(), 2u);
  EXPECT_EQ(v[0].kind, ViolationKind::RangeViolation);
  EXPECT_EQ(v[1].kind, ViolationKind::RangeViolation);
}

TEST(Validate, TimestampAcceptsIntegerOrDateTime) {
  rdf::TripleStore g;
  g.insert({Term::blank("t1"), hpc("timestamp"), Term::integer(1746057600)});
  g.insert({Term::blank("t2"), hpc("timestamp"), Term::literal("2025-05-01T00:00:00Z", Datatype::DateTime)});
  g.insert({Term::blank("t3"), hpc("timestamp"), Term::string("yesterday")});
  g.seal();
  const auto v = validate_graph(builtin_schema(), g);
  ASSERT_EQ(v.size(), 1u);
  EXPECT_EQ(v[0].kind, ViolationKind::DatatypeViolation);
}
