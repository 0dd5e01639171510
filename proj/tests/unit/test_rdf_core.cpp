#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <set>

#include "hpcoda/rdf/triple_store.hpp"

using namespace hpcoda;
using namespace hpcoda::rdf;

namespace {

Term hpc(const char* local) { return Term::iri(vocab::hpc(local)); }

std::vector<TripleIds> collect(const MatchRange& r) {
  std::vector<TripleIds> v(r.begin(), r.end());
  std::sort(v.begin(), v.end());
  return v;
}

}  // namespace

TEST(Dictionary, InterningIsIdempotent) {
  TripleStore st;
  const auto a = st.intern(hpc("Sensor"));
  EXPECT_EQ(a, 0u);
  EXPECT_EQ(st.intern(hpc("Sensor")), a);
  EXPECT_EQ(st.dict_size(), 1u);
  EXPECT_EQ(st.resolve(a), hpc("Sensor"));
}

TEST(Dictionary, DatatypeDistinguishesLiterals) {
  TripleStore st;
  const auto i = st.intern(Term::literal("42", Datatype::Integer));
  const auto s = st.intern(Term::literal("42", Datatype::String));
  EXPECT_NE(i, s);
  EXPECT_EQ(st.dict_size(), 2u);
}

TEST(Dictionary, IdsAreDense) {
  TripleStore st;
  for (int i = 0; i < 1000; ++i) EXPECT_EQ(st.intern(Term::iri("http://x.org/t" + std::to_string(i))), TermId(i));
  EXPECT_EQ(st.dict_size(), 1000u);
  EXPECT_FALSE(st.lookup(Term::iri("http://x.org/missing")));
  EXPECT_EQ(*st.lookup(Term::iri("http://x.org/t500")), 500u);
}

TEST(Dictionary, MalformedTermsRejected) {
  TripleStore st;
  EXPECT_THROW(st.intern(Term::iri("")), ValidationError);
  EXPECT_THROW(st.intern(Term::literal("forty", Datatype::Integer)), ValidationError);
  EXPECT_THROW(st.intern(Term::blank("has space")), ValidationError);
  EXPECT_THROW(st.resolve(99), std::out_of_range);
}

TEST(Insert, SetSemantics) {
  TripleStore st;
  const Triple t{hpc("s"), hpc("p"), Term::integer(1)};
  EXPECT_TRUE(st.insert(t));
  EXPECT_FALSE(st.insert(t));
  EXPECT_EQ(st.size(), 1u);
}

TEST(Insert, StructuralErrors) {
  TripleStore st;
  EXPECT_THROW(st.insert({Term::integer(1), hpc("p"), hpc("o")}), ValidationError);
  EXPECT_THROW(st.insert({hpc("s"), Term::blank("b"), hpc("o")}), ValidationError);
  EXPECT_THROW(st.insert({hpc("s"), Term::string("p"), hpc("o")}), ValidationError);
  EXPECT_THROW(st.insert_ids({5, 6, 7}), std::out_of_range);
}

TEST(Insert, SixLegacyTriplesOfOneReading) {
  TripleStore st;
  const auto r = hpc("reading/1/total_power/0");
  st.insert({r, rdf_type(), hpc("SensorReading")});
  st.insert({r, hpc("value"), Term::dbl(310.5)});
  st.insert({r, hpc("readingTimestamp"), Term::literal("1970-01-01T00:00:00Z", Datatype::DateTime)});
  st.insert({r, hpc("readingUnit"), Term::string("W")});
  st.insert({hpc("sensor/1/total_power"), hpc("hasReading"), r});
  st.insert({r, hpc("partOfRecord"), hpc("datarecord/1/ipmi/1970-01-01")});
  EXPECT_EQ(st.size(), 6u);
}

TEST(Match, RequiresSeal) {
  TripleStore st;
  st.insert({hpc("s"), hpc("p"), hpc("o")});
  EXPECT_THROW(st.match_ids({}), std::logic_error);
  st.seal();
  EXPECT_EQ(st.match_ids({}).size(), 1u);
  st.insert({hpc("s2"), hpc("p"), hpc("o")});
  EXPECT_FALSE(st.sealed());
}

TEST(Match, TypeOfThreeSensors) {
  TripleStore st;
  for (int i = 0; i < 3; ++i) st.insert({Term::iri(vocab::hpc("sensor/" + std::to_string(i))), rdf_type(), hpc("Sensor")});
  st.insert({hpc("node/1"), rdf_type(), hpc("ComputeNode")});
  st.seal();
  EXPECT_EQ(st.match({std::nullopt, rdf_type(), hpc("Sensor")}).size(), 3u);
  EXPECT_EQ(st.match({}).size(), 4u);
  EXPECT_TRUE(st.match({hpc("unknown"), std::nullopt, std::nullopt}).empty());
}

TEST(Match, ReadingsOfOneSensorPerDay) {
  TripleStore st;
  const auto s = hpc("sensor/1/total_power");
  for (int i = 0; i < 4320; ++i) st.insert({s, hpc("hasReading"), Term::blank("r" + std::to_string(i))});
  st.insert({hpc("sensor/2/total_power"), hpc("hasReading"), Term::blank("other")});
  st.seal();
  EXPECT_EQ(st.match({s, hpc("hasReading"), std::nullopt}).size(), 4320u);
}

TEST(Match, EveryShapeAgainstLinearScan) {
  std::mt19937 rng(3);
  TripleStore st;
  std::vector<TripleIds> all;
  std::set<TripleIds> seen;
  for (int i = 0; i < 30; ++i) st.intern(Term::iri("http://x.org/" + std::to_string(i)));
  for (int i = 0; i < 2000; ++i) {
    const TripleIds t{TermId(rng() % 30), TermId(rng() % 5), TermId(rng() % 30)};
    if (seen.insert(t).second) all.push_back(t);
    st.insert_ids(t);
  }
  st.seal();
  for (const auto& probe : all) {
    for (unsigned mask = 0; mask < 8; ++mask) {
      IdPattern p;
      if (mask & 1) p.s = probe.s;
      if (mask & 2) p.p = probe.p;
      if (mask & 4) p.o = probe.o;
      std::vector<TripleIds> want;
      for (const auto& t : all)
        if ((!p.s || *p.s == t.s) && (!p.p || *p.p == t.p) && (!p.o || *p.o == t.o)) want.push_back(t);
      std::sort(want.begin(), want.end());
      ASSERT_EQ(collect(st.match_ids(p)), want) << "mask " << mask;
    }
    if (&probe - all.data() > 50) break;
  }
}

TEST(Stats, EmptyStore) { EXPECT_EQ(TripleStore().stats(), (StoreStats{0, 0, 0})); }

TEST(Stats, LiteralsAreNotNodes) {
  TripleStore st;
  st.insert({hpc("a"), hpc("p"), Term::integer(5)});
  const auto s = st.stats();
  EXPECT_EQ(s.triple_count, 1u);
  EXPECT_EQ(s.node_count, 1u);
  EXPECT_EQ(s.dict_size, 3u);
}

TEST(Stats, NodeCountMatchesRecount) {
  std::mt19937 rng(11);
  TripleStore st;
  for (int i = 0; i < 500; ++i) {
    const Term s = (rng() % 2) ? Term::blank("b" + std::to_string(rng() % 40)) : Term::iri("http://x.org/" + std::to_string(rng() % 40));
    const Term o = (rng() % 3 == 0) ? Term::integer(rng() % 10) : Term::iri("http://x.org/" + std::to_string(rng() % 60));
    st.insert({s, hpc("p"), o});
  }
  std::set<TermId> nodes;
  for (const auto& t : st.insertion_order()) {
    nodes.insert(t.s);
    if (!st.resolve(t.o).is_literal()) nodes.insert(t.o);
  }
  EXPECT_EQ(st.stats().node_count, nodes.size());
}
