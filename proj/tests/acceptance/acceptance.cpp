// One PASS/FAIL line per acceptance criterion. Exit status is the number of failures.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "hpcoda/bench/report.hpp"
#include "hpcoda/bench/suite.hpp"
#include "hpcoda/common/fs.hpp"
#include "hpcoda/common/time.hpp"
#include "hpcoda/fixture/generator.hpp"
#include "hpcoda/kg/builder.hpp"
#include "hpcoda/ontology/document.hpp"
#include "hpcoda/ontology/validate.hpp"
#include "hpcoda/rdf/ntriples.hpp"

namespace fs = std::filesystem;
using namespace hpcoda;

namespace {

struct Outcome {
  bool ok = true;
  std::ostringstream detail;

  void require(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      detail << " [failed: " << what << ']';
    }
  }
};

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& tag) {
    path = fs::temp_directory_path() / ("hpcoda_acc_" + tag + "_" + std::to_string(std::random_device{}()));
    fs::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
};

int failures = 0;

void criterion(int n, const std::string& title, double limit_s, const std::function<void(Outcome&)>& body) {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    body(o);
  } catch (const std::exception& e) {
    o.ok = false;
    o.detail << " [exception: " << e.what() << ']';
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (secs >= limit_s) {
    o.ok = false;
    o.detail << " [over time limit " << limit_s << " s]";
  }
  if (!o.ok) ++failures;
  std::ostringstream t;
  t.setf(std::ios::fixed);
  t.precision(3);
  t << secs;
  std::cout << (o.ok ? "PASS" : "FAIL") << "  criterion " << n << ": " << title << " (" << t.str() << " s)"
            << o.detail.str() << std::endl;
}

// ---- criterion 4 byte oracle: line lengths straight from the emission templates

std::string iri(const std::string& s) { return "<" + s + ">"; }
std::string typed(const std::string& lex, rdf::Datatype dt) { return "\"" + lex + "\"^^" + iri(rdf::datatype_iri(dt)); }
std::size_t line(const std::string& s, const std::string& p, const std::string& o) {
  return s.size() + 1 + p.size() + 1 + o.size() + 3;
}

struct OracleBytes {
  std::int64_t legacy = 0, unified = 0, bnode = 0;
};

OracleBytes template_bytes(const ingest::Dataset& ds) {
  using rdf::Datatype;
  namespace uri = kg::uri;
  const auto hpc = [](const char* local) { return iri(rdf::vocab::hpc(local)); };
  const std::string type = iri(std::string(rdf::vocab::kRdfType));

  std::map<std::pair<std::int64_t, std::string>, std::pair<std::int64_t, const ingest::Sensor*>> sensors;
  std::map<std::int64_t, std::int64_t> per_node;
  for (const auto& s : ds.sensors) sensors[{s.node_id, s.name}] = {per_node[s.node_id]++, &s};

  OracleBytes b;
  std::set<std::string> records;
  for (const auto& r : ds.readings) {
    const auto& [ordinal, sensor] = sensors.at({r.node_id, r.sensor_name});
    const std::string s = iri(uri::sensor(r.node_id, r.sensor_name));
    const std::string value = typed(format_double(r.value), Datatype::Double);
    const std::string r_iri = iri(uri::reading(r.node_id, r.sensor_name, r.ts));
    const std::string rec = iri(uri::data_record(r.node_id, sensor->plugin_name, r.ts));

    b.legacy += line(r_iri, type, hpc("SensorReading")) + line(r_iri, hpc("value"), value) +
                line(r_iri, hpc("readingTimestamp"), typed(time::format_iso8601(r.ts), Datatype::DateTime)) +
                line(r_iri, hpc("readingUnit"), "\"" + sensor->unit + "\"") + line(s, hpc("hasReading"), r_iri) +
                line(r_iri, hpc("partOfRecord"), rec);
    if (records.insert(rec).second)
      b.legacy += line(rec, type, hpc("DataRecord")) +
                  line(rec, hpc("recordOfPlugin"), iri(uri::plugin(r.node_id, sensor->plugin_name)));

    const std::string t_node = "_:" + uri::time_label(r.node_id, ordinal, r.ts);
    const std::string ts = typed(std::to_string(r.ts), Datatype::Integer);
    const auto unified_lines = [&](const std::string& rd) {
      return static_cast<std::int64_t>(line(s, hpc("hasReading"), rd) + line(rd, hpc("value"), value) +
                                       line(rd, hpc("hasTimestamp"), t_node) + line(t_node, hpc("timestamp"), ts));
    };
    b.unified += unified_lines(r_iri);
    b.bnode += unified_lines("_:" + uri::reading_label(r.node_id, ordinal, r.ts));
  }
  return b;
}

// ---- criterion 7 naive store

struct NaiveStore {
  std::vector<rdf::TripleIds> triples;
  std::vector<rdf::TripleIds> match(const rdf::IdPattern& p) const {
    std::vector<rdf::TripleIds> out;
    for (const auto& t : triples)
      if ((!p.s || *p.s == t.s) && (!p.p || *p.p == t.p) && (!p.o || *p.o == t.o)) out.push_back(t);
    std::sort(out.begin(), out.end());
    return out;
  }
};

bool dirs_identical(const fs::path& a, const fs::path& b) {
  std::vector<std::string> na, nb;
  for (const auto& e : fs::directory_iterator(a)) na.push_back(e.path().filename().string());
  for (const auto& e : fs::directory_iterator(b)) nb.push_back(e.path().filename().string());
  std::sort(na.begin(), na.end());
  std::sort(nb.begin(), nb.end());
  if (na != nb) return false;
  for (const auto& n : na)
    if (read_file(a / n) != read_file(b / n)) return false;
  return true;
}

fixture::FixtureParams suite_fixture(std::uint64_t seed) {
  fixture::FixtureParams p;
  p.seed = seed;
  p.data_centers = 2;
  p.systems_per_dc = 1;
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

int main() {
  criterion(1, "ontology axiom counts 60 / 104 (46 + 50 + 8) / 164; 12 / 23 / 25", 1.0, [](Outcome& o) {
    TempDir dir("onto");
    for (const auto fmt : {rdf::RdfFormat::Turtle, rdf::RdfFormat::NTriples}) {
      const auto path = dir.path / (fmt == rdf::RdfFormat::Turtle ? "hpc.ttl" : "hpc.nt");
      ontology::write_ontology_file(ontology::builtin_schema(), fmt, path);
      const auto c = ontology::count_axioms_in_file(path);
      o.detail << ' ' << rdf::format_name(fmt) << ": " << c.declarations() << '/' << c.logical() << '/' << c.total();
      o.require(c.classes == 12 && c.object_properties == 23 && c.data_properties == 25, "entity counts");
      o.require(c.declarations() == 60, "60 declarations");
      o.require(c.object_domain_range == 46 && c.data_domain_range == 50 && c.inverse_of == 8, "46 + 50 + 8");
      o.require(c.logical() == 104 && c.total() == 164, "104 logical, 164 total");
    }
  });

  criterion(2, "6 triples per legacy reading, 4 per unified reading, 33.33% reduction", 5.0, [](Outcome& o) {
    std::vector<fixture::FixtureParams> shapes;
    fixture::FixtureParams desk;
    desk.racks_per_system = 1;
    desk.nodes_per_rack = 2;
    desk.sensors_per_node = 6;
    desk.sampling_interval = 900;
    desk.duration = 10 * 86'400;
    desk.users_per_system = 2;
    desk.jobs_per_system = 5;
    desk.metrics_per_job = 3;
    shapes.push_back(desk);
    for (std::uint64_t seed = 11; seed <= 13; ++seed) {
      auto p = desk;
      p.seed = seed;
      p.data_centers = static_cast<std::int64_t>(seed % 2) + 1;
      p.nodes_per_rack = static_cast<std::int64_t>(seed % 3) + 1;
      p.sensors_per_node = static_cast<std::int64_t>(seed % 5) + 1;
      p.duration = 2 * 86'400;
      shapes.push_back(p);
    }
    bool first = true;
    for (const auto& p : shapes) {
      const auto ds = fixture::generate(p);
      const auto r = static_cast<std::int64_t>(ds.readings.size());
      std::array<std::int64_t, 3> got{};
      for (std::size_t i = 0; i < bench::kAllModes.size(); ++i) {
        kg::BuildOptions opts;
        opts.mode = bench::kAllModes[i];
        got[i] = static_cast<std::int64_t>(kg::build(ds, opts).reading_triples);
      }
      if (first) o.detail << " desk R=" << r << ": legacy " << got[0] << ", unified " << got[1];
      first = false;
      o.require(got[0] == 6 * r, "legacy == 6R");
      o.require(got[1] == 4 * r && got[2] == 4 * r, "unified == 4R");
      o.require(bench::reduction_percent(double(got[0]), double(got[1])) == 33.33, "33.33%");
    }
    o.require(fixture::generate(shapes[0]).readings.size() >= 10'000, "desk size");
  });

  criterion(3, "Table 5 replay: 25,375,680 / 16,917,120 reading triples", 1.0, [](Outcome& o) {
    const auto r = bench::replay_table5();
    o.detail << " legacy " << with_thousands(r.legacy_reading_triples) << " (residual " << r.legacy_residual << "), unified "
             << with_thousands(r.unified_reading_triples) << " (residual " << r.unified_residual << ')';
    o.require(r.legacy_reading_triples == 25'375'680, "legacy 25,375,680");
    o.require(r.unified_reading_triples == 16'917'120, "unified 16,917,120");
    o.require(r.legacy_residual >= 0 && r.legacy_residual <= 10, "legacy residual <= 10");
    o.require(r.unified_residual == 0, "unified residual 0");
    o.require(r.consistent(), "replay consistent");
  });

  criterion(4, "byte reductions at desk scale in [33,45]% and [20,32]%, bytes pinned by template oracle", 60.0,
            [](Outcome& o) {
              fixture::FixtureParams p;
              p.seed = 100;
              p.racks_per_system = 3;
              p.nodes_per_rack = 10;
              p.sensors_per_node = 1;  // total_power
              p.sampling_interval = 20;
              p.duration = 86'400;
              p.users_per_system = 8;
              p.jobs_per_system = 40;
              p.metrics_per_job = 4;
              const auto ds = fixture::generate(p);
              o.require(ds.readings.size() >= 100'000, ">= 10^5 readings");

              // Oracle first: static part from a reading-free build, reading part from templates.
              const auto tmpl = template_bytes(ds);
              auto statics = ds;
              statics.readings.clear();
              std::array<std::int64_t, 3> expected{};
              for (std::size_t i = 0; i < 3; ++i) {
                kg::BuildOptions opts;
                opts.mode = bench::kAllModes[i];
                expected[i] = static_cast<std::int64_t>(rdf::measure_ntriples(kg::build_graph(statics, opts)).bytes_written);
              }
              expected[0] += tmpl.legacy;
              expected[1] += tmpl.unified;
              expected[2] += tmpl.bnode;

              const auto rep = bench::compare_modes(ds);
              o.detail << " R=" << ds.readings.size() << " bytes " << rep.legacy().bytes << '/' << rep.unified().bytes << '/'
                       << rep.bnode().bytes << ", unified vs legacy " << bench::percent_text(rep.reduction_unified_vs_legacy)
                       << "%, bnode vs unified " << bench::percent_text(rep.reduction_bnode_vs_unified) << '%';
              o.require(rep.legacy().bytes == expected[0], "legacy bytes == oracle " + std::to_string(expected[0]));
              o.require(rep.unified().bytes == expected[1], "unified bytes == oracle " + std::to_string(expected[1]));
              o.require(rep.bnode().bytes == expected[2], "bnode bytes == oracle " + std::to_string(expected[2]));
              o.require(rep.reduction_unified_vs_legacy >= 33.0 && rep.reduction_unified_vs_legacy <= 45.0,
                        "unified vs legacy in [33,45]");
              o.require(rep.reduction_bnode_vs_unified >= 20.0 && rep.reduction_bnode_vs_unified <= 32.0,
                        "bnode vs unified in [20,32]");
            });

  criterion(5, "projections 29.39 / 17.97 / 13.15 GiB over 28 days; ratios 237 (238) and 174", 1.0, [](Outcome& o) {
    const auto t = bench::formula_self_test();
    o.detail << " GiB " << t.gib_legacy_28d << '/' << t.gib_unified_28d << '/' << t.gib_bnode_28d << ", ratios "
             << std::lround(t.ratio_unified) << " (reported 238) / " << std::lround(t.ratio_bnode) << " (reported 174)";
    o.require(std::abs(t.gib_legacy_28d - 29.39) <= 0.01, "29.39");
    o.require(std::abs(t.gib_unified_28d - 17.97) <= 0.01, "17.97");
    o.require(std::abs(t.gib_bnode_28d - 13.15) <= 0.01, "13.15");
    o.require(std::lround(t.ratio_unified) == 237 && std::abs(std::lround(t.ratio_unified) - 238) <= 1, "237 vs 238");
    o.require(std::lround(t.ratio_bnode) == 174, "174");
    // Byte-level projection agrees with the MiB formula.
    bench::GraphStats day;
    day.bytes = static_cast<std::int64_t>(std::llround(bench::ReportedSizes::kUnifiedMiB * bench::kMiB));
    const double gib = static_cast<double>(bench::project_storage(day, 28)) / (bench::kMiB * 1024.0);
    o.require(std::abs(bench::round2(gib) - 17.97) <= 0.01, "project_storage 17.97");
  });

  criterion(6, "36 competency queries parse and match the tabular oracle on 3 seeds (incl. C6.3)", 30.0, [](Outcome& o) {
    const auto manifest = bench::load_manifest(fs::path(HPCODA_QUERY_DIR) / "manifest.txt");
    for (std::uint64_t seed = 1; seed <= 3; ++seed) {
      const auto ds = fixture::generate(suite_fixture(seed));
      const auto g = kg::build_graph(ds, bench::suite_build_options());
      const auto res = bench::run_suite(g, HPCODA_QUERY_DIR, ds, manifest);
      o.detail << " seed " << seed << ": " << res.parsed() << '/' << res.entries.size() << " parsed, " << res.matched()
               << " match;";
      for (const auto& e : res.entries)
        if (!e.passed()) o.require(false, "seed " + std::to_string(seed) + " " + e.id + ": " + e.message);
      o.require(res.entries.size() == 36, "36 questions");
      o.require(res.all_passed(), "all pass");
      const auto c63 = std::find_if(res.entries.begin(), res.entries.end(), [](const auto& e) { return e.id == "C6.3"; });
      o.require(c63 != res.entries.end() && c63->passed() && c63->rows > 0, "C6.3 non-empty and matching");
    }
  });

  criterion(7, "property suites: index vs naive, N-Triples round trip, validator, fixture determinism", 120.0, [](Outcome& o) {
    // 7a: 100 random graphs.
    std::mt19937_64 rng(7);
    std::size_t patterns_checked = 0;
    for (int g = 0; g < 100; ++g) {
      const std::size_t n_terms = 5 + rng() % 200;
      const std::size_t n_triples = 1 + rng() % 10'000;
      rdf::TripleStore store;
      std::vector<rdf::TermId> nodes, preds;
      for (std::size_t i = 0; i < n_terms; ++i) nodes.push_back(store.intern(rdf::Term::iri("http://x.org/n" + std::to_string(i))));
      for (std::size_t i = 0; i < 1 + rng() % 12; ++i) preds.push_back(store.intern(rdf::Term::iri("http://x.org/p" + std::to_string(i))));
      for (std::size_t i = 0; i < 20; ++i) nodes.push_back(store.intern(rdf::Term::integer(static_cast<std::int64_t>(i))));
      NaiveStore naive;
      std::set<rdf::TripleIds> seen;
      for (std::size_t i = 0; i < n_triples; ++i) {
        const rdf::TripleIds t{nodes[rng() % n_terms], preds[rng() % preds.size()], nodes[rng() % nodes.size()]};
        const bool fresh = seen.insert(t).second;
        if (store.insert_ids(t) != fresh) o.require(false, "insert result disagrees with set semantics");
        if (fresh) naive.triples.push_back(t);
      }
      store.seal();
      if (store.size() != naive.triples.size()) o.require(false, "size mismatch");
      for (int k = 0; k < 64; ++k) {
        const auto& pick = naive.triples[rng() % naive.triples.size()];
        const unsigned mask = static_cast<unsigned>(k % 8);
        rdf::IdPattern pat;
        // Half the probes use a random (possibly absent) id combination.
        const bool random_probe = (k / 8) % 2 == 1;
        if (mask & 1) pat.s = random_probe ? nodes[rng() % nodes.size()] : pick.s;
        if (mask & 2) pat.p = random_probe ? preds[rng() % preds.size()] : pick.p;
        if (mask & 4) pat.o = random_probe ? nodes[rng() % nodes.size()] : pick.o;
        std::vector<rdf::TripleIds> got(store.match_ids(pat).begin(), store.match_ids(pat).end());
        std::sort(got.begin(), got.end());
        if (got != naive.match(pat)) {
          o.require(false, "graph " + std::to_string(g) + " pattern mask " + std::to_string(mask));
          break;
        }
        ++patterns_checked;
      }
    }
    o.detail << " " << patterns_checked << " index probes agree;";

    // 7b-7c on builder outputs.
    fixture::FixtureParams p = suite_fixture(5);
    p.duration = 86'400;
    const auto ds = fixture::generate(p);
    const auto schema = ontology::builtin_schema();
    for (const auto mode : bench::kAllModes) {
      kg::BuildOptions opts;
      opts.mode = mode;
      for (const bool dedup : {false, true}) {
        opts.dedup_time_nodes = dedup;
        const auto g = kg::build_graph(ds, opts);
        std::ostringstream w1;
        rdf::write_ntriples(g, w1);
        auto back = rdf::read_ntriples_string(w1.str());
        back.seal();
        std::ostringstream w2;
        rdf::write_ntriples(back, w2);
        o.require(w1.str() == w2.str(), std::string(kg::mode_name(mode)) + " write/read/write byte identity");
        const auto& sch = mode == kg::SchemaMode::LegacyOda ? ontology::legacy_schema() : schema;
        const auto v = ontology::validate_graph(sch, g);
        o.require(v.empty(), std::string(kg::mode_name(mode)) + " builder output validates (" + std::to_string(v.size()) + ")");
      }
    }
    o.detail << " round trips and validation clean for 3 modes x 2 dedup settings;";

    // 7c: five injected violations, each flagged with the expected kind.
    const auto base = kg::build_graph(ds, bench::suite_build_options());
    const auto job = rdf::Term::iri(kg::uri::job(ds.jobs.front().id));
    const auto sensor = rdf::Term::iri(kg::uri::sensor(ds.sensors.front().node_id, ds.sensors.front().name));
    const auto reading = rdf::Term::iri(kg::uri::reading(ds.readings.front().node_id, ds.readings.front().sensor_name,
                                                         ds.readings.front().ts));
    const auto hpc = [](const char* l) { return rdf::Term::iri(rdf::vocab::hpc(l)); };
    using VK = ontology::ViolationKind;
    const std::vector<std::pair<rdf::Triple, VK>> injected{
        {{job, hpc("hasReading"), reading}, VK::DomainViolation},
        {{reading, hpc("value"), rdf::Term::string("12.5")}, VK::DatatypeViolation},
        {{sensor, hpc("hasReading"), job}, VK::RangeViolation},
        {{sensor, hpc("hasColour"), rdf::Term::string("blue")}, VK::UnknownProperty},
        {{job, hpc("posX"), rdf::Term::integer(1)}, VK::DomainViolation},
    };
    int flagged = 0;
    for (const auto& [t, kind] : injected) {
      auto g = base;
      g.insert(t);
      g.seal();
      const auto v = ontology::validate_graph(schema, g);
      const bool hit = v.size() == 1 && v[0].kind == kind && v[0].triple == t;
      flagged += hit ? 1 : 0;
      o.require(hit, "injected " + std::string(ontology::violation_kind_name(kind)));
    }
    o.detail << ' ' << flagged << "/5 injected violations flagged;";

    // 7d: fixture determinism.
    TempDir a("det_a"), b("det_b");
    auto q = suite_fixture(7);
    q.duration = 86'400;
    fixture::write_fixture(fixture::generate(q), a.path);
    fixture::write_fixture(fixture::generate(q), b.path);
    o.require(dirs_identical(a.path, b.path), "fixture byte-identical for a fixed seed");
    o.detail << " fixture directories byte-identical";
  });

  std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed") << std::endl;
  return failures;
}
