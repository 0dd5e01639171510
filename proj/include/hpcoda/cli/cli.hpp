#pragma once

#include <cmath>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "hpcoda/bench/report.hpp"
#include "hpcoda/bench/suite.hpp"
#include "hpcoda/common/fs.hpp"
#include "hpcoda/fixture/generator.hpp"
#include "hpcoda/ingest/loader.hpp"
#include "hpcoda/kg/builder.hpp"
#include "hpcoda/ontology/document.hpp"
#include "hpcoda/ontology/validate.hpp"
#include "hpcoda/rdf/ntriples.hpp"
#include "hpcoda/rdf/turtle.hpp"
#include "hpcoda/sparql/results.hpp"

namespace hpcoda::cli {

inline constexpr int kOk = 0;
inline constexpr int kUsage = 1;
inline constexpr int kDataError = 2;

namespace fs = std::filesystem;

// Graph files: Turtle when the extension says so, otherwise N-Triples.
inline bool is_turtle_path(const fs::path& p) {
  const auto ext = p.extension().string();
  return ext == ".ttl" || ext == ".turtle";
}

inline rdf::TripleStore load_graph(const fs::path& p) {
  if (!fs::exists(p)) throw IoError("graph file not found: " + p.string());
  rdf::TripleStore g = is_turtle_path(p) ? rdf::read_turtle_file(p) : rdf::read_ntriples_file(p);
  g.seal();
  return g;
}

inline std::int64_t days_to_seconds(double days) { return static_cast<std::int64_t>(std::llround(days * 86'400.0)); }

inline std::int64_t tabular_bytes(const fs::path& dir) {
  std::int64_t total = 0;
  for (const auto& e : fs::directory_iterator(dir))
    if (e.is_regular_file() && e.path().extension() == ".csv") total += static_cast<std::int64_t>(e.file_size());
  return total;
}

struct ShapeFlags {
  fixture::FixtureParams p;
  double days = 1.0;

  void attach(CLI::App* app, bool with_population) {
    app->add_option("--dcs", p.data_centers, "Data centers")->check(CLI::NonNegativeNumber);
    app->add_option("--systems", p.systems_per_dc, "HPC systems per data center")->check(CLI::NonNegativeNumber);
    app->add_option("--racks", p.racks_per_system, "Racks per system")->check(CLI::NonNegativeNumber);
    app->add_option("--nodes", p.nodes_per_rack, "Compute nodes per rack")->check(CLI::NonNegativeNumber);
    app->add_option("--sensors", p.sensors_per_node, "Sensors per node")->check(CLI::NonNegativeNumber);
    app->add_option("--interval", p.sampling_interval, "Sampling interval in seconds")->check(CLI::PositiveNumber);
    app->add_option("--days", days, "Covered duration in days")->check(CLI::NonNegativeNumber);
    app->add_option("--start", p.start_time, "First sample, Unix seconds");
    if (with_population) {
      app->add_option("--seed", p.seed, "RNG seed");
      app->add_option("--users", p.users_per_system, "Users per system")->check(CLI::NonNegativeNumber);
      app->add_option("--jobs", p.jobs_per_system, "Jobs per system")->check(CLI::NonNegativeNumber);
      app->add_option("--metrics", p.metrics_per_job, "Metrics per job")->check(CLI::NonNegativeNumber);
      app->add_flag("--job-centric", p.job_centric, "Alternate job-centric metric sets across systems");
      app->add_option("--max-readings", p.max_readings, "Refuse fixtures above this many readings");
    }
  }
  fixture::FixtureParams params() const {
    auto out = p;
    out.duration = days_to_seconds(days);
    return out;
  }
};

inline kg::SchemaMode mode_from(const std::string& s) {
  const auto m = kg::parse_mode(s);
  if (!m) throw CLI::ValidationError("--mode", "expected legacy, unified or unified-bnode, got '" + s + "'");
  return *m;
}

inline const CLI::Validator& mode_check() {
  static const CLI::IsMember v({"legacy", "unified", "unified-bnode"});
  return v;
}

inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  CLI::App app{"Unified ODA ontology toolkit: fixtures, knowledge graphs, SPARQL and storage reports", "hpcoda"};
  app.require_subcommand(1, 1);
  app.set_help_all_flag("--help-all", "Help for every subcommand");

  // gen-fixture
  ShapeFlags gen_shape;
  std::string gen_out;
  auto* gen = app.add_subcommand("gen-fixture", "Generate a deterministic CSV fixture");
  gen_shape.attach(gen, true);
  gen->add_option("--out", gen_out, "Output directory")->required();

  // build
  std::string build_mode = "unified", build_fixture, build_out, build_ts;
  bool build_dedup = false;
  auto* build = app.add_subcommand("build", "Build a knowledge graph from a fixture");
  build->add_option("--mode", build_mode, "legacy | unified | unified-bnode")->check(mode_check());
  build->add_flag("--dedup-time", build_dedup, "Share one time node per distinct timestamp");
  build->add_option("--timestamps", build_ts, "unix | iso (default: iso, legacy always iso)")
      ->check(CLI::IsMember({"unix", "iso"}));
  build->add_option("--fixture", build_fixture, "Fixture directory")->required();
  build->add_option("--out", build_out, "Output graph (.nt or .ttl)")->required();

  // stats
  std::string stats_graph;
  auto* stats = app.add_subcommand("stats", "Triple, node and byte counts of a graph");
  stats->add_option("--graph", stats_graph, "Graph file")->required();

  // query
  std::string q_graph, q_file, q_out;
  bool q_csv = false;
  std::vector<std::string> q_params;
  auto* query = app.add_subcommand("query", "Run a SPARQL query against a graph");
  query->add_option("--graph", q_graph, "Graph file")->required();
  query->add_option("--query", q_file, "Query file (.rq)")->required();
  query->add_flag("--csv", q_csv, "CSV output");
  query->add_option("--param", q_params, "key=value for ${key} placeholders");
  query->add_option("--out", q_out, "Write the result here instead of stdout");

  // suite
  std::string s_fixture, s_queries, s_manifest;
  auto* suite = app.add_subcommand("suite", "Run the competency question suite against the tabular oracle");
  suite->add_option("--fixture", s_fixture, "Fixture directory")->required();
  suite->add_option("--queries", s_queries, "Directory of <id>.rq files")->required();
  suite->add_option("--manifest", s_manifest, "Parameter manifest")->required();

  // compare
  std::string c_fixture, c_csv_out;
  bool c_baseline = false;
  auto* compare = app.add_subcommand("compare", "Compare the three graph versions of a fixture");
  compare->add_option("--fixture", c_fixture, "Fixture directory")->required();
  compare->add_flag("--baseline", c_baseline, "Report size ratios against the fixture's CSV bytes");
  compare->add_option("--csv", c_csv_out, "Also write the table as CSV to this file");

  // dry-run
  ShapeFlags dry_shape;
  std::string dry_mode = "unified";
  bool dry_dedup = false, dry_table5 = false;
  std::optional<std::int64_t> dry_readings;
  auto* dry = app.add_subcommand("dry-run", "Closed-form triple counts without building");
  dry_shape.attach(dry, false);
  dry->add_option("--mode", dry_mode, "legacy | unified | unified-bnode")->check(mode_check());
  dry->add_flag("--dedup-time", dry_dedup, "Shared time nodes");
  dry->add_option("--readings", dry_readings, "Use this reading count instead of a shape")->check(CLI::NonNegativeNumber);
  dry->add_flag("--table5", dry_table5, "Replay the reported per-version triple totals");

  // emit-ontology
  std::string eo_format = "ttl", eo_out;
  bool eo_legacy = false;
  auto* emit = app.add_subcommand("emit-ontology", "Write the ontology document");
  emit->add_option("--format", eo_format, "ttl | nt")->check(CLI::IsMember({"ttl", "turtle", "nt", "ntriples"}));
  emit->add_option("--out", eo_out, "Output file")->required();
  emit->add_flag("--legacy", eo_legacy, "Include the legacy DataRecord extension");

  // count-axioms
  std::string ca_file;
  auto* axioms = app.add_subcommand("count-axioms", "Recount axioms of an ontology document");
  axioms->add_option("--ontology", ca_file, "Ontology file (.ttl or .nt)")->required();

  // validate
  std::string v_graph, v_schema = "unified";
  auto* validate = app.add_subcommand("validate", "Check a graph against the ontology's domains and ranges");
  validate->add_option("--graph", v_graph, "Graph file")->required();
  validate->add_option("--schema", v_schema, "unified | legacy")->check(CLI::IsMember({"unified", "legacy"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kUsage;
  }

  try {
    if (*gen) {
      const auto p = gen_shape.params();
      const auto ds = fixture::generate(p);
      const auto files = fixture::write_fixture(ds, gen_out);
      out << "wrote " << files.size() << " files to " << gen_out << " (" << with_thousands(static_cast<std::int64_t>(ds.readings.size()))
          << " readings, " << ds.jobs.size() << " jobs)\n";
    } else if (*build) {
      kg::BuildOptions opts;
      opts.mode = mode_from(build_mode);
      opts.dedup_time_nodes = build_dedup;
      if (build_ts == "unix") opts.timestamp_encoding = kg::TimestampEncoding::UnixSeconds;
      if (build_ts == "iso") opts.timestamp_encoding = kg::TimestampEncoding::Iso8601;
      const auto ds = ingest::load_dataset(build_fixture);
      const auto res = kg::build(ds, opts);
      const auto rep = is_turtle_path(build_out) ? rdf::write_turtle_file(res.store, build_out)
                                                 : rdf::write_ntriples_file(res.store, build_out);
      const auto st = res.store.stats();
      out << kg::mode_name(opts.mode) << ": " << with_thousands(static_cast<std::int64_t>(st.triple_count)) << " triples, "
          << with_thousands(static_cast<std::int64_t>(st.node_count)) << " nodes, "
          << with_thousands(static_cast<std::int64_t>(rep.bytes_written)) << " bytes -> " << build_out << '\n';
    } else if (*stats) {
      const auto g = load_graph(stats_graph);
      const auto st = g.stats();
      const auto nt = rdf::measure_ntriples(g);
      out << "triples: " << with_thousands(static_cast<std::int64_t>(st.triple_count)) << '\n'
          << "nodes: " << with_thousands(static_cast<std::int64_t>(st.node_count)) << '\n'
          << "terms: " << with_thousands(static_cast<std::int64_t>(st.dict_size)) << '\n'
          << "n-triples bytes: " << with_thousands(static_cast<std::int64_t>(nt.bytes_written)) << " ("
          << bench::mib_text(static_cast<std::int64_t>(nt.bytes_written)) << " MiB)\n";
    } else if (*query) {
      const auto g = load_graph(q_graph);
      bench::Params params;
      for (const auto& kv : q_params) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos) {
          err << "--param expects key=value, got '" << kv << "'\n";
          return kUsage;
        }
        params.set(kv.substr(0, eq), kv.substr(eq + 1));
      }
      const std::string text = bench::substitute(read_file(q_file), params);
      const auto result = sparql::evaluate(sparql::parse_query(text), g);
      auto emit_result = [&](std::ostream& o) {
        if (q_csv) {
          sparql::write_csv(result, o);
        } else {
          sparql::write_text(result, o);
        }
      };
      if (q_out.empty()) {
        emit_result(out);
      } else {
        write_file_atomic(q_out, emit_result);
      }
    } else if (*suite) {
      const auto ds = ingest::load_dataset(s_fixture);
      const auto manifest = bench::load_manifest(s_manifest);
      const auto g = kg::build_graph(ds, bench::suite_build_options());
      const auto res = bench::run_suite(g, s_queries, ds, manifest);
      bench::write_suite_text(res, out);
      return res.all_passed() ? kOk : kDataError;
    } else if (*compare) {
      const auto ds = ingest::load_dataset(c_fixture);
      std::optional<std::int64_t> baseline;
      if (c_baseline) baseline = tabular_bytes(c_fixture);
      const auto rep = bench::compare_modes(ds, baseline);
      bench::write_compare_text(rep, out);
      if (!c_csv_out.empty()) write_file_atomic(c_csv_out, [&](std::ostream& o) { bench::write_compare_csv(rep, o); });
    } else if (*dry) {
      const auto mode = mode_from(dry_mode);
      if (dry_table5) {
        const auto r = bench::replay_table5();
        bench::write_table5_replay(r, out);
        return r.consistent() ? kOk : kDataError;
      }
      const auto c = dry_readings ? bench::dry_run_counts_for_readings(*dry_readings, mode)
                                  : bench::dry_run_counts(dry_shape.params(), mode, dry_dedup);
      out << "mode: " << kg::mode_name(mode) << (dry_dedup ? " (shared time nodes)" : "") << '\n'
          << "readings: " << with_thousands(c.readings) << '\n'
          << "reading triples: " << with_thousands(c.reading_triples) << '\n';
      if (mode == kg::SchemaMode::LegacyOda) out << "record triples: " << with_thousands(c.record_triples) << '\n';
      out << "static triples: " << with_thousands(c.static_triples) << '\n'
          << "total triples: " << with_thousands(c.total()) << '\n';
    } else if (*emit) {
      const auto schema = eo_legacy ? ontology::legacy_schema() : ontology::builtin_schema();
      const auto fmt = ontology::parse_format_tag(eo_format);
      ontology::write_ontology_file(schema, fmt, eo_out);
      const auto counts = ontology::count_axioms_in_file(eo_out);
      out << "wrote " << eo_out << ": " << counts.classes << " classes, " << counts.object_properties
          << " object properties, " << counts.data_properties << " data properties, " << counts.logical()
          << " logical axioms, " << counts.total() << " axioms\n";
    } else if (*axioms) {
      if (!fs::exists(ca_file)) throw IoError("ontology file not found: " + ca_file);
      const auto c = ontology::count_axioms_in_file(ca_file);
      out << "classes: " << c.classes << '\n'
          << "object properties: " << c.object_properties << '\n'
          << "data properties: " << c.data_properties << '\n'
          << "declarations: " << c.declarations() << '\n'
          << "object property domain/range: " << c.object_domain_range << '\n'
          << "data property domain/range: " << c.data_domain_range << '\n'
          << "inverse-of: " << c.inverse_of << '\n'
          << "logical axioms: " << c.logical() << '\n'
          << "axioms: " << c.total() << '\n'
          << "annotations: " << c.annotations << '\n';
    } else if (*validate) {
      const auto g = load_graph(v_graph);
      const auto schema = v_schema == "legacy" ? ontology::legacy_schema() : ontology::builtin_schema();
      const auto violations = ontology::validate_graph(schema, g);
      for (const auto& v : violations) out << ontology::describe(v) << '\n';
      out << violations.size() << (violations.size() == 1 ? " violation\n" : " violations\n");
      return violations.empty() ? kOk : kDataError;
    }
  } catch (const CLI::ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kDataError;
  }
  return kOk;
}

}  // namespace hpcoda::cli
