#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "hpcoda/common/error.hpp"
#include "hpcoda/common/time.hpp"
#include "hpcoda/ingest/dataset.hpp"
#include "hpcoda/kg/uri_policy.hpp"
#include "hpcoda/rdf/term.hpp"
#include "hpcoda/rdf/triple_store.hpp"

namespace hpcoda::kg {

using rdf::Term;
using rdf::Triple;

enum class SchemaMode { LegacyOda, UnifiedUri, UnifiedBnode };

inline std::string_view mode_name(SchemaMode m) {
  switch (m) {
    case SchemaMode::LegacyOda: return "legacy";
    case SchemaMode::UnifiedUri: return "unified";
    case SchemaMode::UnifiedBnode: return "unified-bnode";
  }
  return "?";
}

inline std::optional<SchemaMode> parse_mode(std::string_view s) {
  if (s == "legacy") return SchemaMode::LegacyOda;
  if (s == "unified") return SchemaMode::UnifiedUri;
  if (s == "unified-bnode") return SchemaMode::UnifiedBnode;
  return std::nullopt;
}

enum class TimestampEncoding { UnixSeconds, Iso8601 };

struct BuildOptions {
  SchemaMode mode = SchemaMode::UnifiedUri;
  // Share one Time node per distinct timestamp across readings and jobs.
  bool dedup_time_nodes = false;
  // Unset: Unix seconds for unified modes. Legacy always uses ISO 8601.
  std::optional<TimestampEncoding> timestamp_encoding;

  TimestampEncoding encoding() const {
    if (mode == SchemaMode::LegacyOda) return TimestampEncoding::Iso8601;
    return timestamp_encoding.value_or(TimestampEncoding::UnixSeconds);
  }
};

// Predicate and class terms, created once.
struct Vocabulary {
  Term type = rdf::rdf_type();
  Term c_data_center = hpc("DataCenter"), c_system = hpc("HPCSystem"), c_user = hpc("User"), c_job = hpc("Job"),
       c_job_metric = hpc("JobMetric"), c_rack = hpc("Rack"), c_node = hpc("ComputeNode"),
       c_position = hpc("Position"), c_plugin = hpc("Plugin"), c_sensor = hpc("Sensor"),
       c_reading = hpc("SensorReading"), c_data_record = hpc("DataRecord");
  Term has_hpc_system = hpc("hasHPCSystem"), has_user = hpc("hasUser"), has_rack = hpc("hasRack"),
       has_compute_node = hpc("hasComputeNode"), has_position = hpc("hasPosition"), is_job_of = hpc("isJobOf"),
       uses_compute_node = hpc("usesComputeNode"), has_job_start = hpc("hasJobStartTime"),
       has_job_end = hpc("hasJobEndTime"), has_job_metric = hpc("hasJobMetric"), has_plugin = hpc("hasPlugin"),
       has_reading = hpc("hasReading"), has_sensor = hpc("hasSensor"), has_timestamp = hpc("hasTimestamp"),
       includes_sensor = hpc("includesSensor"), part_of_record = hpc("partOfRecord"),
       record_of_plugin = hpc("recordOfPlugin");
  Term dc_id = hpc("dcId"), dc_name = hpc("dcName"), location = hpc("location"), system_id = hpc("systemId"),
       system_name = hpc("systemName"), user_id = hpc("userId"), user_name = hpc("userName"),
       rack_id = hpc("rackId"), compute_node_id = hpc("computeNodeId"), pos_x = hpc("posX"), pos_y = hpc("posY"),
       pos_z = hpc("posZ"), plugin_name = hpc("pluginName"), job_id = hpc("jobId"), job_name = hpc("jobName"),
       group_id = hpc("groupId"), exit_code = hpc("exitCode"), job_duration = hpc("jobDuration"),
       metric_name = hpc("metricName"), metric_value = hpc("metricValue"), sensor_name = hpc("sensorName"),
       sensor_type = hpc("sensorType"), sensor_unit = hpc("sensorUnit"), timestamp = hpc("timestamp"),
       value = hpc("value"), reading_timestamp = hpc("readingTimestamp"), reading_unit = hpc("readingUnit");

  static Term hpc(std::string_view local) { return Term::iri(rdf::vocab::hpc(local)); }

  static const Vocabulary& get() {
    static const Vocabulary v;
    return v;
  }
};

inline Term timestamp_literal(std::int64_t ts, TimestampEncoding enc) {
  if (enc == TimestampEncoding::UnixSeconds) return Term::integer(ts);
  return Term::literal(time::format_iso8601(ts), rdf::Datatype::DateTime);
}

inline Term metric_value_literal(double v) { return Term::literal(format_double(v), rdf::Datatype::Float); }

// Triples for one reading. Unified modes: 4 triples with the timestamp on a
// Time node (a per-reading blank node, or the shared time/<ts> IRI when
// dedup_time_nodes is set). Legacy: 6 triples with an ISO timestamp, the
// unit and a DataRecord link on the reading itself.
inline std::vector<Triple> emit_reading(const ingest::DatasetIndex& idx, const ingest::Reading& r,
                                        const BuildOptions& opts) {
  const auto* sensor = idx.sensor(r.node_id, r.sensor_name);
  if (!sensor) {
    throw BuildError("reading references unknown sensor '" + r.sensor_name + "' on node " +
                     std::to_string(r.node_id));
  }
  const auto& v = Vocabulary::get();
  const Term sensor_term = Term::iri(uri::sensor(r.node_id, r.sensor_name));
  const Term value = Term::dbl(r.value);

  if (opts.mode == SchemaMode::LegacyOda) {
    const Term reading = Term::iri(uri::reading(r.node_id, r.sensor_name, r.ts));
    return {
        {reading, v.type, v.c_reading},
        {reading, v.value, value},
        {reading, v.reading_timestamp, timestamp_literal(r.ts, TimestampEncoding::Iso8601)},
        {reading, v.reading_unit, Term::string(sensor->unit)},
        {sensor_term, v.has_reading, reading},
        {reading, v.part_of_record, Term::iri(uri::data_record(r.node_id, sensor->plugin_name, r.ts))},
    };
  }

  const std::int64_t ordinal = idx.sensor_ordinal(r.node_id, r.sensor_name);
  const Term reading = opts.mode == SchemaMode::UnifiedBnode
                           ? Term::blank(uri::reading_label(r.node_id, ordinal, r.ts))
                           : Term::iri(uri::reading(r.node_id, r.sensor_name, r.ts));
  const Term time_node = opts.dedup_time_nodes ? Term::iri(uri::time(r.ts))
                                               : Term::blank(uri::time_label(r.node_id, ordinal, r.ts));
  return {
      {sensor_term, v.has_reading, reading},
      {reading, v.value, value},
      {reading, v.has_timestamp, time_node},
      {time_node, v.timestamp, timestamp_literal(r.ts, opts.encoding())},
  };
}

// Legacy DataRecord description: one per (node, plugin, day).
inline std::vector<Triple> emit_data_record(std::int64_t node_id, std::string_view plugin_name, std::int64_t ts) {
  const auto& v = Vocabulary::get();
  const Term record = Term::iri(uri::data_record(node_id, plugin_name, ts));
  return {
      {record, v.type, v.c_data_record},
      {record, v.record_of_plugin, Term::iri(uri::plugin(node_id, plugin_name))},
  };
}

// Topology, users, plugins and sensors. Only forward object properties are
// written; inverses stay schema-level.
inline std::vector<Triple> emit_static(const ingest::Dataset& ds, const BuildOptions& opts) {
  const auto& v = Vocabulary::get();
  std::vector<Triple> out;
  auto add = [&](const Term& s, const Term& p, Term o) { out.push_back({s, p, std::move(o)}); };

  for (const auto& dc : ds.data_centers) {
    const Term s = Term::iri(uri::data_center(dc.id));
    add(s, v.type, v.c_data_center);
    add(s, v.dc_id, Term::integer(dc.id));
    add(s, v.dc_name, Term::string(dc.name));
    add(s, v.location, Term::string(dc.location));
    for (const auto& sys : ds.hpc_systems)
      if (sys.dc_id == dc.id) add(s, v.has_hpc_system, Term::iri(uri::system(sys.id)));
  }
  for (const auto& sys : ds.hpc_systems) {
    const Term s = Term::iri(uri::system(sys.id));
    add(s, v.type, v.c_system);
    add(s, v.system_id, Term::integer(sys.id));
    add(s, v.system_name, Term::string(sys.name));
    for (const auto& u : ds.users)
      if (u.system_id == sys.id) add(s, v.has_user, Term::iri(uri::user(u.id)));
    for (const auto& r : ds.racks)
      if (r.system_id == sys.id) add(s, v.has_rack, Term::iri(uri::rack(r.id)));
  }
  std::unordered_map<std::int64_t, std::vector<std::int64_t>> nodes_by_rack;
  for (const auto& n : ds.compute_nodes) nodes_by_rack[n.rack_id].push_back(n.id);
  for (const auto& r : ds.racks) {
    const Term s = Term::iri(uri::rack(r.id));
    add(s, v.type, v.c_rack);
    add(s, v.rack_id, Term::integer(r.id));
    for (auto n : nodes_by_rack[r.id]) add(s, v.has_compute_node, Term::iri(uri::node(n)));
  }
  std::unordered_map<std::int64_t, std::vector<const ingest::Plugin*>> plugins_by_node;
  std::unordered_map<std::int64_t, std::vector<const ingest::Sensor*>> sensors_by_node;
  for (const auto& p : ds.plugins) plugins_by_node[p.node_id].push_back(&p);
  for (const auto& s : ds.sensors) sensors_by_node[s.node_id].push_back(&s);
  for (const auto& n : ds.compute_nodes) {
    const Term s = Term::iri(uri::node(n.id));
    const Term pos = Term::iri(uri::position(n.id));
    add(s, v.type, v.c_node);
    add(s, v.compute_node_id, Term::integer(n.id));
    add(s, v.has_position, pos);
    for (const auto* p : plugins_by_node[n.id]) add(s, v.has_plugin, Term::iri(uri::plugin(n.id, p->name)));
    for (const auto* x : sensors_by_node[n.id]) add(s, v.has_sensor, Term::iri(uri::sensor(n.id, x->name)));
    add(pos, v.type, v.c_position);
    add(pos, v.pos_x, Term::integer(n.pos_x));
    add(pos, v.pos_y, Term::integer(n.pos_y));
    add(pos, v.pos_z, Term::integer(n.pos_z));
  }
  for (const auto& p : ds.plugins) {
    const Term s = Term::iri(uri::plugin(p.node_id, p.name));
    add(s, v.type, v.c_plugin);
    add(s, v.plugin_name, Term::string(p.name));
    for (const auto* x : sensors_by_node[p.node_id])
      if (x->plugin_name == p.name) add(s, v.includes_sensor, Term::iri(uri::sensor(p.node_id, x->name)));
  }
  for (const auto& x : ds.sensors) {
    const Term s = Term::iri(uri::sensor(x.node_id, x.name));
    add(s, v.type, v.c_sensor);
    add(s, v.sensor_name, Term::string(x.name));
    add(s, v.sensor_type, Term::string(x.type));
    // The legacy schema keeps the unit on every reading instead.
    if (opts.mode != SchemaMode::LegacyOda) add(s, v.sensor_unit, Term::string(x.unit));
  }
  for (const auto& u : ds.users) {
    const Term s = Term::iri(uri::user(u.id));
    add(s, v.type, v.c_user);
    add(s, v.user_id, Term::integer(u.id));
    add(s, v.user_name, Term::string(u.name));
  }
  return out;
}

// One job with its metrics. Start and end point at shared time/<ts> nodes.
inline std::vector<Triple> emit_job(const ingest::Job& job, const std::vector<const ingest::JobMetric*>& metrics,
                                    const BuildOptions& opts) {
  if (job.end < job.start) throw BuildError("job " + std::to_string(job.id) + " ends before it starts");
  const auto& v = Vocabulary::get();
  std::vector<Triple> out;
  auto add = [&](const Term& s, const Term& p, Term o) { out.push_back({s, p, std::move(o)}); };
  const Term s = Term::iri(uri::job(job.id));
  add(s, v.type, v.c_job);
  add(s, v.job_id, Term::integer(job.id));
  add(s, v.job_name, Term::string(job.name));
  add(s, v.group_id, Term::integer(job.group_id));
  add(s, v.exit_code, Term::integer(job.exit_code));
  add(s, v.job_duration, Term::literal(time::format_duration_seconds(job.end - job.start), rdf::Datatype::Duration));
  add(s, v.is_job_of, Term::iri(uri::user(job.user_id)));
  for (auto n : job.node_ids) add(s, v.uses_compute_node, Term::iri(uri::node(n)));
  const Term start = Term::iri(uri::time(job.start));
  const Term end = Term::iri(uri::time(job.end));
  add(s, v.has_job_start, start);
  add(s, v.has_job_end, end);
  add(start, v.timestamp, timestamp_literal(job.start, opts.encoding()));
  add(end, v.timestamp, timestamp_literal(job.end, opts.encoding()));
  for (const auto* m : metrics) {
    const Term mt = Term::iri(uri::job_metric(job.id, m->name));
    add(s, v.has_job_metric, mt);
    add(mt, v.type, v.c_job_metric);
    add(mt, v.metric_name, Term::string(m->name));
    add(mt, v.metric_value, metric_value_literal(m->value));
  }
  return out;
}

struct BuildResult {
  rdf::TripleStore store;
  // Distinct triples contributed by each emitter, in emission order
  // static, jobs, readings, data records.
  std::size_t static_triples = 0;
  std::size_t job_triples = 0;
  std::size_t reading_triples = 0;
  std::size_t record_triples = 0;
};

inline BuildResult build(const ingest::Dataset& ds, const BuildOptions& opts) {
  const ingest::DatasetIndex idx(ds);
  BuildResult res;
  auto& store = res.store;
  const std::size_t per_reading = opts.mode == SchemaMode::LegacyOda ? 6 : 4;
  store.reserve(ds.readings.size() * per_reading + ds.sensors.size() * 4 + ds.jobs.size() * 16);

  auto insert_all = [&](const std::vector<Triple>& ts) {
    std::size_t n = 0;
    for (const auto& t : ts) n += store.insert(t) ? 1 : 0;
    return n;
  };

  res.static_triples = insert_all(emit_static(ds, opts));

  std::unordered_map<std::int64_t, std::vector<const ingest::JobMetric*>> metrics_by_job;
  for (const auto& m : ds.job_metrics) metrics_by_job[m.job_id].push_back(&m);
  for (const auto& j : ds.jobs) {
    if (!idx.user(j.user_id)) throw BuildError("job " + std::to_string(j.id) + " has unknown user");
    res.job_triples += insert_all(emit_job(j, metrics_by_job[j.id], opts));
  }

  for (const auto& r : ds.readings) {
    const auto triples = emit_reading(idx, r, opts);
    res.reading_triples += insert_all(triples);
    if (opts.mode == SchemaMode::LegacyOda) {
      const auto* sensor = idx.sensor(r.node_id, r.sensor_name);
      res.record_triples += insert_all(emit_data_record(r.node_id, sensor->plugin_name, r.ts));
    }
  }
  store.seal();
  return res;
}

inline rdf::TripleStore build_graph(const ingest::Dataset& ds, const BuildOptions& opts) {
  return std::move(build(ds, opts).store);
}

}  // namespace hpcoda::kg
