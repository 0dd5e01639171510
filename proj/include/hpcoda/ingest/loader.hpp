#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <unordered_set>
#include <utility>
#include <vector>

#include "hpcoda/common/error.hpp"
#include "hpcoda/common/fs.hpp"
#include "hpcoda/common/numeric.hpp"
#include "hpcoda/ingest/csv.hpp"
#include "hpcoda/ingest/dataset.hpp"

namespace hpcoda::ingest {

struct FileSpec {
  std::string_view file;
  std::vector<std::string_view> columns;
};

inline const FileSpec& spec_datacenters() {
  static const FileSpec s{"datacenters.csv", {"dc_id", "name", "location"}};
  return s;
}
inline const FileSpec& spec_systems() {
  static const FileSpec s{"systems.csv", {"system_id", "dc_id", "name"}};
  return s;
}
inline const FileSpec& spec_racks() {
  static const FileSpec s{"racks.csv", {"rack_id", "system_id"}};
  return s;
}
inline const FileSpec& spec_nodes() {
  static const FileSpec s{"nodes.csv", {"node_id", "rack_id", "pos_x", "pos_y", "pos_z"}};
  return s;
}
inline const FileSpec& spec_plugins() {
  static const FileSpec s{"plugins.csv", {"node_id", "plugin_name"}};
  return s;
}
inline const FileSpec& spec_sensors() {
  static const FileSpec s{"sensors.csv", {"node_id", "plugin_name", "sensor_name", "sensor_type", "sensor_unit"}};
  return s;
}
inline const FileSpec& spec_users() {
  static const FileSpec s{"users.csv", {"user_id", "system_id", "user_name"}};
  return s;
}
inline const FileSpec& spec_jobs() {
  static const FileSpec s{"jobs.csv",
                          {"job_id", "user_id", "group_id", "job_name", "exit_code", "start_ts", "end_ts", "node_ids"}};
  return s;
}
inline const FileSpec& spec_job_metrics() {
  static const FileSpec s{"job_metrics.csv", {"job_id", "metric_name", "metric_value"}};
  return s;
}
inline const FileSpec& spec_readings() {
  static const FileSpec s{"readings.csv", {"node_id", "sensor_name", "ts", "value"}};
  return s;
}

namespace detail {

// Parses one fixture file, checking the header, and calls `row` per record.
template <class RowFn>
void parse_file(const std::filesystem::path& dir, const FileSpec& spec, RowFn&& row) {
  const auto path = dir / spec.file;
  if (!std::filesystem::exists(path)) throw IoError("missing fixture file " + path.string());
  const std::string text = read_file(path);
  csv::Reader reader(text, std::string(spec.file));
  csv::Record rec;
  if (!reader.next(rec)) reader.fail(1, "missing header row");
  if (rec.fields.size() != spec.columns.size() ||
      !std::equal(rec.fields.begin(), rec.fields.end(), spec.columns.begin()))
    reader.fail(rec.line, "unexpected header");
  while (reader.next(rec)) {
    if (rec.fields.size() != spec.columns.size()) {
      reader.fail(rec.line, "expected " + std::to_string(spec.columns.size()) + " fields, got " +
                                std::to_string(rec.fields.size()));
    }
    row(reader, csv::FieldParser{reader, rec});
  }
}

inline std::vector<std::int64_t> parse_id_list(const csv::FieldParser& f, std::size_t i, std::string_view column) {
  std::vector<std::int64_t> out;
  const std::string& s = f.text(i);
  if (s.empty()) return out;
  std::size_t start = 0;
  while (true) {
    const std::size_t end = s.find(';', start);
    const auto part = std::string_view(s).substr(start, end == std::string::npos ? std::string::npos : end - start);
    const auto v = parse_int64(part);
    if (!v) f.reader.fail(f.rec.line, "column " + std::string(column) + ": bad id '" + std::string(part) + "'");
    out.push_back(*v);
    if (end == std::string::npos) break;
    start = end + 1;
  }
  return out;
}

}  // namespace detail

// Loads a fixture directory. Every foreign key must resolve and primary keys
// must be unique; reading row order is preserved.
inline Dataset load_dataset(const std::filesystem::path& dir) {
  Dataset ds;
  auto dup = [](const csv::Reader& r, std::size_t line, const std::string& what) {
    r.fail(line, "duplicate " + what);
  };
  auto dangling = [](const csv::Reader& r, std::size_t line, const std::string& what) {
    r.fail(line, "unknown " + what);
  };

  std::unordered_set<std::int64_t> dc_ids, sys_ids, rack_ids, node_ids, user_ids, job_ids;
  std::set<std::pair<std::int64_t, std::string>> plugin_keys, sensor_keys, metric_keys;

  detail::parse_file(dir, spec_datacenters(), [&](const csv::Reader& r, const csv::FieldParser& f) {
    DataCenter dc{f.integer(0, "dc_id"), f.text(1), f.text(2)};
    if (!dc_ids.insert(dc.id).second) dup(r, f.rec.line, "data center " + std::to_string(dc.id));
    ds.data_centers.push_back(std::move(dc));
  });
  detail::parse_file(dir, spec_systems(), [&](const csv::Reader& r, const csv::FieldParser& f) {
    HpcSystem s{f.integer(0, "system_id"), f.integer(1, "dc_id"), f.text(2)};
    if (!sys_ids.insert(s.id).second) dup(r, f.rec.line, "system " + std::to_string(s.id));
    if (!dc_ids.count(s.dc_id)) dangling(r, f.rec.line, "data center " + std::to_string(s.dc_id));
    ds.hpc_systems.push_back(std::move(s));
  });
  detail::parse_file(dir, spec_racks(), [&](const csv::Reader& r, const csv::FieldParser& f) {
    Rack k{f.integer(0, "rack_id"), f.integer(1, "system_id")};
    if (!rack_ids.insert(k.id).second) dup(r, f.rec.line, "rack " + std::to_string(k.id));
    if (!sys_ids.count(k.system_id)) dangling(r, f.rec.line, "system " + std::to_string(k.system_id));
    ds.racks.push_back(k);
  });
  detail::parse_file(dir, spec_nodes(), [&](const csv::Reader& r, const csv::FieldParser& f) {
    ComputeNode n{f.integer(0, "node_id"), f.integer(1, "rack_id"), f.integer(2, "pos_x"), f.integer(3, "pos_y"),
                  f.integer(4, "pos_z")};
    if (!node_ids.insert(n.id).second) dup(r, f.rec.line, "node " + std::to_string(n.id));
    if (!rack_ids.count(n.rack_id)) dangling(r, f.rec.line, "rack " + std::to_string(n.rack_id));
    ds.compute_nodes.push_back(n);
  });
  detail::parse_file(dir, spec_plugins(), [&](const csv::Reader& r, const csv::FieldParser& f) {
    Plugin p{f.integer(0, "node_id"), f.text(1)};
    if (p.name.empty()) r.fail(f.rec.line, "empty plugin name");
    if (!node_ids.count(p.node_id)) dangling(r, f.rec.line, "node " + std::to_string(p.node_id));
    if (!plugin_keys.insert({p.node_id, p.name}).second)
      dup(r, f.rec.line, "plugin '" + p.name + "' on node " + std::to_string(p.node_id));
    ds.plugins.push_back(std::move(p));
  });
  detail::parse_file(dir, spec_sensors(), [&](const csv::Reader& r, const csv::FieldParser& f) {
    Sensor s{f.integer(0, "node_id"), f.text(1), f.text(2), f.text(3), f.text(4)};
    if (s.name.empty()) r.fail(f.rec.line, "empty sensor name");
    if (!node_ids.count(s.node_id)) dangling(r, f.rec.line, "node " + std::to_string(s.node_id));
    if (!plugin_keys.count({s.node_id, s.plugin_name}))
      dangling(r, f.rec.line, "plugin '" + s.plugin_name + "' on node " + std::to_string(s.node_id));
    if (!sensor_keys.insert({s.node_id, s.name}).second)
      dup(r, f.rec.line, "sensor '" + s.name + "' on node " + std::to_string(s.node_id));
    ds.sensors.push_back(std::move(s));
  });
  detail::parse_file(dir, spec_users(), [&](const csv::Reader& r, const csv::FieldParser& f) {
    User u{f.integer(0, "user_id"), f.integer(1, "system_id"), f.text(2)};
    if (!user_ids.insert(u.id).second) dup(r, f.rec.line, "user " + std::to_string(u.id));
    if (!sys_ids.count(u.system_id)) dangling(r, f.rec.line, "system " + std::to_string(u.system_id));
    ds.users.push_back(std::move(u));
  });
  detail::parse_file(dir, spec_jobs(), [&](const csv::Reader& r, const csv::FieldParser& f) {
    Job j;
    j.id = f.integer(0, "job_id");
    j.user_id = f.integer(1, "user_id");
    j.group_id = f.integer(2, "group_id");
    j.name = f.text(3);
    j.exit_code = f.integer(4, "exit_code");
    j.start = f.timestamp(5, "start_ts");
    j.end = f.timestamp(6, "end_ts");
    j.node_ids = detail::parse_id_list(f, 7, "node_ids");
    if (!job_ids.insert(j.id).second) dup(r, f.rec.line, "job " + std::to_string(j.id));
    if (!user_ids.count(j.user_id)) dangling(r, f.rec.line, "user " + std::to_string(j.user_id));
    if (j.end < j.start) r.fail(f.rec.line, "job " + std::to_string(j.id) + " ends before it starts");
    for (auto n : j.node_ids)
      if (!node_ids.count(n)) dangling(r, f.rec.line, "node " + std::to_string(n));
    ds.jobs.push_back(std::move(j));
  });
  detail::parse_file(dir, spec_job_metrics(), [&](const csv::Reader& r, const csv::FieldParser& f) {
    JobMetric m{f.integer(0, "job_id"), f.text(1), f.real(2, "metric_value")};
    if (!job_ids.count(m.job_id)) dangling(r, f.rec.line, "job " + std::to_string(m.job_id));
    if (m.name.empty()) r.fail(f.rec.line, "empty metric name");
    if (!metric_keys.insert({m.job_id, m.name}).second)
      dup(r, f.rec.line, "metric '" + m.name + "' for job " + std::to_string(m.job_id));
    ds.job_metrics.push_back(std::move(m));
  });
  detail::parse_file(dir, spec_readings(), [&](const csv::Reader& r, const csv::FieldParser& f) {
    Reading x{f.integer(0, "node_id"), f.text(1), f.timestamp(2, "ts"), f.real(3, "value")};
    if (x.ts < 0) r.fail(f.rec.line, "negative timestamp");
    if (!sensor_keys.count({x.node_id, x.sensor_name}))
      dangling(r, f.rec.line, "sensor '" + x.sensor_name + "' on node " + std::to_string(x.node_id));
    ds.readings.push_back(std::move(x));
  });
  return ds;
}

namespace detail {

template <class T, class RowFn>
void write_table(const std::filesystem::path& dir, const FileSpec& spec, const std::vector<T>& rows, RowFn&& to_fields) {
  write_file_atomic(dir / spec.file, [&](std::ostream& out) {
    std::vector<std::string> header(spec.columns.begin(), spec.columns.end());
    out << csv::join_row(header);
    std::string buf;
    for (const auto& row : rows) {
      buf = csv::join_row(to_fields(row));
      out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
    }
  });
}

inline std::string join_ids(const std::vector<std::int64_t>& ids) {
  std::string out;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (i) out.push_back(';');
    out += std::to_string(ids[i]);
  }
  return out;
}

}  // namespace detail

// Writes the fixture directory layout read by load_dataset. Returns the paths written.
inline std::vector<std::filesystem::path> write_dataset(const Dataset& ds, const std::filesystem::path& dir) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  using S = std::string;
  auto n = [](std::int64_t v) { return std::to_string(v); };
  detail::write_table(dir, spec_datacenters(), ds.data_centers,
                      [&](const DataCenter& x) { return std::vector<S>{n(x.id), x.name, x.location}; });
  detail::write_table(dir, spec_systems(), ds.hpc_systems,
                      [&](const HpcSystem& x) { return std::vector<S>{n(x.id), n(x.dc_id), x.name}; });
  detail::write_table(dir, spec_racks(), ds.racks,
                      [&](const Rack& x) { return std::vector<S>{n(x.id), n(x.system_id)}; });
  detail::write_table(dir, spec_nodes(), ds.compute_nodes, [&](const ComputeNode& x) {
    return std::vector<S>{n(x.id), n(x.rack_id), n(x.pos_x), n(x.pos_y), n(x.pos_z)};
  });
  detail::write_table(dir, spec_plugins(), ds.plugins,
                      [&](const Plugin& x) { return std::vector<S>{n(x.node_id), x.name}; });
  detail::write_table(dir, spec_sensors(), ds.sensors, [&](const Sensor& x) {
    return std::vector<S>{n(x.node_id), x.plugin_name, x.name, x.type, x.unit};
  });
  detail::write_table(dir, spec_users(), ds.users,
                      [&](const User& x) { return std::vector<S>{n(x.id), n(x.system_id), x.name}; });
  detail::write_table(dir, spec_jobs(), ds.jobs, [&](const Job& x) {
    return std::vector<S>{n(x.id),        n(x.user_id), n(x.group_id), x.name, n(x.exit_code),
                          n(x.start),     n(x.end),     detail::join_ids(x.node_ids)};
  });
  detail::write_table(dir, spec_job_metrics(), ds.job_metrics,
                      [&](const JobMetric& x) { return std::vector<S>{n(x.job_id), x.name, format_double(x.value)}; });
  detail::write_table(dir, spec_readings(), ds.readings, [&](const Reading& x) {
    return std::vector<S>{n(x.node_id), x.sensor_name, n(x.ts), format_double(x.value)};
  });
  std::vector<fs::path> out;
  for (const FileSpec* s : {&spec_datacenters(), &spec_systems(), &spec_racks(), &spec_nodes(), &spec_plugins(),
                            &spec_sensors(), &spec_users(), &spec_jobs(), &spec_job_metrics(), &spec_readings()})
    out.push_back(dir / s->file);
  return out;
}

// Readings with t1 <= ts < t2, jobs overlapping [t1, t2) and their metrics.
// Static entities are kept. A zero-length job overlaps when its instant lies
// in the window.
inline Dataset slice_by_time(const Dataset& ds, std::int64_t t1, std::int64_t t2) {
  if (t1 > t2) throw std::invalid_argument("slice_by_time: t1 > t2");
  Dataset out = ds;
  out.readings.clear();
  out.jobs.clear();
  out.job_metrics.clear();
  for (const auto& r : ds.readings)
    if (r.ts >= t1 && r.ts < t2) out.readings.push_back(r);
  std::unordered_set<std::int64_t> kept;
  for (const auto& j : ds.jobs) {
    const bool overlaps = j.start == j.end ? (j.start >= t1 && j.start < t2) : (j.start < t2 && j.end > t1);
    if (overlaps) {
      out.jobs.push_back(j);
      kept.insert(j.id);
    }
  }
  for (const auto& m : ds.job_metrics)
    if (kept.count(m.job_id)) out.job_metrics.push_back(m);
  return out;
}

}  // namespace hpcoda::ingest
