#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "hpcoda/common/error.hpp"
#include "hpcoda/common/numeric.hpp"
#include "hpcoda/common/time.hpp"
#include "hpcoda/ingest/dataset.hpp"
#include "hpcoda/kg/uri_policy.hpp"
#include "hpcoda/sparql/eval.hpp"

// Answers to the competency questions computed straight from the tabular
// dataset, without the graph or the query engine.
namespace hpcoda::bench {

struct Cell {
  enum class Kind { Empty, Number, Text };
  Kind kind = Kind::Empty;
  double num = 0;
  std::string text;

  static Cell empty() { return {}; }
  static Cell number(double v) { return {Kind::Number, v, {}}; }
  static Cell text_of(std::string s) { return {Kind::Text, 0, std::move(s)}; }
  static Cell boolean(bool b) { return text_of(b ? "true" : "false"); }

  std::string str() const {
    switch (kind) {
      case Kind::Empty: return "";
      case Kind::Number: return format_double(num);
      case Kind::Text: return text;
    }
    return "";
  }
};

inline bool numbers_close(double a, double b, double rel = 1e-9) {
  if (a == b) return true;
  return std::fabs(a - b) <= rel * std::max(std::fabs(a), std::fabs(b));
}

inline bool cells_equal(const Cell& a, const Cell& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case Cell::Kind::Empty: return true;
    case Cell::Kind::Number: return numbers_close(a.num, b.num);
    case Cell::Kind::Text: return a.text == b.text;
  }
  return false;
}

using Row = std::vector<Cell>;
using Table = std::vector<Row>;

struct Expected {
  Table rows;
  bool ordered = false;  // compare as a sequence instead of a multiset
};

inline Cell to_cell(const std::optional<sparql::Value>& v) {
  if (!v) return Cell::empty();
  if (v->is_numeric()) return Cell::number(v->kind == sparql::ValueKind::Integer ? static_cast<double>(v->ival) : v->num);
  return Cell::text_of(sparql::display(*v));
}

inline Table to_table(const sparql::ResultTable& r) {
  Table out;
  out.reserve(r.rows.size());
  for (const auto& row : r.rows) {
    Row cells;
    for (const auto& c : row) cells.push_back(to_cell(c));
    out.push_back(std::move(cells));
  }
  return out;
}

inline bool rows_equal(const Row& a, const Row& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!cells_equal(a[i], b[i])) return false;
  return true;
}

// Row-multiset equality (or sequence equality when ordered).
inline bool tables_match(const Table& actual, const Expected& expected) {
  if (actual.size() != expected.rows.size()) return false;
  if (expected.ordered) {
    for (std::size_t i = 0; i < actual.size(); ++i)
      if (!rows_equal(actual[i], expected.rows[i])) return false;
    return true;
  }
  std::vector<bool> used(actual.size(), false);
  for (const auto& want : expected.rows) {
    bool found = false;
    for (std::size_t i = 0; i < actual.size(); ++i) {
      if (!used[i] && rows_equal(actual[i], want)) {
        used[i] = true;
        found = true;
        break;
      }
    }
    if (!found) return false;
  }
  return true;
}

// Resolved parameters for one question.
class Params {
 public:
  Params() = default;
  explicit Params(std::map<std::string, std::string> values) : values_(std::move(values)) {}

  bool has(const std::string& key) const { return values_.count(key) != 0; }
  const std::string& str(const std::string& key) const {
    const auto it = values_.find(key);
    if (it == values_.end()) throw DataError("missing suite parameter '" + key + "'");
    return it->second;
  }
  std::string str_or(const std::string& key, std::string fallback) const { return has(key) ? str(key) : fallback; }
  double num(const std::string& key) const {
    const auto v = parse_double(str(key));
    if (!v) throw DataError("suite parameter '" + key + "' is not a number: " + str(key));
    return *v;
  }
  std::int64_t integer(const std::string& key) const {
    const auto v = parse_int64(str(key));
    if (!v) throw DataError("suite parameter '" + key + "' is not an integer: " + str(key));
    return *v;
  }
  const std::map<std::string, std::string>& values() const { return values_; }
  void set(const std::string& key, std::string value) { values_[key] = std::move(value); }

 private:
  std::map<std::string, std::string> values_;
};

namespace oracle {

struct Stats {
  std::optional<double> max, min;
  double sum = 0;
  std::int64_t count = 0;
  void add(double v) {
    max = max ? std::max(*max, v) : v;
    min = min ? std::min(*min, v) : v;
    sum += v;
    ++count;
  }
  double avg() const { return count ? sum / static_cast<double>(count) : 0.0; }
  Row max_min_avg() const {
    return {max ? Cell::number(*max) : Cell::empty(), min ? Cell::number(*min) : Cell::empty(), Cell::number(avg())};
  }
};

// Lookup tables shared by the oracle functions.
class Facts {
 public:
  explicit Facts(const ingest::Dataset& ds) : ds_(ds), idx_(ds) {
    for (const auto& r : ds.racks) rack_system_[r.id] = r.system_id;
    for (const auto& n : ds.compute_nodes) {
      node_rack_[n.id] = n.rack_id;
      system_nodes_[rack_system_.at(n.rack_id)].push_back(&n);
    }
    for (const auto& s : ds.sensors) sensor_type_[{s.node_id, s.name}] = s.type;
    for (const auto& m : ds.job_metrics) metrics_[m.job_id].push_back(&m);
  }

  const ingest::Dataset& ds() const { return ds_; }
  const ingest::DatasetIndex& idx() const { return idx_; }
  std::int64_t system_of_rack(std::int64_t rack) const { return rack_system_.at(rack); }
  std::int64_t rack_of_node(std::int64_t node) const { return node_rack_.at(node); }
  std::int64_t system_of_node(std::int64_t node) const { return system_of_rack(rack_of_node(node)); }
  std::int64_t dc_of_system(std::int64_t sys) const { return idx_.system(sys)->dc_id; }
  std::int64_t system_of_user(std::int64_t user) const { return idx_.user(user)->system_id; }

  const std::vector<const ingest::ComputeNode*>& nodes_of_system(std::int64_t sys) const {
    static const std::vector<const ingest::ComputeNode*> kNone;
    const auto it = system_nodes_.find(sys);
    return it == system_nodes_.end() ? kNone : it->second;
  }
  std::string sensor_type(std::int64_t node, const std::string& name) const {
    const auto it = sensor_type_.find({node, name});
    return it == sensor_type_.end() ? std::string() : it->second;
  }
  std::optional<double> metric(std::int64_t job, const std::string& name) const {
    const auto it = metrics_.find(job);
    if (it == metrics_.end()) return std::nullopt;
    for (const auto* m : it->second)
      if (m->name == name) return m->value;
    return std::nullopt;
  }
  const std::vector<const ingest::JobMetric*>& metrics(std::int64_t job) const {
    static const std::vector<const ingest::JobMetric*> kNone;
    const auto it = metrics_.find(job);
    return it == metrics_.end() ? kNone : it->second;
  }

 private:
  const ingest::Dataset& ds_;
  ingest::DatasetIndex idx_;
  std::unordered_map<std::int64_t, std::int64_t> rack_system_;
  std::unordered_map<std::int64_t, std::int64_t> node_rack_;
  std::unordered_map<std::int64_t, std::vector<const ingest::ComputeNode*>> system_nodes_;
  std::map<std::pair<std::int64_t, std::string>, std::string> sensor_type_;
  std::unordered_map<std::int64_t, std::vector<const ingest::JobMetric*>> metrics_;
};

using Fn = std::function<Expected(const Facts&, const Params&)>;

inline Cell num(double v) { return Cell::number(v); }
inline Cell num(std::int64_t v) { return Cell::number(static_cast<double>(v)); }
inline Cell txt(std::string s) { return Cell::text_of(std::move(s)); }

inline std::int64_t dist2(const ingest::ComputeNode& a, std::int64_t x, std::int64_t y, std::int64_t z) {
  return (a.pos_x - x) * (a.pos_x - x) + (a.pos_y - y) * (a.pos_y - y) + (a.pos_z - z) * (a.pos_z - z);
}

template <class Key>
Table sorted_rows(std::vector<std::pair<Key, Row>> keyed) {
  std::stable_sort(keyed.begin(), keyed.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  Table out;
  for (auto& k : keyed) out.push_back(std::move(k.second));
  return out;
}

inline const std::map<std::string, Fn>& registry() {
  static const std::map<std::string, Fn> kFns = [] {
    std::map<std::string, Fn> m;

    // --- topology
    m["C1.1"] = [](const Facts& f, const Params& p) {
      Expected e;
      for (const auto& s : f.ds().hpc_systems)
        if (s.dc_id == p.integer("dc_id")) e.rows.push_back({num(s.id), txt(s.name)});
      return e;
    };
    m["C1.2"] = [](const Facts& f, const Params& p) {
      std::vector<std::pair<std::int64_t, Row>> rows;
      for (const auto& n : f.ds().compute_nodes)
        if (f.dc_of_system(f.system_of_node(n.id)) == p.integer("dc_id"))
          rows.push_back({n.id, {num(n.id), num(n.pos_x), num(n.pos_y), num(n.pos_z)}});
      return Expected{sorted_rows(std::move(rows)), true};
    };
    m["C1.3"] = [](const Facts& f, const Params& p) {
      Expected e;
      for (const auto& n : f.ds().compute_nodes)
        if (n.rack_id == p.integer("rack_id") && f.system_of_rack(n.rack_id) == p.integer("system_id"))
          e.rows.push_back({num(n.id)});
      return e;
    };
    m["C1.4"] = [](const Facts& f, const Params& p) {
      Expected e;
      for (const auto& s : f.ds().sensors)
        if (s.node_id == p.integer("node_id")) e.rows.push_back({txt(s.name), txt(s.type), txt(s.unit)});
      return e;
    };
    m["C1.5"] = [](const Facts& f, const Params& p) {
      Expected e;
      const auto* me = f.idx().node(p.integer("node_id"));
      if (!me) return e;
      for (const auto* n : f.nodes_of_system(f.system_of_node(me->id)))
        if (n->id != me->id && dist2(*n, me->pos_x, me->pos_y, me->pos_z) <= p.integer("radius2"))
          e.rows.push_back({num(n->id)});
      return e;
    };
    m["C1.6"] = [](const Facts& f, const Params& p) {
      Expected e;
      for (const auto* n : f.nodes_of_system(p.integer("system_id")))
        if (dist2(*n, p.integer("pos_x"), p.integer("pos_y"), p.integer("pos_z")) <= p.integer("radius2"))
          e.rows.push_back({num(n->id)});
      return e;
    };

    // --- sensors and readings
    m["C2.1"] = [](const Facts& f, const Params& p) {
      Stats s;
      for (const auto& r : f.ds().readings)
        if (r.node_id == p.integer("node_id") && r.sensor_name == p.str("sensor") && r.ts >= p.integer("t1") &&
            r.ts < p.integer("t2"))
          s.add(r.value);
      return Expected{{s.max_min_avg()}, false};
    };
    m["C2.2"] = [](const Facts& f, const Params& p) {
      Stats s;
      for (const auto& r : f.ds().readings)
        if (f.rack_of_node(r.node_id) == p.integer("rack_id") && r.sensor_name == p.str("sensor") &&
            r.ts >= p.integer("day_start") && r.ts < p.integer("now"))
          s.add(r.value);
      return Expected{{s.max_min_avg()}, false};
    };
    m["C2.3"] = [](const Facts& f, const Params& p) {
      Stats s;
      if (const auto* job = f.idx().job(p.integer("job_id"))) {
        const std::set<std::int64_t> nodes(job->node_ids.begin(), job->node_ids.end());
        for (const auto& r : f.ds().readings)
          if (nodes.count(r.node_id) && r.sensor_name == p.str("sensor") && r.ts >= job->start && r.ts <= job->end)
            s.add(r.value);
      }
      return Expected{{s.max_min_avg()}, false};
    };
    m["C2.4"] = [](const Facts& f, const Params& p) {
      std::vector<std::pair<std::tuple<std::int64_t, std::string, std::int64_t>, Row>> rows;
      for (const auto& r : f.ds().readings)
        if (r.ts >= p.integer("hour_start") && r.ts < p.integer("now") && r.value > p.num("threshold"))
          rows.push_back({{r.node_id, r.sensor_name, r.ts}, {num(r.node_id), txt(r.sensor_name), num(r.ts), num(r.value)}});
      return Expected{sorted_rows(std::move(rows)), true};
    };
    m["C2.5"] = [](const Facts& f, const Params& p) {
      std::vector<const ingest::Reading*> temps;
      for (const auto& r : f.ds().readings)
        if (f.sensor_type(r.node_id, r.sensor_name) == "temperature" && r.ts >= p.integer("week_start") &&
            r.ts < p.integer("now"))
          temps.push_back(&r);
      double sum = 0, sumsq = 0;
      for (const auto* r : temps) {
        sum += r->value;
        sumsq += r->value * r->value;
      }
      const double n = static_cast<double>(temps.size());
      const double mean = temps.empty() ? 0.0 : sum / n;
      const double var = temps.empty() ? 0.0 : sumsq / n - mean * mean;
      std::set<std::int64_t> hot;
      for (const auto* r : temps)
        if (r->value > mean && (r->value - mean) * (r->value - mean) > 4 * var) hot.insert(r->node_id);
      Expected e;
      e.ordered = true;
      for (const auto id : hot) e.rows.push_back({num(id)});
      return e;
    };
    m["C2.6"] = [](const Facts& f, const Params& p) {
      Stats s;
      for (const auto& r : f.ds().readings)
        if (r.node_id == p.integer("node_id") && f.sensor_type(r.node_id, r.sensor_name) == "temperature" &&
            r.ts >= p.integer("month_start") && r.ts < p.integer("month_end"))
          s.add(r.value);
      return Expected{{{num(s.avg())}}, false};
    };
    m["C2.7"] = [](const Facts& f, const Params& p) {
      std::map<std::int64_t, Stats> per_node;
      for (const auto& r : f.ds().readings)
        if (r.sensor_name == "cpu_util" && r.ts >= p.integer("last24_start") && r.ts < p.integer("now"))
          per_node[r.node_id].add(r.value);
      Expected e;
      e.ordered = true;
      for (const auto& [id, s] : per_node) e.rows.push_back({num(id), num(s.avg())});
      return e;
    };
    m["C2.8"] = [](const Facts& f, const Params& p) {
      Expected e;
      for (const auto& r : f.ds().readings)
        if (r.node_id == p.integer("node_id") && r.sensor_name == "total_power" && r.ts == p.integer("at_time"))
          e.rows.push_back({num(r.value)});
      return e;
    };

    // --- jobs
    m["C3.1"] = [](const Facts& f, const Params& p) {
      Expected e;
      for (const auto* mt : f.metrics(p.integer("job_id")))
        if (mt->name == "power" || mt->name == "energy") e.rows.push_back({txt(mt->name), num(mt->value)});
      return e;
    };
    m["C3.2"] = [](const Facts& f, const Params& p) {
      Expected e;
      e.ordered = true;
      if (const auto* job = f.idx().job(p.integer("job_id"))) {
        std::set<std::int64_t> nodes(job->node_ids.begin(), job->node_ids.end());
        for (const auto n : nodes) e.rows.push_back({num(n)});
      }
      return e;
    };
    m["C3.3"] = [](const Facts& f, const Params& p) {
      std::vector<std::pair<std::int64_t, Row>> rows;
      for (const auto& j : f.ds().jobs)
        if (j.start < p.integer("t2") && j.end > p.integer("t1"))
          rows.push_back({j.id, {num(j.id), num(j.start), num(j.end)}});
      return Expected{sorted_rows(std::move(rows)), true};
    };
    m["C3.4"] = [](const Facts& f, const Params& p) {
      std::vector<std::pair<std::int64_t, Row>> rows;
      for (const auto& j : f.ds().jobs) {
        const std::set<std::int64_t> mine(j.node_ids.begin(), j.node_ids.end());
        const auto total = static_cast<std::int64_t>(f.nodes_of_system(f.system_of_user(j.user_id)).size());
        const auto used = static_cast<std::int64_t>(mine.size());
        if (used == 0 || total == 0) continue;
        if (used * 100 >= p.integer("large_pct") * total) rows.push_back({j.id, {num(j.id), num(used), num(total)}});
      }
      return Expected{sorted_rows(std::move(rows)), true};
    };
    m["C3.5"] = [](const Facts& f, const Params& p) {
      Expected e;
      if (const auto* j = f.idx().job(p.integer("job_id")))
        e.rows.push_back({txt(time::format_duration_seconds(j->end - j->start)), num(j->end - j->start)});
      return e;
    };
    m["C3.6"] = [](const Facts& f, const Params& p) {
      std::vector<std::pair<std::int64_t, Row>> rows;
      for (const auto& j : f.ds().jobs) {
        const auto req = f.metric(j.id, "requested_walltime");
        if (j.exit_code == p.integer("walltime_exit") && req && static_cast<double>(j.end - j.start) >= *req)
          rows.push_back({j.id, {num(j.id), num(j.end - j.start), num(*req)}});
      }
      return Expected{sorted_rows(std::move(rows)), true};
    };
    m["C3.7"] = [](const Facts& f, const Params& p) {
      std::vector<std::pair<std::int64_t, Row>> rows;
      for (const auto& j : f.ds().jobs)
        if (const auto ai = f.metric(j.id, "arithmetic_intensity"))
          rows.push_back({j.id, {num(j.id), num(*ai), Cell::boolean(*ai < p.num("ai_threshold"))}});
      return Expected{sorted_rows(std::move(rows)), true};
    };
    m["C3.8"] = [](const Facts& f, const Params& p) {
      std::vector<std::pair<std::int64_t, Row>> rows;
      const double thr = p.num("ai_threshold");
      for (const auto& j : f.ds().jobs) {
        const auto freq = f.metric(j.id, "cpu_frequency");
        const auto ai = f.metric(j.id, "arithmetic_intensity");
        if (!freq || !ai) continue;
        if ((*freq == 2200 && *ai < thr) || (*freq == 2000 && *ai >= thr))
          rows.push_back({j.id, {num(j.id), num(*freq), num(*ai)}});
      }
      return Expected{sorted_rows(std::move(rows)), true};
    };
    m["C3.9"] = [](const Facts& f, const Params& p) {
      std::vector<std::pair<std::pair<std::int64_t, std::string>, Row>> rows;
      for (const auto& j : f.ds().jobs) {
        if (j.user_id != p.integer("user_id")) continue;
        for (const auto* mt : f.metrics(j.id))
          if (mt->name == "cpu_util" || mt->name == "gpu_util")
            rows.push_back({{j.id, mt->name}, {num(j.id), txt(mt->name), num(mt->value)}});
      }
      return Expected{sorted_rows(std::move(rows)), true};
    };

    // --- users
    m["C4.1"] = [](const Facts& f, const Params& p) {
      Expected e;
      if (const auto* j = f.idx().job(p.integer("job_id"))) {
        const auto* u = f.idx().user(j->user_id);
        e.rows.push_back({num(u->id), txt(u->name)});
      }
      return e;
    };
    auto distinct_users = [](const Facts& f, const std::function<bool(const ingest::Job&)>& pick) {
      std::set<std::int64_t> users;
      for (const auto& j : f.ds().jobs)
        if (pick(j)) users.insert(j.user_id);
      Expected e;
      e.ordered = true;
      for (const auto u : users) e.rows.push_back({num(u)});
      return e;
    };
    m["C4.2"] = [distinct_users](const Facts& f, const Params& p) {
      return distinct_users(f, [&](const ingest::Job& j) { return j.group_id == p.integer("group_id"); });
    };
    m["C4.3"] = [distinct_users](const Facts& f, const Params& p) {
      return distinct_users(f, [&](const ingest::Job& j) { return j.start >= p.integer("t1") && j.start < p.integer("t2"); });
    };
    m["C4.4"] = [](const Facts& f, const Params& p) {
      std::int64_t n = 0;
      for (const auto& j : f.ds().jobs)
        if (j.user_id == p.integer("user_id") && j.start >= p.integer("week_start") && j.start < p.integer("now")) ++n;
      return Expected{{{num(n)}}, false};
    };
    m["C4.5"] = [](const Facts& f, const Params& p) {
      std::map<std::int64_t, std::int64_t> counts;
      for (const auto& j : f.ds().jobs) {
        const auto ai = f.metric(j.id, "arithmetic_intensity");
        if (ai && *ai < p.num("ai_threshold")) ++counts[j.user_id];
      }
      std::vector<std::pair<std::pair<std::int64_t, std::int64_t>, Row>> rows;
      for (const auto& [u, n] : counts) rows.push_back({{-n, u}, {num(u), num(n)}});
      Table t = sorted_rows(std::move(rows));
      if (t.size() > static_cast<std::size_t>(p.integer("top"))) t.resize(static_cast<std::size_t>(p.integer("top")));
      return Expected{std::move(t), true};
    };
    m["C4.6"] = [distinct_users](const Facts& f, const Params& p) {
      return distinct_users(
          f, [&](const ingest::Job& j) { return f.dc_of_system(f.system_of_user(j.user_id)) == p.integer("dc_id"); });
    };

    // --- scheduling
    m["C5.1"] = [](const Facts& f, const Params&) {
      Stats s;
      for (const auto& mt : f.ds().job_metrics)
        if (mt.name == "wait_time") s.add(mt.value);
      return Expected{{{num(s.avg())}}, false};
    };
    m["C5.2"] = [](const Facts& f, const Params& p) {
      std::vector<std::pair<std::int64_t, Row>> rows;
      for (const auto& mt : f.ds().job_metrics)
        if (mt.name == "wait_time" && mt.value > p.num("wait_hours") * 3600)
          rows.push_back({mt.job_id, {num(mt.job_id), num(mt.value)}});
      return Expected{sorted_rows(std::move(rows)), true};
    };

    // --- cross-system
    m["C6.1"] = [](const Facts& f, const Params&) {
      std::map<std::string, std::int64_t> counts;
      for (const auto& j : f.ds().jobs) ++counts[f.idx().data_center(f.dc_of_system(f.system_of_user(j.user_id)))->name];
      std::vector<std::pair<std::pair<std::int64_t, std::string>, Row>> rows;
      for (const auto& [name, n] : counts) rows.push_back({{-n, name}, {txt(name), num(n)}});
      return Expected{sorted_rows(std::move(rows)), true};
    };
    m["C6.2"] = [](const Facts& f, const Params&) {
      std::map<std::pair<std::string, std::string>, std::int64_t> jobs;  // (system name, metric)
      std::map<std::string, std::set<std::int64_t>> systems;           // metric -> system ids
      for (const auto& j : f.ds().jobs) {
        const auto sys = f.system_of_user(j.user_id);
        for (const auto* mt : f.metrics(j.id)) {
          ++jobs[{f.idx().system(sys)->name, mt->name}];
          systems[mt->name].insert(sys);
        }
      }
      Expected e;
      for (const auto& [key, n] : jobs)
        if (systems[key.second].size() == 1) e.rows.push_back({txt(key.first), txt(key.second), num(n)});
      return e;
    };
    m["C6.3"] = [](const Facts& f, const Params&) {
      // One sample per (job, node) pair, as the pattern join produces.
      std::map<std::int64_t, Stats> per_system;
      for (const auto& j : f.ds().jobs) {
        const std::set<std::int64_t> nodes(j.node_ids.begin(), j.node_ids.end());
        for (const auto n : nodes) per_system[f.system_of_node(n)].add(static_cast<double>(j.end - j.start));
      }
      std::vector<std::pair<std::string, Row>> rows;
      for (const auto& [sys, s] : per_system)
        rows.push_back({kg::uri::system(sys), {txt(kg::uri::system(sys)), txt(f.idx().system(sys)->name), num(s.avg())}});
      return Expected{sorted_rows(std::move(rows)), true};
    };
    m["C6.4"] = [](const Facts& f, const Params&) {
      std::map<std::string, Stats> per_system;
      for (const auto& j : f.ds().jobs)
        if (const auto en = f.metric(j.id, "energy"))
          per_system[f.idx().system(f.system_of_user(j.user_id))->name].add(*en);
      std::vector<std::pair<std::pair<double, std::string>, Row>> rows;
      for (const auto& [name, s] : per_system) rows.push_back({{s.avg(), name}, {txt(name), num(s.avg())}});
      return Expected{sorted_rows(std::move(rows)), true};
    };
    m["C6.5"] = [](const Facts& f, const Params& p) {
      std::map<std::int64_t, double> totals;
      for (const auto& r : f.ds().readings)
        if (r.sensor_name == "total_power" && f.system_of_node(r.node_id) == p.integer("system_id"))
          totals[r.ts] += r.value;
      std::vector<std::pair<std::pair<double, std::int64_t>, Row>> rows;
      for (const auto& [ts, v] : totals) rows.push_back({{v, ts}, {num(ts), num(v)}});
      Table t = sorted_rows(std::move(rows));
      if (t.size() > static_cast<std::size_t>(p.integer("top"))) t.resize(static_cast<std::size_t>(p.integer("top")));
      return Expected{std::move(t), true};
    };
    return m;
  }();
  return kFns;
}

}  // namespace oracle

inline Expected oracle_answer(const std::string& id, const ingest::Dataset& ds, const Params& params) {
  const auto& reg = oracle::registry();
  const auto it = reg.find(id);
  if (it == reg.end()) throw Error("no oracle for question " + id);
  const oracle::Facts facts(ds);
  return it->second(facts, params);
}

}  // namespace hpcoda::bench
