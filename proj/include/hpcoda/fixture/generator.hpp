#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "hpcoda/common/error.hpp"
#include "hpcoda/ingest/dataset.hpp"
#include "hpcoda/ingest/loader.hpp"

namespace hpcoda::fixture {

struct FixtureParams {
  std::uint64_t seed = 1;
  std::int64_t data_centers = 1;
  std::int64_t systems_per_dc = 1;
  std::int64_t racks_per_system = 1;
  std::int64_t nodes_per_rack = 1;
  std::int64_t sensors_per_node = 1;
  std::int64_t sampling_interval = 20;  // seconds
  std::int64_t duration = 86'400;       // seconds
  std::int64_t users_per_system = 0;
  std::int64_t jobs_per_system = 0;
  std::int64_t metrics_per_job = 0;
  // Alternate systems between the sensor-centric and job-centric metric sets.
  bool job_centric = false;
  std::int64_t start_time = 1'643'673'600;  // 2022-02-01T00:00:00Z
  std::int64_t max_readings = 50'000'000;
  // false: topology, users and jobs only (used for closed-form counts).
  bool with_readings = true;

  std::int64_t systems_total() const { return data_centers * systems_per_dc; }
  std::int64_t nodes_total() const { return systems_total() * racks_per_system * nodes_per_rack; }
  std::int64_t samples_per_stream() const { return duration / sampling_interval; }
  std::int64_t projected_readings() const { return nodes_total() * sensors_per_node * samples_per_stream(); }

  void check() const {
    for (auto v : {data_centers, systems_per_dc, racks_per_system, nodes_per_rack, sensors_per_node, duration,
                   users_per_system, jobs_per_system, metrics_per_job}) {
      if (v < 0) throw std::invalid_argument("fixture parameters must be non-negative");
    }
    if (sampling_interval <= 0) throw std::invalid_argument("sampling_interval must be positive");
    if (jobs_per_system > 0 && users_per_system == 0) throw std::invalid_argument("jobs need at least one user per system");
  }
};

struct SensorKind {
  std::string_view name;
  std::string_view type;
  std::string_view unit;
};

// The first entries are named; further sensors get generic names cycling
// through the three types.
inline SensorKind sensor_kind(std::int64_t index, std::string& name_storage) {
  static constexpr std::array<SensorKind, 6> kNamed{{
      {"total_power", "power", "W"},
      {"ambient_temp", "temperature", "C"},
      {"cpu_util", "utilization", "%"},
      {"gpu_util", "utilization", "%"},
      {"cpu_temp", "temperature", "C"},
      {"gpu_power", "power", "W"},
  }};
  if (index < static_cast<std::int64_t>(kNamed.size())) return kNamed[static_cast<std::size_t>(index)];
  static constexpr std::array<SensorKind, 3> kGeneric{{
      {"", "power", "W"},
      {"", "temperature", "C"},
      {"", "utilization", "%"},
  }};
  name_storage = "sensor_" + std::to_string(index);
  const auto& g = kGeneric[static_cast<std::size_t>(index % 3)];
  return {name_storage, g.type, g.unit};
}

enum class SystemFlavor { SensorCentric, JobCentric };

inline std::vector<std::string_view> metric_catalog(SystemFlavor flavor) {
  std::vector<std::string_view> out{"energy",   "power",   "wait_time", "requested_walltime", "arithmetic_intensity",
                                    "cpu_frequency", "cpu_util", "gpu_util"};
  if (flavor == SystemFlavor::SensorCentric) {
    out.insert(out.end(), {"num_cores", "num_gpus"});
  } else {
    out.insert(out.end(), {"cycles", "mem_read_bytes", "mem_write_bytes"});
  }
  return out;
}

inline constexpr std::int64_t kWalltimeExitCode = 140;

namespace detail {

inline std::uint64_t splitmix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Counter-based stream: each draw is a pure function of (seed, keys).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : seed_(splitmix(seed)) {}

  std::uint64_t bits(std::uint64_t a, std::uint64_t b = 0, std::uint64_t c = 0, std::uint64_t d = 0) const {
    std::uint64_t h = splitmix(seed_ ^ a);
    h = splitmix(h ^ b);
    h = splitmix(h ^ c);
    return splitmix(h ^ d);
  }
  double unit(std::uint64_t a, std::uint64_t b = 0, std::uint64_t c = 0, std::uint64_t d = 0) const {
    return static_cast<double>(bits(a, b, c, d) >> 11) * 0x1.0p-53;
  }
  std::int64_t range(std::int64_t lo, std::int64_t hi, std::uint64_t a, std::uint64_t b = 0, std::uint64_t c = 0) const {
    if (hi <= lo) return lo;
    return lo + static_cast<std::int64_t>(bits(a, b, c) % static_cast<std::uint64_t>(hi - lo + 1));
  }
  // Multiples of 0.25 in [lo, hi): exact in binary, so sums and averages of
  // a few values carry no rounding noise.
  double quarter(double lo, double hi, std::uint64_t a, std::uint64_t b = 0, std::uint64_t c = 0,
                 std::uint64_t d = 0) const {
    return lo + std::floor(unit(a, b, c, d) * (hi - lo) * 4.0) / 4.0;
  }

 private:
  std::uint64_t seed_;
};

enum Stream : std::uint64_t { kReading = 1, kJobUser, kJobStart, kJobLength, kJobNodes, kJobExit, kJobWidth, kMetric, kExitPick, kHotNode, kSpike };

inline std::pair<double, double> value_range(std::string_view type) {
  if (type == "temperature") return {30.0, 90.0};
  if (type == "power") return {50.0, 2000.0};
  return {0.0, 100.0};
}

inline constexpr std::array<std::string_view, 4> kLocations{"Bologna", "Kobe", "Garching", "Barcelona"};

}  // namespace detail

inline ingest::Dataset generate(const FixtureParams& p) {
  p.check();
  if (p.with_readings && p.projected_readings() > p.max_readings) {
    throw DataError("fixture would contain " + std::to_string(p.projected_readings()) +
                    " readings, above the cap of " + std::to_string(p.max_readings));
  }
  const detail::Rng rng(p.seed);
  ingest::Dataset ds;

  std::int64_t system_id = 0, rack_id = 0, node_id = 0, user_id = 0, job_id = 0;
  std::vector<std::vector<std::int64_t>> nodes_of_system;
  std::vector<std::vector<std::int64_t>> users_of_system;
  std::vector<SystemFlavor> flavors;

  for (std::int64_t d = 1; d <= p.data_centers; ++d) {
    ds.data_centers.push_back({d, "DC" + std::to_string(d),
                               std::string(detail::kLocations[static_cast<std::size_t>(d - 1) % detail::kLocations.size()])});
    for (std::int64_t s = 0; s < p.systems_per_dc; ++s) {
      ++system_id;
      const auto flavor =
          p.job_centric && system_id % 2 == 0 ? SystemFlavor::JobCentric : SystemFlavor::SensorCentric;
      flavors.push_back(flavor);
      ds.hpc_systems.push_back({system_id, d, (flavor == SystemFlavor::JobCentric ? "fugaku" : "marconi") +
                                                  std::to_string(system_id)});
      nodes_of_system.emplace_back();
      users_of_system.emplace_back();
      for (std::int64_t r = 0; r < p.racks_per_system; ++r) {
        ++rack_id;
        ds.racks.push_back({rack_id, system_id});
        for (std::int64_t n = 0; n < p.nodes_per_rack; ++n) {
          ++node_id;
          ds.compute_nodes.push_back({node_id, rack_id, r, n % 4, n / 4});
          nodes_of_system.back().push_back(node_id);
          ds.plugins.push_back({node_id, "ipmi"});
          for (std::int64_t k = 0; k < p.sensors_per_node; ++k) {
            std::string storage;
            const auto kind = sensor_kind(k, storage);
            ds.sensors.push_back({node_id, "ipmi", std::string(kind.name), std::string(kind.type), std::string(kind.unit)});
          }
        }
      }
      for (std::int64_t u = 0; u < p.users_per_system; ++u) {
        ++user_id;
        ds.users.push_back({user_id, system_id, "user" + std::to_string(user_id)});
        users_of_system.back().push_back(user_id);
      }
    }
  }

  // Jobs.
  const std::int64_t window_end = p.start_time + p.duration;
  for (std::size_t si = 0; si < nodes_of_system.size(); ++si) {
    const auto& nodes = nodes_of_system[si];
    const auto& users = users_of_system[si];
    const auto catalog = metric_catalog(flavors[si]);
    for (std::int64_t j = 0; j < p.jobs_per_system; ++j) {
      ++job_id;
      const auto key = static_cast<std::uint64_t>(job_id);
      ingest::Job job;
      job.id = job_id;
      job.user_id = users[static_cast<std::size_t>(rng.range(0, static_cast<std::int64_t>(users.size()) - 1, detail::kJobUser, key))];
      job.group_id = 100 + job.user_id % 3;
      job.name = "job" + std::to_string(job_id);
      const bool ok = rng.unit(detail::kJobExit, key) < 0.9;
      static constexpr std::array<std::int64_t, 3> kFailures{1, 137, kWalltimeExitCode};
      job.exit_code = ok ? 0 : kFailures[static_cast<std::size_t>(rng.range(0, 2, detail::kExitPick, key))];
      job.start = p.start_time + (p.duration > 0 ? rng.range(0, p.duration - 1, detail::kJobStart, key) : 0);
      const std::int64_t length = rng.range(60, 6 * 3600, detail::kJobLength, key);
      job.end = std::min(job.start + length, window_end);
      if (!nodes.empty()) {
        const auto total = static_cast<std::int64_t>(nodes.size());
        const std::int64_t width = rng.range(1, std::max<std::int64_t>(1, total / 2), detail::kJobWidth, key);
        const std::int64_t first = rng.range(0, total - width, detail::kJobNodes, key);
        for (std::int64_t i = 0; i < width; ++i) job.node_ids.push_back(nodes[static_cast<std::size_t>(first + i)]);
      }
      const std::int64_t duration = job.end - job.start;
      const auto count = std::min<std::int64_t>(p.metrics_per_job, static_cast<std::int64_t>(catalog.size()));
      for (std::int64_t m = 0; m < count; ++m) {
        const auto name = catalog[static_cast<std::size_t>(m)];
        const auto mk = static_cast<std::uint64_t>(m);
        double v = 0.0;
        if (name == "energy") {
          v = rng.quarter(10.0, 50'000.0, detail::kMetric, key, mk);
        } else if (name == "power") {
          v = rng.quarter(50.0, 2000.0, detail::kMetric, key, mk);
        } else if (name == "wait_time") {
          v = static_cast<double>(rng.range(0, 5 * 3600, detail::kMetric, key, mk));
        } else if (name == "requested_walltime") {
          v = static_cast<double>(job.exit_code == kWalltimeExitCode
                                      ? duration
                                      : duration + rng.range(60, 3600, detail::kMetric, key, mk));
        } else if (name == "arithmetic_intensity") {
          v = rng.quarter(0.25, 4.0, detail::kMetric, key, mk);
        } else if (name == "cpu_frequency") {
          v = rng.unit(detail::kMetric, key, mk) < 0.5 ? 2000.0 : 2200.0;
        } else if (name == "cpu_util" || name == "gpu_util") {
          v = rng.quarter(0.0, 100.0, detail::kMetric, key, mk);
        } else if (name == "num_cores") {
          v = static_cast<double>(32 * job.node_ids.size());
        } else if (name == "num_gpus") {
          v = static_cast<double>(4 * job.node_ids.size());
        } else {
          v = rng.quarter(1000.0, 100'000.0, detail::kMetric, key, mk);
        }
        ds.job_metrics.push_back({job_id, std::string(name), v});
      }
      ds.jobs.push_back(std::move(job));
    }
  }

  if (!p.with_readings) return ds;
  // Readings: per node, per sensor, per aligned sample.
  ds.readings.reserve(static_cast<std::size_t>(p.projected_readings()));
  const std::int64_t samples = p.samples_per_stream();
  std::size_t sensor_index = 0;
  for (const auto& node : ds.compute_nodes) {
    for (std::int64_t k = 0; k < p.sensors_per_node; ++k, ++sensor_index) {
      const auto& sensor = ds.sensors[sensor_index];
      const bool temperature = sensor.type == "temperature";
      const auto [lo, hi] = detail::value_range(sensor.type);
      const auto nk = static_cast<std::uint64_t>(node.id);
      const auto sk = static_cast<std::uint64_t>(k);
      // Roughly a third of the nodes run hot now and then.
      const bool hot_node = rng.unit(detail::kHotNode, nk) < 0.3;
      for (std::int64_t i = 0; i < samples; ++i) {
        const std::int64_t ts = p.start_time + i * p.sampling_interval;
        const auto tk = static_cast<std::uint64_t>(ts);
        double v = 0;
        if (temperature) {
          // Mostly nominal, with rare spikes well above mean + 2 sigma.
          const bool spike = hot_node && rng.unit(detail::kSpike, nk, sk, tk) < 0.05;
          v = spike ? rng.quarter(75.0, 90.0, detail::kReading, nk, sk, tk)
                    : rng.quarter(30.0, 55.0, detail::kReading, nk, sk, tk);
        } else {
          v = rng.quarter(lo, hi, detail::kReading, nk, sk, tk);
        }
        ds.readings.push_back({node.id, sensor.name, ts, v});
      }
    }
  }
  return ds;
}

inline std::vector<std::filesystem::path> write_fixture(const ingest::Dataset& ds, const std::filesystem::path& dir) {
  return ingest::write_dataset(ds, dir);
}

}  // namespace hpcoda::fixture
