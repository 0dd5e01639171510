#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "hpcoda/common/error.hpp"

namespace hpcoda::ingest {

struct DataCenter {
  std::int64_t id = 0;
  std::string name;
  std::string location;
  friend bool operator==(const DataCenter&, const DataCenter&) = default;
};

struct HpcSystem {
  std::int64_t id = 0;
  std::int64_t dc_id = 0;
  std::string name;
  friend bool operator==(const HpcSystem&, const HpcSystem&) = default;
};

struct Rack {
  std::int64_t id = 0;
  std::int64_t system_id = 0;
  friend bool operator==(const Rack&, const Rack&) = default;
};

struct ComputeNode {
  std::int64_t id = 0;
  std::int64_t rack_id = 0;
  std::int64_t pos_x = 0;
  std::int64_t pos_y = 0;
  std::int64_t pos_z = 0;
  friend bool operator==(const ComputeNode&, const ComputeNode&) = default;
};

struct Plugin {
  std::int64_t node_id = 0;
  std::string name;
  friend bool operator==(const Plugin&, const Plugin&) = default;
};

struct Sensor {
  std::int64_t node_id = 0;
  std::string plugin_name;
  std::string name;
  std::string type;
  std::string unit;
  friend bool operator==(const Sensor&, const Sensor&) = default;
};

struct User {
  std::int64_t id = 0;
  std::int64_t system_id = 0;
  std::string name;
  friend bool operator==(const User&, const User&) = default;
};

struct Job {
  std::int64_t id = 0;
  std::int64_t user_id = 0;
  std::int64_t group_id = 0;
  std::string name;
  std::int64_t exit_code = 0;
  std::int64_t start = 0;
  std::int64_t end = 0;
  std::vector<std::int64_t> node_ids;
  friend bool operator==(const Job&, const Job&) = default;
};

struct JobMetric {
  std::int64_t job_id = 0;
  std::string name;
  double value = 0.0;
  friend bool operator==(const JobMetric&, const JobMetric&) = default;
};

struct Reading {
  std::int64_t node_id = 0;
  std::string sensor_name;
  std::int64_t ts = 0;
  double value = 0.0;
  friend bool operator==(const Reading&, const Reading&) = default;
};

struct Dataset {
  std::vector<DataCenter> data_centers;
  std::vector<HpcSystem> hpc_systems;
  std::vector<Rack> racks;
  std::vector<ComputeNode> compute_nodes;
  std::vector<Plugin> plugins;
  std::vector<Sensor> sensors;
  std::vector<User> users;
  std::vector<Job> jobs;
  std::vector<JobMetric> job_metrics;
  std::vector<Reading> readings;
  friend bool operator==(const Dataset&, const Dataset&) = default;
};

// Key lookups over a Dataset. Holds indexes into the dataset's vectors, so
// the dataset must outlive it and stay unmodified.
class DatasetIndex {
 public:
  explicit DatasetIndex(const Dataset& ds) : ds_(&ds) {
    for (std::size_t i = 0; i < ds.data_centers.size(); ++i) dcs_.emplace(ds.data_centers[i].id, i);
    for (std::size_t i = 0; i < ds.hpc_systems.size(); ++i) systems_.emplace(ds.hpc_systems[i].id, i);
    for (std::size_t i = 0; i < ds.racks.size(); ++i) racks_.emplace(ds.racks[i].id, i);
    for (std::size_t i = 0; i < ds.compute_nodes.size(); ++i) nodes_.emplace(ds.compute_nodes[i].id, i);
    for (std::size_t i = 0; i < ds.plugins.size(); ++i) plugins_.emplace(std::pair{ds.plugins[i].node_id, ds.plugins[i].name}, i);
    for (std::size_t i = 0; i < ds.sensors.size(); ++i) {
      const auto& s = ds.sensors[i];
      sensors_.emplace(std::pair{s.node_id, s.name}, i);
      sensor_ordinal_.emplace(std::pair{s.node_id, s.name}, sensors_per_node_[s.node_id]++);
    }
    for (std::size_t i = 0; i < ds.users.size(); ++i) users_.emplace(ds.users[i].id, i);
    for (std::size_t i = 0; i < ds.jobs.size(); ++i) jobs_.emplace(ds.jobs[i].id, i);
  }

  const Dataset& dataset() const { return *ds_; }

  const DataCenter* data_center(std::int64_t id) const { return find(dcs_, id, ds_->data_centers); }
  const HpcSystem* system(std::int64_t id) const { return find(systems_, id, ds_->hpc_systems); }
  const Rack* rack(std::int64_t id) const { return find(racks_, id, ds_->racks); }
  const ComputeNode* node(std::int64_t id) const { return find(nodes_, id, ds_->compute_nodes); }
  const User* user(std::int64_t id) const { return find(users_, id, ds_->users); }
  const Job* job(std::int64_t id) const { return find(jobs_, id, ds_->jobs); }
  const Plugin* plugin(std::int64_t node_id, const std::string& name) const {
    const auto it = plugins_.find({node_id, name});
    return it == plugins_.end() ? nullptr : &ds_->plugins[it->second];
  }
  const Sensor* sensor(std::int64_t node_id, const std::string& name) const {
    const auto it = sensors_.find({node_id, name});
    return it == sensors_.end() ? nullptr : &ds_->sensors[it->second];
  }
  // Position of the sensor among its node's sensors, in file order.
  std::int64_t sensor_ordinal(std::int64_t node_id, const std::string& name) const {
    const auto it = sensor_ordinal_.find({node_id, name});
    if (it == sensor_ordinal_.end())
      throw DataError("unknown sensor '" + name + "' on node " + std::to_string(node_id));
    return it->second;
  }

  // System that a node belongs to, or nullptr if the chain is broken.
  const HpcSystem* system_of_node(std::int64_t node_id) const {
    const auto* n = node(node_id);
    if (!n) return nullptr;
    const auto* r = rack(n->rack_id);
    return r ? system(r->system_id) : nullptr;
  }

 private:
  template <class T>
  static const T* find(const std::unordered_map<std::int64_t, std::size_t>& m, std::int64_t id,
                       const std::vector<T>& v) {
    const auto it = m.find(id);
    return it == m.end() ? nullptr : &v[it->second];
  }

  const Dataset* ds_;
  std::unordered_map<std::int64_t, std::size_t> dcs_, systems_, racks_, nodes_, users_, jobs_;
  std::map<std::pair<std::int64_t, std::string>, std::size_t> plugins_, sensors_;
  std::map<std::pair<std::int64_t, std::string>, std::int64_t> sensor_ordinal_;
  std::unordered_map<std::int64_t, std::int64_t> sensors_per_node_;
};

}  // namespace hpcoda::ingest
