#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hpcoda/common/error.hpp"
#include "hpcoda/rdf/term.hpp"

namespace hpcoda::ontology {

using rdf::Datatype;

struct ClassDef {
  std::string name;
  std::string description;
};

struct ObjectPropertyDef {
  std::string name;
  std::string domain;
  std::string range;
  std::optional<std::string> inverse_of;
  std::string description;
};

struct DataPropertyDef {
  std::string name;
  std::string domain;
  Datatype range = Datatype::String;
  // Extra lexical encoding accepted by the validator (timestamp: Unix integer).
  std::optional<Datatype> alternate_range;
  std::string description;
};

class OntologySchema {
 public:
  std::vector<ClassDef> classes;
  std::vector<ObjectPropertyDef> object_properties;
  std::vector<DataPropertyDef> data_properties;

  const ClassDef* find_class(std::string_view name) const {
    for (const auto& c : classes)
      if (c.name == name) return &c;
    return nullptr;
  }
  const ObjectPropertyDef* find_object_property(std::string_view name) const {
    for (const auto& p : object_properties)
      if (p.name == name) return &p;
    return nullptr;
  }
  const DataPropertyDef* find_data_property(std::string_view name) const {
    for (const auto& p : data_properties)
      if (p.name == name) return &p;
    return nullptr;
  }

  std::size_t declaration_count() const {
    return classes.size() + object_properties.size() + data_properties.size();
  }
  std::size_t inverse_count() const {
    return static_cast<std::size_t>(std::count_if(object_properties.begin(), object_properties.end(),
                                                  [](const auto& p) { return p.inverse_of.has_value(); }));
  }
  // Domain + range per property, plus inverse-of statements.
  std::size_t logical_axiom_count() const {
    return 2 * object_properties.size() + 2 * data_properties.size() + inverse_count();
  }
  std::size_t total_axiom_count() const { return declaration_count() + logical_axiom_count(); }

  // Throws if any domain, range or inverse reference does not resolve, or a
  // name is declared twice.
  void check() const {
    std::vector<std::string> names;
    for (const auto& c : classes) names.push_back(c.name);
    for (const auto& p : object_properties) names.push_back(p.name);
    for (const auto& p : data_properties) names.push_back(p.name);
    std::sort(names.begin(), names.end());
    if (const auto dup = std::adjacent_find(names.begin(), names.end()); dup != names.end())
      throw ValidationError("schema declares '" + *dup + "' twice");
    for (const auto& p : object_properties) {
      if (!find_class(p.domain)) throw ValidationError(p.name + ": unknown domain class " + p.domain);
      if (!find_class(p.range)) throw ValidationError(p.name + ": unknown range class " + p.range);
      if (p.inverse_of && !find_object_property(*p.inverse_of))
        throw ValidationError(p.name + ": unknown inverse " + *p.inverse_of);
    }
    for (const auto& p : data_properties) {
      if (!find_class(p.domain)) throw ValidationError(p.name + ": unknown domain class " + p.domain);
    }
  }
};

inline std::string entity_iri(std::string_view local) { return rdf::vocab::hpc(local); }

inline OntologySchema builtin_schema() {
  OntologySchema s;
  s.classes = {
      {"DataCenter", "A facility that hosts HPC infrastructure."},
      {"HPCSystem", "A complete HPC system made of racks, compute nodes and supporting hardware."},
      {"User", "A person who submits jobs to an HPC system."},
      {"Job", "A unit of computational work submitted to an HPC system."},
      {"JobMetric", "A measured or requested quantity attached to a job."},
      {"Rack", "A physical enclosure holding compute nodes."},
      {"ComputeNode", "A single compute node of an HPC system."},
      {"Position", "Three-dimensional placement of a compute node."},
      {"Plugin", "A software monitoring component that exposes sensors."},
      {"Sensor", "A physical or virtual device producing monitoring data."},
      {"SensorReading", "One value produced by a sensor at one instant."},
      {"Time", "A point in time referenced by readings and jobs."},
  };
  s.object_properties = {
      {"hasHPCSystem", "DataCenter", "HPCSystem", std::nullopt, "Data center to the HPC systems it hosts."},
      {"isHPCSystemOf", "HPCSystem", "DataCenter", "hasHPCSystem", "Inverse of hasHPCSystem."},
      {"hasUser", "HPCSystem", "User", std::nullopt, "HPC system to its users."},
      {"isUserOf", "User", "HPCSystem", "hasUser", "Inverse of hasUser."},
      {"hasRack", "HPCSystem", "Rack", std::nullopt, "HPC system to its racks."},
      {"isRackOf", "Rack", "HPCSystem", "hasRack", "Inverse of hasRack."},
      {"hasComputeNode", "Rack", "ComputeNode", std::nullopt, "Rack to the compute nodes it holds."},
      {"isComputeNodeOf", "ComputeNode", "Rack", "hasComputeNode", "Inverse of hasComputeNode."},
      {"hasPosition", "ComputeNode", "Position", std::nullopt, "Compute node to its physical position."},
      {"isPositionOf", "Position", "ComputeNode", "hasPosition", "Inverse of hasPosition."},
      {"isJobOf", "Job", "User", std::nullopt, "Job to the user who submitted it."},
      {"submitsJob", "User", "Job", "isJobOf", "Inverse of isJobOf."},
      {"usesComputeNode", "Job", "ComputeNode", std::nullopt, "Job to each compute node it ran on."},
      {"hasJobStartTime", "Job", "Time", std::nullopt, "Job start instant."},
      {"hasJobEndTime", "Job", "Time", std::nullopt, "Job end instant."},
      {"hasJobMetric", "Job", "JobMetric", std::nullopt, "Job to its metrics and requested resources."},
      {"hasPlugin", "ComputeNode", "Plugin", std::nullopt, "Compute node to its installed plugins."},
      {"hasReading", "Sensor", "SensorReading", std::nullopt, "Sensor to the readings it produced."},
      {"hasSensor", "ComputeNode", "Sensor", std::nullopt, "Compute node to its sensors."},
      {"isSensorOf", "Sensor", "ComputeNode", "hasSensor", "Inverse of hasSensor."},
      {"hasTimestamp", "SensorReading", "Time", std::nullopt, "Reading to the instant it was taken."},
      {"includesSensor", "Plugin", "Sensor", std::nullopt, "Plugin to the sensors it exposes."},
      {"isPartOfPlugin", "Sensor", "Plugin", "includesSensor", "Inverse of includesSensor."},
  };
  s.data_properties = {
      {"dcId", "DataCenter", Datatype::Integer, std::nullopt, "Data center identifier."},
      {"dcName", "DataCenter", Datatype::String, std::nullopt, "Data center name."},
      {"location", "DataCenter", Datatype::String, std::nullopt, "Where the data center is."},
      {"systemId", "HPCSystem", Datatype::Integer, std::nullopt, "HPC system identifier."},
      {"systemName", "HPCSystem", Datatype::String, std::nullopt, "HPC system name."},
      {"userId", "User", Datatype::Integer, std::nullopt, "User identifier."},
      {"userName", "User", Datatype::String, std::nullopt, "User name."},
      {"rackId", "Rack", Datatype::Integer, std::nullopt, "Rack identifier."},
      {"computeNodeId", "ComputeNode", Datatype::Integer, std::nullopt, "Compute node identifier."},
      {"posX", "Position", Datatype::Integer, std::nullopt, "X coordinate inside the rack."},
      {"posY", "Position", Datatype::Integer, std::nullopt, "Y coordinate inside the rack."},
      {"posZ", "Position", Datatype::Integer, std::nullopt, "Z coordinate inside the rack."},
      {"pluginName", "Plugin", Datatype::String, std::nullopt, "Plugin name."},
      {"jobId", "Job", Datatype::Integer, std::nullopt, "Job identifier."},
      {"jobName", "Job", Datatype::String, std::nullopt, "Job name."},
      {"groupId", "Job", Datatype::Integer, std::nullopt, "Group of the submitting user."},
      {"exitCode", "Job", Datatype::Integer, std::nullopt, "Exit status of the job."},
      {"jobDuration", "Job", Datatype::Duration, std::nullopt, "Wall-clock duration as an xsd:duration."},
      {"metricName", "JobMetric", Datatype::String, std::nullopt, "Metric name."},
      {"metricValue", "JobMetric", Datatype::Float, std::nullopt, "Metric value."},
      {"sensorName", "Sensor", Datatype::String, std::nullopt, "Sensor name."},
      {"sensorType", "Sensor", Datatype::String, std::nullopt, "Sensor category such as power or temperature."},
      {"sensorUnit", "Sensor", Datatype::String, std::nullopt, "Unit of the sensor's values."},
      {"timestamp", "Time", Datatype::DateTime, Datatype::Integer, "Instant as xsd:dateTime or Unix seconds."},
      {"value", "SensorReading", Datatype::Double, std::nullopt, "Numeric value of a reading."},
  };
  return s;
}

// The prior per-reading schema links each reading to a DataRecord and stores
// its timestamp and unit on the reading itself.
inline OntologySchema legacy_extension() {
  OntologySchema s;
  s.classes = {{"DataRecord", "Container grouping the readings of one plugin for one day."}};
  s.object_properties = {
      {"partOfRecord", "SensorReading", "DataRecord", std::nullopt, "Reading to the record it belongs to."},
      {"recordOfPlugin", "DataRecord", "Plugin", std::nullopt, "Record to the plugin that produced it."},
  };
  s.data_properties = {
      {"readingTimestamp", "SensorReading", Datatype::DateTime, std::nullopt, "ISO 8601 instant of a reading."},
      {"readingUnit", "SensorReading", Datatype::String, std::nullopt, "Unit stored on each reading."},
  };
  return s;
}

// builtin_schema() plus legacy_extension(); validates legacy-mode graphs.
inline OntologySchema legacy_schema() {
  OntologySchema s = builtin_schema();
  const OntologySchema ext = legacy_extension();
  s.classes.insert(s.classes.end(), ext.classes.begin(), ext.classes.end());
  s.object_properties.insert(s.object_properties.end(), ext.object_properties.begin(), ext.object_properties.end());
  s.data_properties.insert(s.data_properties.end(), ext.data_properties.begin(), ext.data_properties.end());
  return s;
}

}  // namespace hpcoda::ontology
