#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "hpcoda/ontology/schema.hpp"
#include "hpcoda/rdf/triple_store.hpp"

namespace hpcoda::ontology {

enum class ViolationKind { DomainViolation, RangeViolation, DatatypeViolation, UnknownProperty };

inline std::string_view violation_kind_name(ViolationKind k) {
  switch (k) {
    case ViolationKind::DomainViolation: return "DomainViolation";
    case ViolationKind::RangeViolation: return "RangeViolation";
    case ViolationKind::DatatypeViolation: return "DatatypeViolation";
    case ViolationKind::UnknownProperty: return "UnknownProperty";
  }
  return "?";
}

struct Violation {
  ViolationKind kind = ViolationKind::UnknownProperty;
  rdf::Triple triple;
  std::string expected;
  std::string found;
};

inline std::string describe(const Violation& v) {
  return std::string(violation_kind_name(v.kind)) + ": <" + v.triple.subject.text() + "> <" +
         v.triple.predicate.text() + "> ... expected " + v.expected + ", found " + v.found;
}

namespace detail {

inline std::string local_name(std::string_view iri) {
  if (iri.substr(0, rdf::vocab::kHpc.size()) == rdf::vocab::kHpc)
    return std::string(iri.substr(rdf::vocab::kHpc.size()));
  return std::string(iri);
}

inline std::string join_types(const std::vector<rdf::TermId>& types, const rdf::TripleStore& store) {
  std::string out;
  for (auto id : types) {
    if (!out.empty()) out += "|";
    out += local_name(store.resolve(id).text());
  }
  return out;
}

}  // namespace detail

// Checks every triple whose predicate is in the hpc namespace.
//
// Typing is open-world: a node with no rdf:type is accepted in any domain or
// range slot; a typed node must carry the declared class among its types.
// Literal objects of object properties and non-literal or wrongly typed
// objects of data properties are always reported.
inline std::vector<Violation> validate_graph(const OntologySchema& schema, const rdf::TripleStore& store) {
  using rdf::TermId;
  std::vector<Violation> out;

  std::unordered_map<TermId, std::vector<TermId>> types;
  const auto type_id = store.lookup(rdf::rdf_type());
  if (type_id) {
    for (const auto t : store.match_ids({std::nullopt, *type_id, std::nullopt})) types[t.s].push_back(t.o);
  }
  auto has_class = [&](TermId node, const std::string& cls) -> std::optional<std::string> {
    const auto it = types.find(node);
    if (it == types.end()) return std::nullopt;
    const std::string want = entity_iri(cls);
    for (auto c : it->second)
      if (store.resolve(c).text() == want) return std::nullopt;
    return detail::join_types(it->second, store);
  };

  // Predicate id -> resolved definition; built lazily since graphs reuse few predicates.
  struct PredInfo {
    const ObjectPropertyDef* obj = nullptr;
    const DataPropertyDef* data = nullptr;
    bool hpc = false;
  };
  std::unordered_map<TermId, PredInfo> preds;

  for (const auto& ids : store.insertion_order()) {
    auto [it, fresh] = preds.try_emplace(ids.p);
    if (fresh) {
      const auto& iri = store.resolve(ids.p).text();
      if (iri.size() > rdf::vocab::kHpc.size() && iri.compare(0, rdf::vocab::kHpc.size(), rdf::vocab::kHpc) == 0) {
        const std::string local = iri.substr(rdf::vocab::kHpc.size());
        it->second.hpc = true;
        it->second.obj = schema.find_object_property(local);
        it->second.data = schema.find_data_property(local);
      }
    }
    const PredInfo& info = it->second;
    if (!info.hpc) continue;
    if (!info.obj && !info.data) {
      out.push_back({ViolationKind::UnknownProperty, store.resolve_triple(ids), "declared property",
                     detail::local_name(store.resolve(ids.p).text())});
      continue;
    }
    const std::string& domain = info.obj ? info.obj->domain : info.data->domain;
    if (auto found = has_class(ids.s, domain))
      out.push_back({ViolationKind::DomainViolation, store.resolve_triple(ids), domain, *found});

    const rdf::Term& object = store.resolve(ids.o);
    if (info.obj) {
      if (object.is_literal()) {
        out.push_back({ViolationKind::RangeViolation, store.resolve_triple(ids), info.obj->range,
                       "literal xsd:" + std::string(rdf::datatype_local_name(object.datatype()))});
      } else if (auto found = has_class(ids.o, info.obj->range)) {
        out.push_back({ViolationKind::RangeViolation, store.resolve_triple(ids), info.obj->range, *found});
      }
    } else {
      const std::string expected = "xsd:" + std::string(rdf::datatype_local_name(info.data->range));
      if (!object.is_literal()) {
        out.push_back({ViolationKind::DatatypeViolation, store.resolve_triple(ids), expected, "resource"});
      } else if (object.datatype() != info.data->range && object.datatype() != info.data->alternate_range) {
        out.push_back({ViolationKind::DatatypeViolation, store.resolve_triple(ids), expected,
                       "xsd:" + std::string(rdf::datatype_local_name(object.datatype()))});
      }
    }
  }
  return out;
}

}  // namespace hpcoda::ontology
