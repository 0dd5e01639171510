#pragma once

#include <algorithm>
#include <filesystem>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "hpcoda/common/fs.hpp"
#include "hpcoda/ontology/schema.hpp"
#include "hpcoda/rdf/ntriples.hpp"
#include "hpcoda/rdf/turtle.hpp"

namespace hpcoda::ontology {

using rdf::RdfFormat;
using rdf::Term;
using rdf::TripleStore;

inline const std::string& ontology_iri() {
  static const std::string iri(rdf::vocab::kHpc);
  return iri;
}

// Builds the ontology graph in document order: header, classes, object
// properties, data properties, each group alphabetical.
inline TripleStore ontology_graph(const OntologySchema& schema) {
  schema.check();
  using namespace rdf::vocab;
  const Term type = rdf::rdf_type();
  const Term comment = Term::iri(rdfs("comment"));
  const Term domain = Term::iri(rdfs("domain"));
  const Term range = Term::iri(rdfs("range"));
  const Term inverse = Term::iri(owl("inverseOf"));

  TripleStore g;
  g.insert({Term::iri(ontology_iri()), type, Term::iri(owl("Ontology"))});

  auto sorted = [](auto items) {
    std::sort(items.begin(), items.end(), [](const auto& a, const auto& b) { return a.name < b.name; });
    return items;
  };
  for (const auto& c : sorted(schema.classes)) {
    const Term s = Term::iri(entity_iri(c.name));
    g.insert({s, type, Term::iri(owl("Class"))});
    g.insert({s, comment, Term::string(c.description)});
  }
  for (const auto& p : sorted(schema.object_properties)) {
    const Term s = Term::iri(entity_iri(p.name));
    g.insert({s, type, Term::iri(owl("ObjectProperty"))});
    g.insert({s, domain, Term::iri(entity_iri(p.domain))});
    g.insert({s, range, Term::iri(entity_iri(p.range))});
    if (p.inverse_of) g.insert({s, inverse, Term::iri(entity_iri(*p.inverse_of))});
    g.insert({s, comment, Term::string(p.description)});
  }
  for (const auto& p : sorted(schema.data_properties)) {
    const Term s = Term::iri(entity_iri(p.name));
    g.insert({s, type, Term::iri(owl("DatatypeProperty"))});
    g.insert({s, domain, Term::iri(entity_iri(p.domain))});
    g.insert({s, range, Term::iri(rdf::datatype_iri(p.range))});
    g.insert({s, comment, Term::string(p.description)});
  }
  g.seal();
  return g;
}

inline std::string emit_ontology(const OntologySchema& schema, RdfFormat format) {
  const TripleStore g = ontology_graph(schema);
  std::ostringstream out;
  switch (format) {
    case RdfFormat::NTriples: rdf::write_ntriples(g, out, rdf::LineOrder::Insertion); break;
    case RdfFormat::Turtle: rdf::write_turtle(g, out, rdf::LineOrder::Insertion); break;
    default: throw Error("unsupported ontology format");
  }
  return out.str();
}

inline void write_ontology_file(const OntologySchema& schema, RdfFormat format, const std::filesystem::path& path) {
  const std::string doc = emit_ontology(schema, format);
  write_file_atomic(path, [&](std::ostream& out) { out << doc; });
}

inline RdfFormat parse_format_tag(std::string_view tag) {
  if (tag == "ttl" || tag == "turtle") return RdfFormat::Turtle;
  if (tag == "nt" || tag == "ntriples" || tag == "n-triples") return RdfFormat::NTriples;
  throw Error("unsupported format '" + std::string(tag) + "' (expected ttl or nt)");
}

struct AxiomCounts {
  std::size_t classes = 0;
  std::size_t object_properties = 0;
  std::size_t data_properties = 0;
  std::size_t object_domain_range = 0;
  std::size_t data_domain_range = 0;
  std::size_t inverse_of = 0;
  std::size_t annotations = 0;

  std::size_t declarations() const { return classes + object_properties + data_properties; }
  std::size_t logical() const { return object_domain_range + data_domain_range + inverse_of; }
  std::size_t total() const { return declarations() + logical(); }

  friend bool operator==(const AxiomCounts&, const AxiomCounts&) = default;
};

// Recounts axioms from a parsed ontology graph. The owl:Ontology header and
// rdfs:comment annotations are not axioms.
inline AxiomCounts count_axioms(const TripleStore& g) {
  using namespace rdf::vocab;
  AxiomCounts c;
  std::unordered_set<std::string> object_props;
  std::unordered_set<std::string> data_props;
  for (const auto& ids : g.insertion_order()) {
    const auto t = g.resolve_triple(ids);
    if (t.predicate.text() == kRdfType && t.object.is_iri()) {
      const auto& cls = t.object.text();
      if (cls == owl("Class")) {
        ++c.classes;
      } else if (cls == owl("ObjectProperty")) {
        ++c.object_properties;
        object_props.insert(t.subject.text());
      } else if (cls == owl("DatatypeProperty")) {
        ++c.data_properties;
        data_props.insert(t.subject.text());
      }
    }
  }
  for (const auto& ids : g.insertion_order()) {
    const auto t = g.resolve_triple(ids);
    const auto& p = t.predicate.text();
    if (p == rdfs("domain") || p == rdfs("range")) {
      if (object_props.count(t.subject.text())) {
        ++c.object_domain_range;
      } else if (data_props.count(t.subject.text())) {
        ++c.data_domain_range;
      }
    } else if (p == owl("inverseOf")) {
      ++c.inverse_of;
    } else if (p == rdfs("comment") || p == rdfs("label")) {
      ++c.annotations;
    }
  }
  return c;
}

inline AxiomCounts count_axioms_in_document(std::string_view text, RdfFormat format) {
  const TripleStore g =
      format == RdfFormat::NTriples ? rdf::read_ntriples_string(text) : rdf::read_turtle_string(text);
  return count_axioms(g);
}

inline AxiomCounts count_axioms_in_file(const std::filesystem::path& path) {
  const std::string text = read_file(path);
  const auto ext = path.extension().string();
  return count_axioms_in_document(text, ext == ".ttl" ? RdfFormat::Turtle : RdfFormat::NTriples);
}

}  // namespace hpcoda::ontology
