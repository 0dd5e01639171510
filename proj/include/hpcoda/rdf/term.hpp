#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <utility>

#include "hpcoda/common/error.hpp"
#include "hpcoda/common/numeric.hpp"
#include "hpcoda/common/time.hpp"

namespace hpcoda::rdf {

namespace vocab {
inline constexpr std::string_view kHpc = "http://ontology.hpc.org/";
inline constexpr std::string_view kRdf = "http://www.w3.org/1999/02/22-rdf-syntax-ns#";
inline constexpr std::string_view kRdfs = "http://www.w3.org/2000/01/rdf-schema#";
inline constexpr std::string_view kOwl = "http://www.w3.org/2002/07/owl#";
inline constexpr std::string_view kXsd = "http://www.w3.org/2001/XMLSchema#";
inline constexpr std::string_view kRdfType = "http://www.w3.org/1999/02/22-rdf-syntax-ns#type";

inline std::string hpc(std::string_view local) { return std::string(kHpc) + std::string(local); }
inline std::string rdfs(std::string_view local) { return std::string(kRdfs) + std::string(local); }
inline std::string owl(std::string_view local) { return std::string(kOwl) + std::string(local); }
inline std::string xsd(std::string_view local) { return std::string(kXsd) + std::string(local); }
}  // namespace vocab

enum class TermKind : std::uint8_t { Iri, Literal, BlankNode };

// The XSD datatypes a literal may carry.
enum class Datatype : std::uint8_t { String, Integer, Decimal, Float, Double, Boolean, DateTime, Duration };

inline std::string_view datatype_local_name(Datatype dt) {
  switch (dt) {
    case Datatype::String: return "string";
    case Datatype::Integer: return "integer";
    case Datatype::Decimal: return "decimal";
    case Datatype::Float: return "float";
    case Datatype::Double: return "double";
    case Datatype::Boolean: return "boolean";
    case Datatype::DateTime: return "dateTime";
    case Datatype::Duration: return "duration";
  }
  return "string";
}

inline std::string datatype_iri(Datatype dt) { return vocab::xsd(datatype_local_name(dt)); }

inline std::optional<Datatype> datatype_from_iri(std::string_view iri) {
  if (iri.substr(0, vocab::kXsd.size()) != vocab::kXsd) return std::nullopt;
  const std::string_view local = iri.substr(vocab::kXsd.size());
  for (Datatype dt : {Datatype::String, Datatype::Integer, Datatype::Decimal, Datatype::Float,
                      Datatype::Double, Datatype::Boolean, Datatype::DateTime, Datatype::Duration}) {
    if (datatype_local_name(dt) == local) return dt;
  }
  return std::nullopt;
}

inline bool is_integer_lexical(std::string_view s) { return parse_int64(s).has_value(); }

inline bool is_valid_lexical(std::string_view lex, Datatype dt) {
  switch (dt) {
    case Datatype::String: return true;
    case Datatype::Integer: return is_integer_lexical(lex);
    case Datatype::Decimal: return is_decimal_lexical(lex);
    case Datatype::Float:
    case Datatype::Double: return parse_double(lex).has_value();
    case Datatype::Boolean: return lex == "true" || lex == "false" || lex == "1" || lex == "0";
    case Datatype::DateTime: return time::parse_iso8601(lex).has_value();
    case Datatype::Duration: return time::parse_duration(lex).has_value();
  }
  return false;
}

inline bool is_valid_iri(std::string_view s) {
  if (s.empty()) return false;
  for (unsigned char c : s) {
    if (c <= 0x20 || c == 0x7f) return false;
  }
  return true;
}

inline bool is_valid_blank_label(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_';
    if (!ok) return false;
  }
  return true;
}

// An RDF term. Equality is lexical: kind, text and datatype must all match.
class Term {
 public:
  Term() = default;

  static Term iri(std::string value) {
    if (!is_valid_iri(value)) throw ValidationError("invalid IRI '" + value + "'");
    return Term(TermKind::Iri, std::move(value), Datatype::String);
  }

  static Term blank(std::string label) {
    if (!is_valid_blank_label(label)) throw ValidationError("invalid blank node label '" + label + "'");
    return Term(TermKind::BlankNode, std::move(label), Datatype::String);
  }

  static Term literal(std::string lexical, Datatype dt = Datatype::String) {
    if (!is_valid_lexical(lexical, dt)) {
      throw ValidationError("invalid lexical form '" + lexical + "' for xsd:" +
                            std::string(datatype_local_name(dt)));
    }
    return Term(TermKind::Literal, std::move(lexical), dt);
  }

  static Term integer(std::int64_t v) { return Term(TermKind::Literal, std::to_string(v), Datatype::Integer); }
  static Term dbl(double v) { return Term(TermKind::Literal, format_double(v), Datatype::Double); }
  static Term string(std::string v) { return Term(TermKind::Literal, std::move(v), Datatype::String); }

  TermKind kind() const noexcept { return kind_; }
  bool is_iri() const noexcept { return kind_ == TermKind::Iri; }
  bool is_literal() const noexcept { return kind_ == TermKind::Literal; }
  bool is_blank() const noexcept { return kind_ == TermKind::BlankNode; }

  // IRI string, literal lexical form, or blank node label.
  const std::string& text() const noexcept { return text_; }
  Datatype datatype() const noexcept { return datatype_; }

  friend bool operator==(const Term& a, const Term& b) noexcept {
    return a.kind_ == b.kind_ && a.datatype_ == b.datatype_ && a.text_ == b.text_;
  }

  std::size_t hash() const noexcept {
    const std::size_t h = std::hash<std::string>{}(text_);
    return h ^ (static_cast<std::size_t>(kind_) * 0x9e3779b97f4a7c15ULL) ^
           (static_cast<std::size_t>(datatype_) << 3);
  }

 private:
  Term(TermKind kind, std::string text, Datatype dt) : kind_(kind), datatype_(dt), text_(std::move(text)) {}

  TermKind kind_ = TermKind::Iri;
  Datatype datatype_ = Datatype::String;
  std::string text_;
};

struct TermHash {
  std::size_t operator()(const Term& t) const noexcept { return t.hash(); }
};

struct Triple {
  Term subject;
  Term predicate;
  Term object;

  friend bool operator==(const Triple&, const Triple&) = default;
};

// Throws ValidationError when the subject is a literal or the predicate is
// not an IRI.
inline void check_triple(const Triple& t) {
  if (t.subject.is_literal()) throw ValidationError("literal in subject position: \"" + t.subject.text() + "\"");
  if (!t.predicate.is_iri()) throw ValidationError("predicate must be an IRI: " + t.predicate.text());
}

inline Term rdf_type() { return Term::iri(std::string(vocab::kRdfType)); }

}  // namespace hpcoda::rdf
