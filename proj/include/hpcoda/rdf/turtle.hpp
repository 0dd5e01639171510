#pragma once

#include <array>
#include <cctype>
#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "hpcoda/common/fs.hpp"
#include "hpcoda/rdf/ntriples.hpp"
#include "hpcoda/rdf/syntax.hpp"
#include "hpcoda/rdf/triple_store.hpp"

namespace hpcoda::rdf {

struct PrefixBinding {
  std::string_view prefix;
  std::string_view ns;
};

inline constexpr std::array<PrefixBinding, 5> kStandardPrefixes{{
    {"hpc", vocab::kHpc},
    {"rdf", vocab::kRdf},
    {"rdfs", vocab::kRdfs},
    {"owl", vocab::kOwl},
    {"xsd", vocab::kXsd},
}};

namespace detail {

inline bool is_simple_local_name(std::string_view s) {
  if (s.empty()) return false;
  const char first = s.front();
  if (!((first >= 'a' && first <= 'z') || (first >= 'A' && first <= 'Z') || first == '_')) return false;
  for (char c : s) {
    const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_' || c == '-';
    if (!ok) return false;
  }
  return true;
}

// Index into kStandardPrefixes usable for `iri`, if any.
inline std::optional<std::size_t> prefix_for(std::string_view iri) {
  for (std::size_t i = 0; i < kStandardPrefixes.size(); ++i) {
    const auto ns = kStandardPrefixes[i].ns;
    if (iri.size() > ns.size() && iri.substr(0, ns.size()) == ns && is_simple_local_name(iri.substr(ns.size())))
      return i;
  }
  return std::nullopt;
}

class TurtleRenderer {
 public:
  explicit TurtleRenderer(std::array<bool, kStandardPrefixes.size()> enabled) : enabled_(enabled) {}

  std::string iri(std::string_view text) const {
    if (const auto idx = prefix_for(text); idx && enabled_[*idx]) {
      const auto& b = kStandardPrefixes[*idx];
      return std::string(b.prefix) + ":" + std::string(text.substr(b.ns.size()));
    }
    return syntax::format_iri(text);
  }

  std::string term(const Term& t, bool predicate_position) const {
    if (predicate_position && t.is_iri() && t.text() == vocab::kRdfType) return "a";
    switch (t.kind()) {
      case TermKind::Iri: return iri(t.text());
      case TermKind::BlankNode: return "_:" + t.text();
      case TermKind::Literal: {
        std::string out = syntax::format_string_body(t.text());
        if (t.datatype() != Datatype::String) out += "^^" + iri(datatype_iri(t.datatype()));
        return out;
      }
    }
    return {};
  }

 private:
  std::array<bool, kStandardPrefixes.size()> enabled_;
};

inline std::string prefix_header_line(const PrefixBinding& b) {
  return "@prefix " + std::string(b.prefix) + ": <" + std::string(b.ns) + "> .\n";
}

}  // namespace detail

// Turtle with subject grouping (`;`) and object lists (`,`). A standard
// prefix is declared only when its uses save more bytes than its @prefix
// line costs, so the output is never larger than the N-Triples form.
template <class Sink>
  requires std::invocable<Sink&, std::string_view>
SerializationReport write_turtle(const TripleStore& store, Sink&& sink, LineOrder order = LineOrder::Canonical) {
  const auto formatted = detail::format_dictionary(store);
  const auto triples = detail::ordered_triples(store, formatted, order);

  // Decide which prefixes pay for themselves.
  std::array<long long, kStandardPrefixes.size()> savings{};
  auto count_iri = [&](std::string_view text) {
    if (const auto idx = detail::prefix_for(text)) {
      const auto& b = kStandardPrefixes[*idx];
      const long long full = static_cast<long long>(syntax::format_iri(text).size());
      const long long short_form = static_cast<long long>(b.prefix.size() + 1 + text.size() - b.ns.size());
      savings[*idx] += full - short_form;
    }
  };
  auto count_term = [&](const Term& t, bool predicate_position) {
    if (t.is_iri()) {
      if (!(predicate_position && t.text() == vocab::kRdfType)) count_iri(t.text());
    } else if (t.is_literal() && t.datatype() != Datatype::String) {
      count_iri(datatype_iri(t.datatype()));
    }
  };
  for (std::size_t i = 0; i < triples.size(); ++i) {
    const auto& t = triples[i];
    const bool new_subject = i == 0 || triples[i - 1].s != t.s;
    const bool new_predicate = new_subject || triples[i - 1].p != t.p;
    if (new_subject) count_term(store.resolve(t.s), false);
    if (new_predicate) count_term(store.resolve(t.p), true);
    count_term(store.resolve(t.o), false);
  }
  std::array<bool, kStandardPrefixes.size()> enabled{};
  bool any_prefix = false;
  for (std::size_t i = 0; i < kStandardPrefixes.size(); ++i) {
    // +1 accounts for the blank line that follows the header block.
    const auto cost = static_cast<long long>(detail::prefix_header_line(kStandardPrefixes[i]).size()) + 1;
    enabled[i] = savings[i] > cost;
    any_prefix = any_prefix || enabled[i];
  }

  SerializationReport report;
  report.format = RdfFormat::Turtle;
  auto emit = [&](std::string_view chunk) {
    report.bytes_written += chunk.size();
    sink(chunk);
  };
  for (std::size_t i = 0; i < kStandardPrefixes.size(); ++i) {
    if (enabled[i]) emit(detail::prefix_header_line(kStandardPrefixes[i]));
  }
  if (any_prefix) emit("\n");

  const detail::TurtleRenderer render(enabled);
  std::string chunk;
  for (std::size_t i = 0; i < triples.size(); ++i) {
    const auto& t = triples[i];
    chunk.clear();
    const bool new_subject = i == 0 || triples[i - 1].s != t.s;
    const bool new_predicate = new_subject || triples[i - 1].p != t.p;
    if (new_subject) {
      chunk += render.term(store.resolve(t.s), false);
      chunk.push_back(' ');
      chunk += render.term(store.resolve(t.p), true);
      chunk.push_back(' ');
    } else if (new_predicate) {
      chunk += " ;\n  ";
      chunk += render.term(store.resolve(t.p), true);
      chunk.push_back(' ');
    } else {
      chunk += ", ";
    }
    chunk += render.term(store.resolve(t.o), false);
    const bool last_of_subject = i + 1 == triples.size() || triples[i + 1].s != t.s;
    if (last_of_subject) chunk += " .\n";
    ++report.triples_written;
    emit(chunk);
  }
  return report;
}

inline SerializationReport write_turtle(const TripleStore& store, std::ostream& out,
                                        LineOrder order = LineOrder::Canonical) {
  return write_turtle(
      store, [&out](std::string_view s) { out.write(s.data(), static_cast<std::streamsize>(s.size())); }, order);
}

inline SerializationReport write_turtle_file(const TripleStore& store, const std::filesystem::path& path,
                                             LineOrder order = LineOrder::Canonical) {
  return write_file_atomic(path, [&](std::ostream& out) { return write_turtle(store, out, order); });
}

namespace detail {

// Reader for the Turtle subset produced by write_turtle: @prefix/PREFIX
// directives, prefixed names, `a`, blank node labels, quoted literals with
// datatypes, bare numbers and booleans, and `;` / `,` abbreviations.
class TurtleReader {
 public:
  explicit TurtleReader(std::string_view text) : cur_(text) {}

  TripleStore read() {
    TripleStore store;
    while (true) {
      cur_.skip_ws_and_comments();
      if (cur_.eof()) break;
      if (cur_.peek() == '@' || starts_with_keyword("PREFIX")) {
        read_prefix();
        continue;
      }
      read_statement(store);
    }
    store.seal();
    return store;
  }

 private:
  bool starts_with_keyword(std::string_view kw) const {
    const auto rest = cur_.rest();
    if (rest.size() < kw.size()) return false;
    for (std::size_t i = 0; i < kw.size(); ++i) {
      if (std::toupper(static_cast<unsigned char>(rest[i])) != kw[i]) return false;
    }
    return rest.size() == kw.size() || rest[kw.size()] == ' ' || rest[kw.size()] == '\t';
  }

  void read_prefix() {
    const bool at_form = cur_.peek() == '@';
    if (at_form) cur_.get();
    const std::string kw = read_word();
    if (kw != "prefix" && kw != "PREFIX") {
      if (kw == "base" || kw == "BASE") cur_.fail("@base is not supported");
      cur_.fail("unknown directive '" + kw + "'");
    }
    cur_.skip_ws_and_comments();
    std::string name;
    while (!cur_.eof() && cur_.peek() != ':') name.push_back(cur_.get());
    cur_.expect(':');
    cur_.skip_ws_and_comments();
    prefixes_[name] = cur_.read_iriref();
    cur_.skip_ws_and_comments();
    if (at_form) cur_.expect('.');
  }

  std::string read_word() {
    std::string out;
    while (!cur_.eof() && (std::isalnum(static_cast<unsigned char>(cur_.peek())) || cur_.peek() == '_'))
      out.push_back(cur_.get());
    return out;
  }

  void read_statement(TripleStore& store) {
    const Term subject = read_term(false);
    if (subject.is_literal()) cur_.fail("literal in subject position");
    while (true) {
      cur_.skip_ws_and_comments();
      const Term predicate = read_term(true);
      if (!predicate.is_iri()) cur_.fail("predicate must be an IRI");
      while (true) {
        cur_.skip_ws_and_comments();
        const Term object = read_term(false);
        store.insert({subject, predicate, object});
        cur_.skip_ws_and_comments();
        if (cur_.peek() == ',') {
          cur_.get();
          continue;
        }
        break;
      }
      if (cur_.peek() == ';') {
        cur_.get();
        cur_.skip_ws_and_comments();
        if (cur_.peek() == '.') break;
        continue;
      }
      break;
    }
    cur_.skip_ws_and_comments();
    cur_.expect('.');
  }

  std::string expand(const std::string& pname) {
    const auto colon = pname.find(':');
    const std::string prefix = pname.substr(0, colon);
    const auto it = prefixes_.find(prefix);
    if (it == prefixes_.end()) cur_.fail("unknown prefix '" + prefix + ":'");
    return it->second + pname.substr(colon + 1);
  }

  std::string read_pname() {
    std::string out;
    while (!cur_.eof()) {
      const char c = cur_.peek();
      const bool ok = std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == ':' ||
                      (c == '.' && std::isalnum(static_cast<unsigned char>(cur_.peek(1))));
      if (!ok) break;
      out.push_back(cur_.get());
    }
    if (out.find(':') == std::string::npos) cur_.fail("expected a prefixed name, got '" + out + "'");
    return out;
  }

  Term read_term(bool predicate_position) {
    const char c = cur_.peek();
    if (c == '<') {
      std::string iri = cur_.read_iriref();
      if (!is_valid_iri(iri)) cur_.fail("bad IRI '" + iri + "'");
      return Term::iri(std::move(iri));
    }
    if (c == '_' && cur_.peek(1) == ':') return Term::blank(cur_.read_blank_label());
    if (c == '"' || c == '\'') {
      std::string lex = cur_.read_quoted();
      if (cur_.peek() == '^' && cur_.peek(1) == '^') {
        cur_.get();
        cur_.get();
        const std::string dt = cur_.peek() == '<' ? cur_.read_iriref() : expand(read_pname());
        return syntax::make_literal(cur_, std::move(lex), dt);
      }
      if (cur_.peek() == '@') cur_.fail("language-tagged literals are not supported");
      return Term::string(std::move(lex));
    }
    if (c == '+' || c == '-' || c == '.' || (c >= '0' && c <= '9')) return read_number();
    if (predicate_position && c == 'a') {
      const char next = cur_.peek(1);
      if (next == ' ' || next == '\t' || next == '\n' || next == '<' || next == '"') {
        cur_.get();
        return rdf_type();
      }
    }
    const std::string word = read_pname_or_keyword();
    if (word == "true" || word == "false") return Term::literal(word, Datatype::Boolean);
    std::string iri = expand(word);
    if (!is_valid_iri(iri)) cur_.fail("bad IRI '" + iri + "'");
    return Term::iri(std::move(iri));
  }

  std::string read_pname_or_keyword() {
    const auto rest = cur_.rest();
    if (rest.substr(0, 4) == "true" || rest.substr(0, 5) == "false") {
      const std::size_t n = rest[0] == 't' ? 4 : 5;
      const char after = rest.size() > n ? rest[n] : ' ';
      if (!std::isalnum(static_cast<unsigned char>(after)) && after != ':' && after != '_') {
        for (std::size_t i = 0; i < n; ++i) cur_.get();
        return std::string(rest.substr(0, n));
      }
    }
    return read_pname();
  }

  Term read_number() {
    std::string lex;
    bool dot = false;
    bool exp = false;
    if (cur_.peek() == '+' || cur_.peek() == '-') lex.push_back(cur_.get());
    while (!cur_.eof()) {
      const char c = cur_.peek();
      if (c >= '0' && c <= '9') {
        lex.push_back(cur_.get());
      } else if (c == '.' && !dot && !exp && cur_.peek(1) >= '0' && cur_.peek(1) <= '9') {
        dot = true;
        lex.push_back(cur_.get());
      } else if ((c == 'e' || c == 'E') && !exp) {
        exp = true;
        lex.push_back(cur_.get());
        if (cur_.peek() == '+' || cur_.peek() == '-') lex.push_back(cur_.get());
      } else {
        break;
      }
    }
    const Datatype dt = exp ? Datatype::Double : dot ? Datatype::Decimal : Datatype::Integer;
    if (!is_valid_lexical(lex, dt)) cur_.fail("bad numeric literal '" + lex + "'");
    return Term::literal(std::move(lex), dt);
  }

  syntax::Cursor cur_;
  std::map<std::string, std::string> prefixes_;
};

}  // namespace detail

inline TripleStore read_turtle_string(std::string_view text) { return detail::TurtleReader(text).read(); }

inline TripleStore read_turtle_file(const std::filesystem::path& path) {
  const std::string text = read_file(path);
  return read_turtle_string(text);
}

}  // namespace hpcoda::rdf
