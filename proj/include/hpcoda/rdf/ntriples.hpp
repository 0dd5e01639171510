#pragma once

#include <algorithm>
#include <concepts>
#include <cstddef>
#include <fstream>
#include <filesystem>
#include <istream>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "hpcoda/common/fs.hpp"
#include "hpcoda/rdf/syntax.hpp"
#include "hpcoda/rdf/triple_store.hpp"

namespace hpcoda::rdf {

enum class RdfFormat { NTriples, Turtle };

inline std::string_view format_name(RdfFormat f) { return f == RdfFormat::NTriples ? "n-triples" : "turtle"; }

struct SerializationReport {
  std::size_t bytes_written = 0;
  std::size_t triples_written = 0;
  RdfFormat format = RdfFormat::NTriples;
};

enum class LineOrder {
  // Sorted by the serialized (S, P, O) terms. Independent of term ids, so a
  // read/write round trip reproduces the same bytes.
  Canonical,
  // Order in which triples were inserted.
  Insertion,
};

namespace detail {

inline std::vector<std::string> format_dictionary(const TripleStore& store) {
  std::vector<std::string> out;
  out.reserve(store.dict_size());
  for (std::size_t i = 0; i < store.dict_size(); ++i) out.push_back(syntax::format_term(store.resolve(static_cast<TermId>(i))));
  return out;
}

// Triples sorted by the rank of their serialized terms.
inline std::vector<TripleIds> canonical_order(const TripleStore& store, const std::vector<std::string>& formatted) {
  std::vector<TermId> by_text(formatted.size());
  for (std::size_t i = 0; i < by_text.size(); ++i) by_text[i] = static_cast<TermId>(i);
  std::sort(by_text.begin(), by_text.end(), [&](TermId a, TermId b) { return formatted[a] < formatted[b]; });
  std::vector<TermId> rank(formatted.size());
  for (std::size_t i = 0; i < by_text.size(); ++i) rank[by_text[i]] = static_cast<TermId>(i);
  std::vector<TripleIds> out(store.insertion_order().begin(), store.insertion_order().end());
  std::sort(out.begin(), out.end(), [&](const TripleIds& a, const TripleIds& b) {
    return TripleIds{rank[a.s], rank[a.p], rank[a.o]} < TripleIds{rank[b.s], rank[b.p], rank[b.o]};
  });
  return out;
}

inline std::vector<TripleIds> ordered_triples(const TripleStore& store, const std::vector<std::string>& formatted,
                                              LineOrder order) {
  if (order == LineOrder::Canonical) return canonical_order(store, formatted);
  return {store.insertion_order().begin(), store.insertion_order().end()};
}

}  // namespace detail

// Writes one line per triple. `sink` is called with each line (including its
// trailing newline).
template <class Sink>
  requires std::invocable<Sink&, std::string_view>
SerializationReport write_ntriples(const TripleStore& store, Sink&& sink, LineOrder order = LineOrder::Canonical) {
  const auto formatted = detail::format_dictionary(store);
  SerializationReport report;
  std::string line;
  for (const TripleIds t : detail::ordered_triples(store, formatted, order)) {
    line.clear();
    line += formatted[t.s];
    line.push_back(' ');
    line += formatted[t.p];
    line.push_back(' ');
    line += formatted[t.o];
    line += " .\n";
    report.bytes_written += line.size();
    ++report.triples_written;
    sink(std::string_view(line));
  }
  return report;
}

inline SerializationReport write_ntriples(const TripleStore& store, std::ostream& out,
                                          LineOrder order = LineOrder::Canonical) {
  return write_ntriples(
      store, [&out](std::string_view line) { out.write(line.data(), static_cast<std::streamsize>(line.size())); },
      order);
}

// Byte count without producing output.
inline SerializationReport measure_ntriples(const TripleStore& store) {
  return write_ntriples(store, [](std::string_view) {}, LineOrder::Insertion);
}

inline SerializationReport write_ntriples_file(const TripleStore& store, const std::filesystem::path& path,
                                               LineOrder order = LineOrder::Canonical) {
  return write_file_atomic(path, [&](std::ostream& out) { return write_ntriples(store, out, order); });
}

namespace detail {

inline Term read_nt_term(syntax::Cursor& cur) {
  const char c = cur.peek();
  if (c == '<') {
    std::string iri = cur.read_iriref();
    if (!is_valid_iri(iri)) cur.fail("bad IRI '" + iri + "'");
    return Term::iri(std::move(iri));
  }
  if (c == '_') return Term::blank(cur.read_blank_label());
  if (c == '"') {
    std::string lex = cur.read_quoted();
    if (cur.peek() == '^' && cur.peek(1) == '^') {
      cur.get();
      cur.get();
      const std::string dt = cur.read_iriref();
      return syntax::make_literal(cur, std::move(lex), dt);
    }
    if (cur.peek() == '@') cur.fail("language-tagged literals are not supported");
    return Term::string(std::move(lex));
  }
  cur.fail("expected an RDF term");
}

inline void skip_blanks(syntax::Cursor& cur) {
  while (cur.peek() == ' ' || cur.peek() == '\t') cur.get();
}

}  // namespace detail

// Parses one N-Triples line into `store`. Blank and comment-only lines are
// ignored. Returns false for those.
inline bool read_ntriples_line(std::string_view text, std::size_t line_no, TripleStore& store) {
  if (!text.empty() && text.back() == '\r') text.remove_suffix(1);
  syntax::Cursor cur(text, line_no);
  detail::skip_blanks(cur);
  if (cur.eof() || cur.peek() == '#') return false;
  const Term s = detail::read_nt_term(cur);
  if (s.is_literal()) cur.fail("literal in subject position");
  detail::skip_blanks(cur);
  if (cur.peek() != '<') cur.fail("predicate must be an IRI");
  const Term p = detail::read_nt_term(cur);
  detail::skip_blanks(cur);
  const Term o = detail::read_nt_term(cur);
  detail::skip_blanks(cur);
  cur.expect('.');
  detail::skip_blanks(cur);
  if (!cur.eof() && cur.peek() != '#') cur.fail("trailing characters after '.'");
  store.insert({s, p, o});
  return true;
}

// Reads an N-Triples document (LF or CRLF line endings) into a sealed store.
inline TripleStore read_ntriples(std::istream& in) {
  TripleStore store;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    read_ntriples_line(line, line_no, store);
  }
  store.seal();
  return store;
}

inline TripleStore read_ntriples_string(std::string_view text) {
  TripleStore store;
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    ++line_no;
    read_ntriples_line(text.substr(start, end - start), line_no, store);
    start = end + 1;
  }
  store.seal();
  return store;
}

inline TripleStore read_ntriples_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  return read_ntriples(in);
}

}  // namespace hpcoda::rdf
