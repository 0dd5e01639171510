#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "hpcoda/rdf/term.hpp"

// Lexical helpers shared by the N-Triples and Turtle readers and writers.
namespace hpcoda::rdf::syntax {

inline void append_utf8(std::string& out, std::uint32_t cp) {
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

inline void append_uchar(std::string& out, unsigned char c) {
  static constexpr char kHex[] = "0123456789ABCDEF";
  out += "\\u00";
  out.push_back(kHex[c >> 4]);
  out.push_back(kHex[c & 0xF]);
}

inline bool iri_char_needs_escape(unsigned char c) {
  return c <= 0x20 || c == '<' || c == '>' || c == '"' || c == '{' || c == '}' || c == '|' || c == '^' ||
         c == '`' || c == '\\';
}

inline std::string format_iri(std::string_view iri) {
  std::string out;
  out.reserve(iri.size() + 2);
  out.push_back('<');
  for (unsigned char c : iri) {
    if (iri_char_needs_escape(c)) {
      append_uchar(out, c);
    } else {
      out.push_back(static_cast<char>(c));
    }
  }
  out.push_back('>');
  return out;
}

inline std::string format_string_body(std::string_view lex) {
  std::string out;
  out.reserve(lex.size() + 2);
  out.push_back('"');
  for (char c : lex) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      default: out.push_back(c);
    }
  }
  out.push_back('"');
  return out;
}

// Canonical N-Triples form of a term. xsd:string literals are written
// without a datatype suffix.
inline std::string format_term(const Term& t) {
  switch (t.kind()) {
    case TermKind::Iri: return format_iri(t.text());
    case TermKind::BlankNode: return "_:" + t.text();
    case TermKind::Literal: {
      std::string out = format_string_body(t.text());
      if (t.datatype() != Datatype::String) {
        out += "^^";
        out += format_iri(datatype_iri(t.datatype()));
      }
      return out;
    }
  }
  return {};
}

inline std::optional<std::uint32_t> parse_hex(std::string_view s) {
  std::uint32_t v = 0;
  for (char c : s) {
    v <<= 4;
    if (c >= '0' && c <= '9') {
      v |= static_cast<std::uint32_t>(c - '0');
    } else if (c >= 'a' && c <= 'f') {
      v |= static_cast<std::uint32_t>(c - 'a' + 10);
    } else if (c >= 'A' && c <= 'F') {
      v |= static_cast<std::uint32_t>(c - 'A' + 10);
    } else {
      return std::nullopt;
    }
  }
  return v;
}

// Cursor over one input line (N-Triples) or a whole document (Turtle).
class Cursor {
 public:
  explicit Cursor(std::string_view text, std::size_t line = 1) : text_(text), line_(line) {}

  bool eof() const noexcept { return pos_ >= text_.size(); }
  char peek(std::size_t ahead = 0) const noexcept {
    return pos_ + ahead < text_.size() ? text_[pos_ + ahead] : '\0';
  }
  char get() noexcept {
    const char c = peek();
    if (c == '\n') ++line_;
    ++pos_;
    return c;
  }
  std::size_t pos() const noexcept { return pos_; }
  std::size_t line() const noexcept { return line_; }
  std::string_view rest() const noexcept { return text_.substr(std::min(pos_, text_.size())); }

  [[noreturn]] void fail(const std::string& what) const { throw ParseError(what, line_); }

  void skip_ws_and_comments() {
    while (!eof()) {
      const char c = peek();
      if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
        get();
      } else if (c == '#') {
        while (!eof() && peek() != '\n') get();
      } else {
        break;
      }
    }
  }

  void expect(char c) {
    if (peek() != c) fail(std::string("expected '") + c + "'");
    get();
  }

  // "\uXXXX" / "\UXXXXXXXX" after the backslash has been consumed.
  void read_uchar(std::string& out) {
    const char kind = get();
    const std::size_t n = kind == 'u' ? 4 : kind == 'U' ? 8 : 0;
    if (n == 0) fail("bad escape sequence");
    if (pos_ + n > text_.size()) fail("truncated escape sequence");
    const auto cp = parse_hex(text_.substr(pos_, n));
    if (!cp) fail("bad escape sequence");
    pos_ += n;
    append_utf8(out, *cp);
  }

  std::string read_iriref() {
    expect('<');
    std::string out;
    while (true) {
      if (eof()) fail("unterminated IRI");
      const char c = get();
      if (c == '>') break;
      if (c == '\\') {
        read_uchar(out);
        continue;
      }
      if (iri_char_needs_escape(static_cast<unsigned char>(c))) fail("bad IRI character");
      out.push_back(c);
    }
    if (out.empty()) fail("bad IRI: empty");
    return out;
  }

  std::string read_blank_label() {
    expect('_');
    expect(':');
    std::string out;
    while (!eof()) {
      const char c = peek();
      const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_';
      if (!ok) break;
      out.push_back(get());
    }
    if (out.empty()) fail("empty blank node label");
    return out;
  }

  // Quoted string body with ECHAR/UCHAR escapes.
  std::string read_quoted() {
    const char quote = peek();
    if (quote != '"' && quote != '\'') fail("expected string literal");
    get();
    std::string out;
    while (true) {
      if (eof() || peek() == '\n') fail("unterminated string literal");
      const char c = get();
      if (c == quote) break;
      if (c != '\\') {
        out.push_back(c);
        continue;
      }
      const char e = peek();
      switch (e) {
        case 't': out.push_back('\t'); get(); break;
        case 'b': out.push_back('\b'); get(); break;
        case 'n': out.push_back('\n'); get(); break;
        case 'r': out.push_back('\r'); get(); break;
        case 'f': out.push_back('\f'); get(); break;
        case '"': out.push_back('"'); get(); break;
        case '\'': out.push_back('\''); get(); break;
        case '\\': out.push_back('\\'); get(); break;
        case 'u':
        case 'U': read_uchar(out); break;
        default: fail("bad literal escape '\\" + std::string(1, e) + "'");
      }
    }
    return out;
  }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t line_;
};

// Builds a literal term, turning validation failures into parse errors.
inline Term make_literal(const Cursor& cur, std::string lexical, std::string_view datatype_iri_text) {
  const auto dt = datatype_from_iri(datatype_iri_text);
  if (!dt) cur.fail("unsupported datatype <" + std::string(datatype_iri_text) + ">");
  try {
    return Term::literal(std::move(lexical), *dt);
  } catch (const ValidationError& e) {
    cur.fail(std::string("bad literal: ") + e.what());
  }
}

}  // namespace hpcoda::rdf::syntax
