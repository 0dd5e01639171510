#pragma once

#include <cctype>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "hpcoda/common/error.hpp"
#include "hpcoda/rdf/syntax.hpp"

namespace hpcoda::sparql {

enum class TokKind {
  Var,      // text = name without ? or $
  IriRef,   // text = IRI
  PName,    // text = "prefix:local"
  Word,     // keyword or bare identifier (a, true, SELECT ...)
  String,   // text = unescaped body
  Integer,
  Decimal,
  Double,
  BlankLabel,  // text = label
  Punct,    // text = operator / punctuation
  End,
};

struct Token {
  TokKind kind = TokKind::End;
  std::string text;
  std::size_t offset = 0;
  std::size_t line = 1;
  std::size_t column = 1;
};

// Position-aware syntax error.
class QuerySyntaxError : public ParseError {
 public:
  QuerySyntaxError(const std::string& what, std::size_t line, std::size_t column)
      : ParseError(what + " at column " + std::to_string(column), line), column_(column) {}
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t column_;
};

class UnsupportedFeature : public Error {
 public:
  explicit UnsupportedFeature(const std::string& feature)
      : Error("unsupported feature: " + feature), feature_(feature) {}
  const std::string& feature() const noexcept { return feature_; }

 private:
  std::string feature_;
};

namespace detail {

inline bool is_name_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
inline bool is_name_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-';
}

}  // namespace detail

inline std::vector<Token> tokenize(std::string_view src) {
  std::vector<Token> out;
  std::size_t i = 0;
  std::size_t line = 1;
  std::size_t line_start = 0;

  auto fail = [&](const std::string& what, std::size_t at) -> void {
    throw QuerySyntaxError(what, line, at - line_start + 1);
  };
  auto push = [&](TokKind k, std::string text, std::size_t start) {
    out.push_back({k, std::move(text), start, line, start - line_start + 1});
  };

  while (i < src.size()) {
    const char c = src[i];
    if (c == '\n') {
      ++i;
      ++line;
      line_start = i;
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    if (c == '#') {
      while (i < src.size() && src[i] != '\n') ++i;
      continue;
    }
    const std::size_t start = i;
    if (c == '?' || c == '$') {
      ++i;
      while (i < src.size() && (std::isalnum(static_cast<unsigned char>(src[i])) || src[i] == '_')) ++i;
      if (i == start + 1) fail("empty variable name", start);
      push(TokKind::Var, std::string(src.substr(start + 1, i - start - 1)), start);
      continue;
    }
    if (c == '<') {
      // An IRI only if a '>' closes it before any whitespace; else an operator.
      std::size_t j = i + 1;
      while (j < src.size() && src[j] != '>' && !std::isspace(static_cast<unsigned char>(src[j])) && src[j] != '<' &&
             src[j] != '"')
        ++j;
      if (j < src.size() && src[j] == '>' && j > i + 1) {
        rdf::syntax::Cursor cur(src.substr(i, j - i + 1), line);
        std::string iri;
        try {
          iri = cur.read_iriref();
        } catch (const ParseError& e) {
          fail(e.what(), start);
        }
        push(TokKind::IriRef, std::move(iri), start);
        i = j + 1;
        continue;
      }
      if (i + 1 < src.size() && src[i + 1] == '=') {
        push(TokKind::Punct, "<=", start);
        i += 2;
      } else {
        push(TokKind::Punct, "<", start);
        ++i;
      }
      continue;
    }
    if (c == '"' || c == '\'') {
      if (src.substr(i, 3) == "\"\"\"" || src.substr(i, 3) == "'''") fail("long string literals are not supported", start);
      std::size_t j = i + 1;
      while (j < src.size() && src[j] != c && src[j] != '\n') j += src[j] == '\\' ? 2 : 1;
      if (j >= src.size() || src[j] != c) fail("unterminated string literal", start);
      rdf::syntax::Cursor cur(src.substr(i, j - i + 1), line);
      std::string body;
      try {
        body = cur.read_quoted();
      } catch (const ParseError& e) {
        fail(e.what(), start);
      }
      push(TokKind::String, std::move(body), start);
      i = j + 1;
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) ||
        (c == '.' && i + 1 < src.size() && std::isdigit(static_cast<unsigned char>(src[i + 1])))) {
      bool dot = false;
      bool exp = false;
      while (i < src.size()) {
        const char d = src[i];
        if (std::isdigit(static_cast<unsigned char>(d))) {
          ++i;
        } else if (d == '.' && !dot && !exp && i + 1 < src.size() && std::isdigit(static_cast<unsigned char>(src[i + 1]))) {
          dot = true;
          ++i;
        } else if ((d == 'e' || d == 'E') && !exp) {
          exp = true;
          ++i;
          if (i < src.size() && (src[i] == '+' || src[i] == '-')) ++i;
        } else {
          break;
        }
      }
      push(exp ? TokKind::Double : dot ? TokKind::Decimal : TokKind::Integer, std::string(src.substr(start, i - start)),
           start);
      continue;
    }
    if (c == '_' && i + 1 < src.size() && src[i + 1] == ':') {
      i += 2;
      while (i < src.size() && (std::isalnum(static_cast<unsigned char>(src[i])) || src[i] == '_')) ++i;
      if (i == start + 2) fail("empty blank node label", start);
      push(TokKind::BlankLabel, std::string(src.substr(start + 2, i - start - 2)), start);
      continue;
    }
    if (detail::is_name_start(c) || c == ':') {
      while (i < src.size() && detail::is_name_char(src[i])) ++i;
      if (i < src.size() && src[i] == ':') {
        ++i;
        while (i < src.size() && (detail::is_name_char(src[i]) ||
                                  (src[i] == '.' && i + 1 < src.size() && detail::is_name_char(src[i + 1]))))
          ++i;
        push(TokKind::PName, std::string(src.substr(start, i - start)), start);
      } else {
        push(TokKind::Word, std::string(src.substr(start, i - start)), start);
      }
      continue;
    }
    static constexpr std::string_view kTwo[] = {"&&", "||", "!=", ">=", "^^"};
    bool matched = false;
    for (auto op : kTwo) {
      if (src.substr(i, 2) == op) {
        push(TokKind::Punct, std::string(op), start);
        i += 2;
        matched = true;
        break;
      }
    }
    if (matched) continue;
    static constexpr std::string_view kOne = "{}().;,*+-/=>!@[]|^";
    if (kOne.find(c) != std::string_view::npos) {
      push(TokKind::Punct, std::string(1, c), start);
      ++i;
      continue;
    }
    fail(std::string("unexpected character '") + c + "'", start);
  }
  out.push_back({TokKind::End, "", src.size(), line, src.size() - line_start + 1});
  return out;
}

}  // namespace hpcoda::sparql
