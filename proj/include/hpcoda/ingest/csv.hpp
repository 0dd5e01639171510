#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "hpcoda/common/error.hpp"
#include "hpcoda/common/numeric.hpp"
#include "hpcoda/common/time.hpp"

// Comma-separated records with RFC 4180 quoting. Lines starting with '#'
// and blank lines are skipped.
namespace hpcoda::ingest::csv {

struct Record {
  std::size_t line = 0;  // 1-based line where the record starts
  std::vector<std::string> fields;
};

class Reader {
 public:
  Reader(std::string_view text, std::string source) : text_(text), source_(std::move(source)) {}

  // False at end of input.
  bool next(Record& rec) {
    rec.fields.clear();
    while (pos_ < text_.size()) {
      // Skip blank and comment lines.
      std::size_t p = pos_;
      while (p < text_.size() && (text_[p] == ' ' || text_[p] == '\t')) ++p;
      if (p < text_.size() && (text_[p] == '\n' || text_[p] == '\r' || text_[p] == '#')) {
        const std::size_t nl = text_.find('\n', p);
        pos_ = nl == std::string_view::npos ? text_.size() : nl + 1;
        ++line_;
        continue;
      }
      if (p >= text_.size()) {
        pos_ = p;
        break;
      }
      rec.line = line_;
      parse_record(rec);
      return true;
    }
    return false;
  }

  [[noreturn]] void fail(std::size_t line, const std::string& what) const {
    throw DataError(source_ + ":" + std::to_string(line) + ": " + what);
  }

  const std::string& source() const { return source_; }

 private:
  void parse_record(Record& rec) {
    std::string field;
    while (true) {
      field.clear();
      if (pos_ < text_.size() && text_[pos_] == '"') {
        ++pos_;
        while (true) {
          if (pos_ >= text_.size()) fail(rec.line, "unterminated quoted field");
          const char c = text_[pos_++];
          if (c == '"') {
            if (pos_ < text_.size() && text_[pos_] == '"') {
              field.push_back('"');
              ++pos_;
              continue;
            }
            break;
          }
          if (c == '\n') ++line_;
          field.push_back(c);
        }
        if (pos_ < text_.size() && text_[pos_] != ',' && text_[pos_] != '\n' && text_[pos_] != '\r')
          fail(rec.line, "unexpected character after closing quote");
      } else {
        while (pos_ < text_.size() && text_[pos_] != ',' && text_[pos_] != '\n' && text_[pos_] != '\r') {
          if (text_[pos_] == '"') fail(rec.line, "quote inside unquoted field");
          field.push_back(text_[pos_++]);
        }
      }
      rec.fields.push_back(field);
      if (pos_ < text_.size() && text_[pos_] == ',') {
        ++pos_;
        continue;
      }
      if (pos_ < text_.size() && text_[pos_] == '\r') ++pos_;
      if (pos_ < text_.size() && text_[pos_] == '\n') ++pos_;
      ++line_;
      return;
    }
  }

  std::string_view text_;
  std::string source_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
};

inline bool needs_quotes(std::string_view s) {
  if (s.empty()) return false;
  if (s.front() == '#' || s.front() == ' ' || s.back() == ' ') return true;
  return s.find_first_of(",\"\r\n") != std::string_view::npos;
}

inline void append_field(std::string& out, std::string_view s) {
  if (!needs_quotes(s)) {
    out += s;
    return;
  }
  out.push_back('"');
  for (char c : s) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
}

inline std::string join_row(const std::vector<std::string>& fields) {
  std::string out;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out.push_back(',');
    append_field(out, fields[i]);
  }
  out.push_back('\n');
  return out;
}

// Typed field accessors that report the file and line on failure.
struct FieldParser {
  const Reader& reader;
  const Record& rec;

  const std::string& text(std::size_t i) const { return rec.fields[i]; }

  std::int64_t integer(std::size_t i, std::string_view column) const {
    const auto v = parse_int64(rec.fields[i]);
    if (!v) reader.fail(rec.line, "column " + std::string(column) + ": not an integer: '" + rec.fields[i] + "'");
    return *v;
  }

  double real(std::size_t i, std::string_view column) const {
    const auto v = parse_double(rec.fields[i]);
    if (!v) reader.fail(rec.line, "column " + std::string(column) + ": not a number: '" + rec.fields[i] + "'");
    return *v;
  }

  // Unix seconds, or an ISO 8601 timestamp normalized to Unix seconds.
  std::int64_t timestamp(std::size_t i, std::string_view column) const {
    if (const auto v = parse_int64(rec.fields[i])) return *v;
    if (const auto iso = time::parse_iso8601(rec.fields[i])) return static_cast<std::int64_t>(std::floor(*iso));
    reader.fail(rec.line, "column " + std::string(column) + ": not a timestamp: '" + rec.fields[i] + "'");
  }
};

}  // namespace hpcoda::ingest::csv
