#pragma once

#include <algorithm>
#include <cstddef>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "hpcoda/ingest/csv.hpp"
#include "hpcoda/sparql/eval.hpp"

namespace hpcoda::sparql {

inline std::string cell_text(const std::optional<Value>& v) { return v ? display(*v) : std::string(); }

// RFC 4180: header line, then one line per row, CRLF-free ("\n").
inline void write_csv(const ResultTable& t, std::ostream& out) {
  out << ingest::csv::join_row(t.columns);
  std::vector<std::string> fields;
  for (const auto& row : t.rows) {
    fields.clear();
    for (const auto& c : row) fields.push_back(cell_text(c));
    out << ingest::csv::join_row(fields);
  }
}

inline std::string to_csv(const ResultTable& t) {
  std::ostringstream out;
  write_csv(t, out);
  return out.str();
}

// Column-aligned table for terminals.
inline void write_text(const ResultTable& t, std::ostream& out) {
  std::vector<std::size_t> width;
  for (const auto& c : t.columns) width.push_back(c.size() + 1);
  std::vector<std::vector<std::string>> cells;
  cells.reserve(t.rows.size());
  for (const auto& row : t.rows) {
    auto& line = cells.emplace_back();
    for (std::size_t i = 0; i < row.size(); ++i) {
      line.push_back(cell_text(row[i]));
      width[i] = std::max(width[i], line.back().size());
    }
  }
  auto emit = [&](const std::vector<std::string>& fields) {
    std::string line;
    for (std::size_t i = 0; i < fields.size(); ++i) {
      if (i) line += "  ";
      line += fields[i];
      if (i + 1 < fields.size()) line.append(width[i] - fields[i].size(), ' ');
    }
    out << line << '\n';
  };
  std::vector<std::string> header;
  for (const auto& c : t.columns) header.push_back("?" + c);
  emit(header);
  std::vector<std::string> rule;
  for (const auto w : width) rule.emplace_back(w, '-');
  emit(rule);
  for (const auto& line : cells) emit(line);
  out << '(' << t.rows.size() << (t.rows.size() == 1 ? " row" : " rows") << ")\n";
}

inline std::string to_text(const ResultTable& t) {
  std::ostringstream out;
  write_text(t, out);
  return out.str();
}

}  // namespace hpcoda::sparql
