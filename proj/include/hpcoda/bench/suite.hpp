#pragma once

#include <array>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <map>
#include <ostream>
#include <regex>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "hpcoda/bench/oracle.hpp"
#include "hpcoda/common/fs.hpp"
#include "hpcoda/kg/builder.hpp"
#include "hpcoda/sparql/eval.hpp"

namespace hpcoda::bench {

inline constexpr std::array<std::string_view, 36> kQuestionIds{
    "C1.1", "C1.2", "C1.3", "C1.4", "C1.5", "C1.6",                  //
    "C2.1", "C2.2", "C2.3", "C2.4", "C2.5", "C2.6", "C2.7", "C2.8",  //
    "C3.1", "C3.2", "C3.3", "C3.4", "C3.5", "C3.6", "C3.7", "C3.8", "C3.9",
    "C4.1", "C4.2", "C4.3", "C4.4", "C4.5", "C4.6",  //
    "C5.1", "C5.2",                                  //
    "C6.1", "C6.2", "C6.3", "C6.4", "C6.5"};

// key = value lines; '#' starts a comment line; "<id>.<key>" scopes a key to one question.
struct Manifest {
  std::map<std::string, std::string> globals;
  std::map<std::string, std::map<std::string, std::string>> per_question;

  Params params_for(std::string_view id) const {
    auto merged = globals;
    if (const auto it = per_question.find(std::string(id)); it != per_question.end())
      for (const auto& [k, v] : it->second) merged[k] = v;
    return Params(std::move(merged));
  }
};

inline std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

inline Manifest parse_manifest(std::string_view text, const std::string& origin = "manifest") {
  static const std::regex kScoped(R"(^(C[0-9]+\.[0-9]+)\.(.+)$)");
  Manifest m;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    const std::string_view raw = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    const auto line = trim(raw);
    if (line.empty() || line.front() == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ParseError(origin + ": expected 'key = value'", line_no);
    const std::string key(trim(line.substr(0, eq)));
    const std::string value(trim(line.substr(eq + 1)));
    if (key.empty()) throw ParseError(origin + ": empty key", line_no);
    std::smatch sm;
    if (std::regex_match(key, sm, kScoped)) {
      m.per_question[sm[1]][sm[2]] = value;
    } else {
      m.globals[key] = value;
    }
  }
  return m;
}

inline Manifest load_manifest(const std::filesystem::path& path) { return parse_manifest(read_file(path), path.string()); }

// Replaces ${name}; unknown names are an error.
inline std::string substitute(std::string_view text, const Params& params) {
  std::string out;
  std::size_t i = 0;
  while (i < text.size()) {
    const auto open = text.find("${", i);
    if (open == std::string_view::npos) {
      out.append(text.substr(i));
      break;
    }
    out.append(text.substr(i, open - i));
    const auto close = text.find('}', open);
    if (close == std::string_view::npos) throw DataError("unterminated ${ placeholder");
    out += params.str(std::string(text.substr(open + 2, close - open - 2)));
    i = close + 1;
  }
  return out;
}

// Splits a query file into stages at lines starting with "#---".
inline std::vector<std::string> split_stages(std::string_view text) {
  std::vector<std::string> stages(1);
  std::size_t pos = 0;
  while (pos < text.size()) {
    auto nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    const auto line = text.substr(pos, nl - pos);
    if (line.substr(0, 4) == "#---") {
      stages.emplace_back();
    } else {
      stages.back().append(line);
      stages.back().push_back('\n');
    }
    pos = nl + 1;
  }
  return stages;
}

// Keeps rows of `first` whose key column has count 1 in `second`
// (second: key column, count column).
inline sparql::ResultTable combine_exclusive(const sparql::ResultTable& first, const sparql::ResultTable& second) {
  if (second.columns.size() < 2) throw DataError("exclusive combine needs a (key, count) stage");
  const std::size_t key_col = first.column_index(second.columns[0]);
  std::set<std::string> exclusive;
  for (const auto& row : second.rows)
    if (row[0] && row[1] && row[1]->is_numeric() && row[1]->num == 1.0) exclusive.insert(sparql::display(*row[0]));
  sparql::ResultTable out;
  out.columns = first.columns;
  for (const auto& row : first.rows)
    if (row[key_col] && exclusive.count(sparql::display(*row[key_col]))) out.rows.push_back(row);
  return out;
}

struct QuestionResult {
  std::string id;
  bool found = false;     // query file present
  bool parsed = false;    // every stage parsed
  bool evaluated = false;
  std::size_t rows = 0;
  std::size_t expected_rows = 0;
  bool oracle_match = false;
  double elapsed_ms = 0;
  std::string message;  // first error, if any
  sparql::ResultTable table;

  bool passed() const { return parsed && evaluated && oracle_match; }
};

struct SuiteResult {
  std::vector<QuestionResult> entries;

  std::size_t parsed() const { return count([](const auto& e) { return e.parsed; }); }
  std::size_t matched() const { return count([](const auto& e) { return e.oracle_match; }); }
  bool all_passed() const { return entries.size() == kQuestionIds.size() && matched() == entries.size(); }
  double total_ms() const {
    double t = 0;
    for (const auto& e : entries) t += e.elapsed_ms;
    return t;
  }

 private:
  template <class F>
  std::size_t count(F f) const {
    std::size_t n = 0;
    for (const auto& e : entries) n += f(e) ? 1 : 0;
    return n;
  }
};

// Graph settings the suite queries are written against.
inline kg::BuildOptions suite_build_options() {
  kg::BuildOptions o;
  o.mode = kg::SchemaMode::UnifiedUri;
  o.timestamp_encoding = kg::TimestampEncoding::UnixSeconds;
  return o;
}

inline QuestionResult run_question(std::string_view id, const std::string& text, const rdf::TripleStore& store,
                                   const ingest::Dataset& oracle_ds, const Manifest& manifest) {
  QuestionResult q;
  q.id = std::string(id);
  q.found = true;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    Params params = manifest.params_for(id);
    const auto stages = split_stages(text);
    std::vector<sparql::ResultTable> results;
    for (std::size_t s = 0; s < stages.size(); ++s) {
      // Earlier stage's first row feeds placeholders of the next one.
      if (s > 0 && params.str_or("combine", "") != "exclusive" && !results.back().rows.empty()) {
        const auto& prev = results.back();
        for (std::size_t c = 0; c < prev.columns.size(); ++c)
          if (prev.rows[0][c]) params.set(prev.columns[c], sparql::display(*prev.rows[0][c]));
      }
      const sparql::Query query = sparql::parse_query(substitute(stages[s], params));
      results.push_back(sparql::evaluate(query, store));
    }
    q.parsed = true;
    sparql::ResultTable final_table = params.str_or("combine", "") == "exclusive" && results.size() == 2
                                          ? combine_exclusive(results[0], results[1])
                                          : std::move(results.back());
    q.evaluated = true;
    q.rows = final_table.rows.size();
    const Expected want = oracle_answer(q.id, oracle_ds, params);
    q.expected_rows = want.rows.size();
    q.oracle_match = tables_match(to_table(final_table), want);
    if (!q.oracle_match) q.message = "result differs from the tabular oracle";
    q.table = std::move(final_table);
  } catch (const std::exception& e) {
    q.message = e.what();
  }
  q.elapsed_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  return q;
}

// Runs every question sequentially. A missing or failing query is recorded
// and the suite moves on.
inline SuiteResult run_suite(const rdf::TripleStore& store, const std::filesystem::path& query_dir,
                             const ingest::Dataset& oracle_ds, const Manifest& manifest) {
  SuiteResult res;
  for (const auto id : kQuestionIds) {
    const auto path = query_dir / (std::string(id) + ".rq");
    std::string text;
    try {
      text = read_file(path);
    } catch (const std::exception& e) {
      QuestionResult q;
      q.id = std::string(id);
      q.message = e.what();
      res.entries.push_back(std::move(q));
      continue;
    }
    res.entries.push_back(run_question(id, text, store, oracle_ds, manifest));
  }
  return res;
}

inline void write_suite_text(const SuiteResult& r, std::ostream& out, bool with_time = true) {
  for (const auto& e : r.entries) {
    out << e.id << "  " << (e.passed() ? "ok  " : "FAIL") << "  rows=" << e.rows << " expected=" << e.expected_rows;
    if (with_time) {
      std::ostringstream t;
      t.setf(std::ios::fixed);
      t.precision(1);
      t << e.elapsed_ms;
      out << "  " << t.str() << " ms";
    }
    if (!e.message.empty()) out << "  (" << e.message << ')';
    out << '\n';
  }
  out << r.parsed() << '/' << r.entries.size() << " parsed, " << r.matched() << '/' << r.entries.size()
      << " match the oracle\n";
}

}  // namespace hpcoda::bench
