#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "hpcoda/common/time.hpp"
#include "hpcoda/rdf/term.hpp"

// IRIs for individuals under the hpc namespace.
namespace hpcoda::kg::uri {

// Percent-encodes everything outside the RFC 3986 unreserved set.
inline std::string encode(std::string_view s) {
  static constexpr char kHex[] = "0123456789ABCDEF";
  std::string out;
  out.reserve(s.size());
  for (unsigned char c : s) {
    const bool unreserved = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
                            c == '-' || c == '.' || c == '_' || c == '~';
    if (unreserved) {
      out.push_back(static_cast<char>(c));
    } else {
      out.push_back('%');
      out.push_back(kHex[c >> 4]);
      out.push_back(kHex[c & 0xF]);
    }
  }
  return out;
}

inline std::string ns() { return std::string(rdf::vocab::kHpc); }
inline std::string id(std::int64_t v) { return std::to_string(v); }

inline std::string cls(std::string_view name) { return ns() + std::string(name); }
inline std::string data_center(std::int64_t dc) { return ns() + "datacenter/" + id(dc); }
inline std::string system(std::int64_t s) { return ns() + "system/" + id(s); }
inline std::string rack(std::int64_t r) { return ns() + "rack/" + id(r); }
inline std::string node(std::int64_t n) { return ns() + "node/" + id(n); }
inline std::string position(std::int64_t n) { return ns() + "position/" + id(n); }
inline std::string plugin(std::int64_t n, std::string_view name) {
  return ns() + "plugin/" + id(n) + "/" + encode(name);
}
inline std::string sensor(std::int64_t n, std::string_view name) {
  return ns() + "sensor/" + id(n) + "/" + encode(name);
}
inline std::string user(std::int64_t u) { return ns() + "user/" + id(u); }
inline std::string job(std::int64_t j) { return ns() + "job/" + id(j); }
inline std::string job_metric(std::int64_t j, std::string_view metric) {
  return ns() + "jobmetric/" + id(j) + "/" + encode(metric);
}
inline std::string time(std::int64_t ts) { return ns() + "time/" + id(ts); }
inline std::string reading(std::int64_t n, std::string_view sensor_name, std::int64_t ts) {
  return ns() + "reading/" + id(n) + "/" + encode(sensor_name) + "/" + id(ts);
}
// Legacy schema: one record per plugin per UTC day.
inline std::string data_record(std::int64_t n, std::string_view plugin_name, std::int64_t ts) {
  return ns() + "datarecord/" + id(n) + "/" + encode(plugin_name) + "/" + hpcoda::time::format_date(ts);
}

// Blank node labels. Must match [A-Za-z0-9_]+, so ids go in decimal and a
// negative timestamp is written with an 'm' prefix.
inline std::string signed_label(std::int64_t v) { return v < 0 ? "m" + std::to_string(-v) : std::to_string(v); }
inline std::string reading_label(std::int64_t n, std::int64_t sensor_ordinal, std::int64_t ts) {
  return "r" + signed_label(n) + "_" + signed_label(sensor_ordinal) + "_" + signed_label(ts);
}
inline std::string time_label(std::int64_t n, std::int64_t sensor_ordinal, std::int64_t ts) {
  return "t" + signed_label(n) + "_" + signed_label(sensor_ordinal) + "_" + signed_label(ts);
}

}  // namespace hpcoda::kg::uri
