#pragma once

#include <charconv>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace hpcoda::time {

// Days since 1970-01-01 for a proleptic Gregorian date (Hinnant's algorithm).
constexpr std::int64_t days_from_civil(std::int64_t y, unsigned m, unsigned d) noexcept {
  y -= m <= 2;
  const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
  const auto yoe = static_cast<unsigned>(y - era * 400);
  const unsigned doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
  const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
  return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

struct CivilDate {
  std::int64_t year;
  unsigned month;
  unsigned day;
};

constexpr CivilDate civil_from_days(std::int64_t z) noexcept {
  z += 719468;
  const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
  const auto doe = static_cast<unsigned>(z - era * 146097);
  const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
  const std::int64_t y = static_cast<std::int64_t>(yoe) + era * 400;
  const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
  const unsigned mp = (5 * doy + 2) / 153;
  const unsigned d = doy - (153 * mp + 2) / 5 + 1;
  const unsigned m = mp < 10 ? mp + 3 : mp - 9;
  return {y + (m <= 2), m, d};
}

constexpr std::int64_t floor_div(std::int64_t a, std::int64_t b) noexcept {
  return a / b - ((a % b != 0) && ((a < 0) != (b < 0)));
}

namespace detail {

inline void put2(std::string& out, unsigned v) {
  out.push_back(static_cast<char>('0' + v / 10));
  out.push_back(static_cast<char>('0' + v % 10));
}

inline std::optional<unsigned> digits(std::string_view s, std::size_t pos, std::size_t n) {
  if (pos + n > s.size()) return std::nullopt;
  unsigned v = 0;
  for (std::size_t i = pos; i < pos + n; ++i) {
    if (s[i] < '0' || s[i] > '9') return std::nullopt;
    v = v * 10 + static_cast<unsigned>(s[i] - '0');
  }
  return v;
}

}  // namespace detail

// "YYYY-MM-DD"
inline std::string format_date(std::int64_t unix_seconds) {
  const CivilDate c = civil_from_days(floor_div(unix_seconds, 86400));
  std::string out = std::to_string(c.year);
  while (out.size() < 4) out.insert(out.begin(), '0');
  out.push_back('-');
  detail::put2(out, c.month);
  out.push_back('-');
  detail::put2(out, c.day);
  return out;
}

// 25-character ISO 8601 form with explicit UTC offset, e.g.
// "2022-02-01T00:00:20+00:00".
inline std::string format_iso8601(std::int64_t unix_seconds) {
  const std::int64_t secs = unix_seconds - floor_div(unix_seconds, 86400) * 86400;
  std::string out = format_date(unix_seconds);
  out.push_back('T');
  detail::put2(out, static_cast<unsigned>(secs / 3600));
  out.push_back(':');
  detail::put2(out, static_cast<unsigned>(secs / 60 % 60));
  out.push_back(':');
  detail::put2(out, static_cast<unsigned>(secs % 60));
  out += "+00:00";
  return out;
}

// Parses an xsd:dateTime lexical form (optional fractional seconds, optional
// "Z" or "+hh:mm" / "-hh:mm" offset; no offset is read as UTC). Returns
// seconds since the Unix epoch.
inline std::optional<double> parse_iso8601(std::string_view s) {
  std::size_t pos = 0;
  bool neg_year = false;
  if (!s.empty() && s[0] == '-') {
    neg_year = true;
    pos = 1;
  }
  std::size_t year_end = pos;
  while (year_end < s.size() && s[year_end] >= '0' && s[year_end] <= '9') ++year_end;
  if (year_end - pos < 4) return std::nullopt;
  std::int64_t year = 0;
  for (std::size_t i = pos; i < year_end; ++i) year = year * 10 + (s[i] - '0');
  if (neg_year) year = -year;
  pos = year_end;
  if (pos >= s.size() || s[pos] != '-') return std::nullopt;
  const auto month = detail::digits(s, pos + 1, 2);
  if (!month || pos + 3 >= s.size() || s[pos + 3] != '-') return std::nullopt;
  const auto day = detail::digits(s, pos + 4, 2);
  pos += 6;
  if (!day || pos >= s.size() || s[pos] != 'T') return std::nullopt;
  const auto hh = detail::digits(s, pos + 1, 2);
  const auto mm = detail::digits(s, pos + 4, 2);
  const auto ss = detail::digits(s, pos + 7, 2);
  if (!hh || !mm || !ss || s[pos + 3] != ':' || s[pos + 6] != ':') return std::nullopt;
  pos += 9;
  if (*month < 1 || *month > 12 || *day < 1 || *day > 31 || *hh > 24 || *mm > 59 || *ss > 60)
    return std::nullopt;
  double frac = 0.0;
  if (pos < s.size() && s[pos] == '.') {
    std::size_t end = pos + 1;
    while (end < s.size() && s[end] >= '0' && s[end] <= '9') ++end;
    if (end == pos + 1) return std::nullopt;
    double scale = 0.1;
    for (std::size_t i = pos + 1; i < end; ++i, scale /= 10) frac += (s[i] - '0') * scale;
    pos = end;
  }
  std::int64_t offset = 0;
  if (pos < s.size()) {
    if (s[pos] == 'Z') {
      ++pos;
    } else if (s[pos] == '+' || s[pos] == '-') {
      const auto oh = detail::digits(s, pos + 1, 2);
      const auto om = detail::digits(s, pos + 4, 2);
      if (!oh || !om || pos + 3 >= s.size() || s[pos + 3] != ':') return std::nullopt;
      offset = (static_cast<std::int64_t>(*oh) * 60 + *om) * 60;
      if (s[pos] == '-') offset = -offset;
      pos += 6;
    } else {
      return std::nullopt;
    }
  }
  if (pos != s.size()) return std::nullopt;
  const std::int64_t days = days_from_civil(year, *month, *day);
  const std::int64_t secs = days * 86400 + *hh * 3600 + *mm * 60 + *ss - offset;
  return static_cast<double>(secs) + frac;
}

// Parses an xsd:duration lexical form into seconds. Years and months are not
// convertible to a fixed number of seconds and are rejected.
inline std::optional<double> parse_duration(std::string_view s) {
  std::size_t pos = 0;
  bool negative = false;
  if (pos < s.size() && s[pos] == '-') {
    negative = true;
    ++pos;
  }
  if (pos >= s.size() || s[pos] != 'P') return std::nullopt;
  ++pos;
  if (pos == s.size()) return std::nullopt;
  double total = 0.0;
  bool in_time = false;
  bool any = false;
  while (pos < s.size()) {
    if (s[pos] == 'T') {
      if (in_time) return std::nullopt;
      in_time = true;
      ++pos;
      if (pos == s.size()) return std::nullopt;
      continue;
    }
    std::size_t end = pos;
    while (end < s.size() && ((s[end] >= '0' && s[end] <= '9') || s[end] == '.')) ++end;
    if (end == pos || end == s.size()) return std::nullopt;
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data() + pos, s.data() + end, v);
    if (ec != std::errc() || ptr != s.data() + end) return std::nullopt;
    const char unit = s[end];
    if (!in_time && unit == 'D') {
      total += v * 86400;
    } else if (in_time && unit == 'H') {
      total += v * 3600;
    } else if (in_time && unit == 'M') {
      total += v * 60;
    } else if (in_time && unit == 'S') {
      total += v;
    } else {
      return std::nullopt;
    }
    any = true;
    pos = end + 1;
  }
  if (!any) return std::nullopt;
  return negative ? -total : total;
}

// "PT<n>S"
inline std::string format_duration_seconds(std::int64_t seconds) {
  if (seconds < 0) return "-PT" + std::to_string(-seconds) + "S";
  return "PT" + std::to_string(seconds) + "S";
}

}  // namespace hpcoda::time
