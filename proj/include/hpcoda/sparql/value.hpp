#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "hpcoda/common/numeric.hpp"
#include "hpcoda/common/time.hpp"
#include "hpcoda/rdf/term.hpp"

namespace hpcoda::sparql {

enum class ValueKind : std::uint8_t {
  Error,
  Blank,
  Iri,
  Boolean,
  Integer,
  Decimal,
  Float,
  Double,
  DateTime,
  Duration,
  String,
};

// Runtime value. `text` always holds a display form: the IRI, blank label,
// string, or a lexical form. Numbers also carry `num` (and `ival` for
// integers); dateTime and duration carry seconds in `num`.
struct Value {
  ValueKind kind = ValueKind::Error;
  std::string text;
  double num = 0.0;
  std::int64_t ival = 0;
  bool boolean = false;

  bool is_error() const noexcept { return kind == ValueKind::Error; }
  bool is_numeric() const noexcept {
    return kind == ValueKind::Integer || kind == ValueKind::Decimal || kind == ValueKind::Float ||
           kind == ValueKind::Double;
  }

  static Value error() { return {}; }
  static Value iri(std::string s) {
    Value v;
    v.kind = ValueKind::Iri;
    v.text = std::move(s);
    return v;
  }
  static Value blank(std::string s) {
    Value v;
    v.kind = ValueKind::Blank;
    v.text = std::move(s);
    return v;
  }
  static Value string(std::string s) {
    Value v;
    v.kind = ValueKind::String;
    v.text = std::move(s);
    return v;
  }
  static Value boolean_value(bool b) {
    Value v;
    v.kind = ValueKind::Boolean;
    v.boolean = b;
    v.text = b ? "true" : "false";
    return v;
  }
  static Value integer(std::int64_t i) {
    Value v;
    v.kind = ValueKind::Integer;
    v.ival = i;
    v.num = static_cast<double>(i);
    v.text = std::to_string(i);
    return v;
  }
  // Decimal, Float or Double.
  static Value real(double d, ValueKind kind = ValueKind::Double) {
    Value v;
    v.kind = kind;
    v.num = d;
    v.text = format_double(d);
    return v;
  }
  static Value date_time(double seconds) {
    Value v;
    v.kind = ValueKind::DateTime;
    v.num = seconds;
    const double whole = std::floor(seconds);
    v.text = whole == seconds ? time::format_iso8601(static_cast<std::int64_t>(whole)) : format_double(seconds);
    return v;
  }
};

inline Value from_term(const rdf::Term& t) {
  using rdf::Datatype;
  switch (t.kind()) {
    case rdf::TermKind::Iri: return Value::iri(t.text());
    case rdf::TermKind::BlankNode: return Value::blank(t.text());
    case rdf::TermKind::Literal: break;
  }
  Value v;
  v.text = t.text();
  switch (t.datatype()) {
    case Datatype::String: v.kind = ValueKind::String; return v;
    case Datatype::Integer: {
      const auto i = parse_int64(t.text());
      if (!i) return Value::error();
      v.kind = ValueKind::Integer;
      v.ival = *i;
      v.num = static_cast<double>(*i);
      return v;
    }
    case Datatype::Decimal:
    case Datatype::Float:
    case Datatype::Double: {
      const auto d = parse_double(t.text());
      if (!d) return Value::error();
      v.kind = t.datatype() == Datatype::Decimal ? ValueKind::Decimal
               : t.datatype() == Datatype::Float ? ValueKind::Float
                                                 : ValueKind::Double;
      v.num = *d;
      return v;
    }
    case Datatype::Boolean:
      v.kind = ValueKind::Boolean;
      v.boolean = t.text() == "true" || t.text() == "1";
      return v;
    case Datatype::DateTime: {
      const auto s = time::parse_iso8601(t.text());
      if (!s) return Value::error();
      v.kind = ValueKind::DateTime;
      v.num = *s;
      return v;
    }
    case Datatype::Duration: {
      const auto s = time::parse_duration(t.text());
      if (!s) return Value::error();
      v.kind = ValueKind::Duration;
      v.num = *s;
      return v;
    }
  }
  return Value::error();
}

// Cell text for result output.
inline std::string display(const Value& v) {
  if (v.kind == ValueKind::Blank) return "_:" + v.text;
  if (v.kind == ValueKind::Error) return "";
  return v.text;
}

// Identity key for DISTINCT, GROUP BY and COUNT(DISTINCT).
inline std::string identity_key(const Value& v) {
  std::string k(1, static_cast<char>('A' + static_cast<int>(v.kind)));
  k += v.text;
  return k;
}

// Effective boolean value; nullopt is a type error.
inline std::optional<bool> effective_boolean(const Value& v) {
  switch (v.kind) {
    case ValueKind::Boolean: return v.boolean;
    case ValueKind::String: return !v.text.empty();
    case ValueKind::Integer: return v.ival != 0;
    case ValueKind::Decimal:
    case ValueKind::Float:
    case ValueKind::Double: return !(v.num == 0.0 || std::isnan(v.num));
    default: return std::nullopt;
  }
}

namespace detail {

inline int numeric_rank(ValueKind k) {
  switch (k) {
    case ValueKind::Integer: return 0;
    case ValueKind::Decimal: return 1;
    case ValueKind::Float: return 2;
    default: return 3;
  }
}

inline ValueKind promote(ValueKind a, ValueKind b) { return numeric_rank(a) >= numeric_rank(b) ? a : b; }

}  // namespace detail

enum class ArithOp { Add, Sub, Mul, Div };

// Numeric arithmetic with xsd type promotion. integer / integer is decimal.
// dateTime - dateTime is the difference in days, as a decimal.
inline Value arithmetic(ArithOp op, const Value& a, const Value& b) {
  if (a.kind == ValueKind::DateTime && b.kind == ValueKind::DateTime && op == ArithOp::Sub)
    return Value::real((a.num - b.num) / 86400.0, ValueKind::Decimal);
  if (!a.is_numeric() || !b.is_numeric()) return Value::error();
  const ValueKind kind = detail::promote(a.kind, b.kind);
  if (kind == ValueKind::Integer && op != ArithOp::Div) {
    std::int64_t r = 0;
    bool overflow = false;
    switch (op) {
      case ArithOp::Add: overflow = __builtin_add_overflow(a.ival, b.ival, &r); break;
      case ArithOp::Sub: overflow = __builtin_sub_overflow(a.ival, b.ival, &r); break;
      case ArithOp::Mul: overflow = __builtin_mul_overflow(a.ival, b.ival, &r); break;
      case ArithOp::Div: break;
    }
    if (overflow) return Value::real(op == ArithOp::Add   ? a.num + b.num
                                     : op == ArithOp::Sub ? a.num - b.num
                                                          : a.num * b.num,
                                     ValueKind::Decimal);
    return Value::integer(r);
  }
  const ValueKind out = kind == ValueKind::Integer ? ValueKind::Decimal : kind;
  switch (op) {
    case ArithOp::Add: return Value::real(a.num + b.num, out);
    case ArithOp::Sub: return Value::real(a.num - b.num, out);
    case ArithOp::Mul: return Value::real(a.num * b.num, out);
    case ArithOp::Div:
      if (b.num == 0.0 && (out == ValueKind::Decimal)) return Value::error();
      return Value::real(a.num / b.num, out);
  }
  return Value::error();
}

inline Value negate(const Value& a) {
  if (!a.is_numeric()) return Value::error();
  if (a.kind == ValueKind::Integer) return Value::integer(-a.ival);
  return Value::real(-a.num, a.kind);
}

enum class CompareOp { Eq, Ne, Lt, Le, Gt, Ge };

// Three-way comparison in the value space; nullopt when incomparable.
inline std::optional<int> compare_values(const Value& a, const Value& b) {
  auto cmp = [](auto x, auto y) { return x < y ? -1 : (y < x ? 1 : 0); };
  if (a.is_numeric() && b.is_numeric()) {
    if (a.kind == ValueKind::Integer && b.kind == ValueKind::Integer) return cmp(a.ival, b.ival);
    if (std::isnan(a.num) || std::isnan(b.num)) return std::nullopt;
    return cmp(a.num, b.num);
  }
  if (a.kind != b.kind) return std::nullopt;
  switch (a.kind) {
    case ValueKind::String:
    case ValueKind::Iri:
    case ValueKind::Blank: return cmp(a.text, b.text);
    case ValueKind::Boolean: return cmp(a.boolean, b.boolean);
    case ValueKind::DateTime:
    case ValueKind::Duration: return cmp(a.num, b.num);
    default: return std::nullopt;
  }
}

inline Value compare(CompareOp op, const Value& a, const Value& b) {
  if (a.is_error() || b.is_error()) return Value::error();
  const auto c = compare_values(a, b);
  if (op == CompareOp::Eq || op == CompareOp::Ne) {
    // Values of different kinds are simply unequal.
    const bool eq = c && *c == 0;
    return Value::boolean_value(op == CompareOp::Eq ? eq : !eq);
  }
  // Ordering IRIs or blank nodes is not defined by SPARQL operators.
  if (!c || a.kind == ValueKind::Iri || a.kind == ValueKind::Blank) return Value::error();
  switch (op) {
    case CompareOp::Lt: return Value::boolean_value(*c < 0);
    case CompareOp::Le: return Value::boolean_value(*c <= 0);
    case CompareOp::Gt: return Value::boolean_value(*c > 0);
    case CompareOp::Ge: return Value::boolean_value(*c >= 0);
    default: return Value::error();
  }
}

// Total order used by ORDER BY, MIN and MAX:
// unbound/error < blank < IRI < boolean < numeric < dateTime < duration < string.
inline int order_rank(const Value* v) {
  if (!v || v->is_error()) return 0;
  switch (v->kind) {
    case ValueKind::Blank: return 1;
    case ValueKind::Iri: return 2;
    case ValueKind::Boolean: return 3;
    case ValueKind::Integer:
    case ValueKind::Decimal:
    case ValueKind::Float:
    case ValueKind::Double: return 4;
    case ValueKind::DateTime: return 5;
    case ValueKind::Duration: return 6;
    case ValueKind::String: return 7;
    default: return 0;
  }
}

inline int order_compare(const Value* a, const Value* b) {
  const int ra = order_rank(a);
  const int rb = order_rank(b);
  if (ra != rb) return ra < rb ? -1 : 1;
  if (ra == 0) return 0;
  if (const auto c = compare_values(*a, *b); c && *c != 0) return *c;
  // Equal in value space (or NaN): fall back to the lexical form for a total order.
  return a->text < b->text ? -1 : (b->text < a->text ? 1 : 0);
}

// xsd:* constructor casts.
inline Value cast_to(rdf::Datatype dt, const Value& v) {
  using rdf::Datatype;
  if (v.is_error()) return v;
  switch (dt) {
    case Datatype::DateTime:
      if (v.kind == ValueKind::DateTime) return v;
      if (v.kind == ValueKind::Integer) return Value::date_time(static_cast<double>(v.ival));
      if (v.is_numeric()) return Value::date_time(v.num);
      if (v.kind == ValueKind::String) {
        if (const auto s = time::parse_iso8601(v.text)) {
          Value out = Value::date_time(*s);
          out.text = v.text;
          return out;
        }
        if (const auto i = parse_int64(v.text)) return Value::date_time(static_cast<double>(*i));
      }
      return Value::error();
    case Datatype::Integer:
      if (v.kind == ValueKind::Integer) return v;
      if (v.is_numeric()) {
        if (!std::isfinite(v.num)) return Value::error();
        return Value::integer(static_cast<std::int64_t>(std::trunc(v.num)));
      }
      if (v.kind == ValueKind::Boolean) return Value::integer(v.boolean ? 1 : 0);
      if (v.kind == ValueKind::String) {
        if (const auto i = parse_int64(v.text)) return Value::integer(*i);
      }
      return Value::error();
    case Datatype::Decimal:
    case Datatype::Float:
    case Datatype::Double: {
      const ValueKind kind = dt == Datatype::Decimal ? ValueKind::Decimal
                             : dt == Datatype::Float ? ValueKind::Float
                                                     : ValueKind::Double;
      if (v.is_numeric()) return Value::real(v.num, kind);
      if (v.kind == ValueKind::Boolean) return Value::real(v.boolean ? 1.0 : 0.0, kind);
      if (v.kind == ValueKind::String) {
        if (const auto d = parse_double(v.text)) return Value::real(*d, kind);
      }
      return Value::error();
    }
    case Datatype::String:
      if (v.kind == ValueKind::Blank) return Value::error();
      return Value::string(v.text);
    case Datatype::Boolean:
      if (v.kind == ValueKind::Boolean) return v;
      if (v.is_numeric()) return Value::boolean_value(v.num != 0.0);
      if (v.kind == ValueKind::String && (v.text == "true" || v.text == "false" || v.text == "1" || v.text == "0"))
        return Value::boolean_value(v.text == "true" || v.text == "1");
      return Value::error();
    case Datatype::Duration:
      if (v.kind == ValueKind::Duration) return v;
      if (v.kind == ValueKind::String) {
        if (const auto s = time::parse_duration(v.text)) {
          Value out;
          out.kind = ValueKind::Duration;
          out.num = *s;
          out.text = v.text;
          return out;
        }
      }
      return Value::error();
  }
  return Value::error();
}

}  // namespace hpcoda::sparql
