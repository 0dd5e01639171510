#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "hpcoda/rdf/term.hpp"
#include "hpcoda/sparql/value.hpp"

namespace hpcoda::sparql {

enum class ExprKind { Var, Const, Not, Neg, Or, And, Compare, Arith, Cast, Str, Bound, Aggregate };

enum class AggKind { Count, Sum, Avg, Min, Max };

struct Expr;
using ExprPtr = std::unique_ptr<Expr>;

struct Expr {
  ExprKind kind = ExprKind::Const;
  std::string var;              // Var, Bound
  std::size_t slot = 0;         // resolved variable slot (Var, Bound)
  Value constant;               // Const
  CompareOp cmp = CompareOp::Eq;
  ArithOp arith = ArithOp::Add;
  rdf::Datatype cast = rdf::Datatype::String;
  AggKind agg = AggKind::Count;
  bool distinct = false;        // Aggregate
  bool star = false;            // COUNT(*)
  std::vector<ExprPtr> args;

  static ExprPtr make(ExprKind k) {
    auto e = std::make_unique<Expr>();
    e->kind = k;
    return e;
  }
};

inline bool contains_aggregate(const Expr& e) {
  if (e.kind == ExprKind::Aggregate) return true;
  for (const auto& a : e.args)
    if (contains_aggregate(*a)) return true;
  return false;
}

// Variables referenced outside aggregate arguments.
inline void collect_free_vars(const Expr& e, std::vector<std::string>& out) {
  if (e.kind == ExprKind::Aggregate) return;
  if (e.kind == ExprKind::Var || e.kind == ExprKind::Bound) out.push_back(e.var);
  for (const auto& a : e.args) collect_free_vars(*a, out);
}

inline void collect_all_vars(const Expr& e, std::vector<std::string>& out) {
  if (e.kind == ExprKind::Var || e.kind == ExprKind::Bound) out.push_back(e.var);
  for (const auto& a : e.args) collect_all_vars(*a, out);
}

// A triple pattern position: variable name or constant term.
struct PatternTerm {
  std::variant<std::string, rdf::Term> value;

  bool is_var() const { return std::holds_alternative<std::string>(value); }
  const std::string& var() const { return std::get<std::string>(value); }
  const rdf::Term& term() const { return std::get<rdf::Term>(value); }
};

struct TriplePatternAst {
  PatternTerm s, p, o;
};

struct Bind {
  ExprPtr expr;
  std::string var;
};

struct SelectItem {
  std::string var;
  ExprPtr expr;  // null for a plain variable
};

struct OrderKey {
  ExprPtr expr;
  bool descending = false;
};

struct Query {
  std::map<std::string, std::string> prefixes;
  bool distinct = false;
  bool select_all = false;
  std::vector<SelectItem> select;
  std::vector<TriplePatternAst> patterns;
  std::vector<ExprPtr> filters;
  std::vector<Bind> binds;
  std::vector<std::string> group_by;
  std::vector<ExprPtr> having;
  std::vector<OrderKey> order_by;
  std::optional<std::size_t> limit;
  std::optional<std::size_t> offset;

  // All variables in slot order; filled by the parser's validation pass.
  std::vector<std::string> variables;

  bool is_aggregate() const {
    if (!group_by.empty() || !having.empty()) return true;
    for (const auto& s : select)
      if (s.expr && contains_aggregate(*s.expr)) return true;
    for (const auto& o : order_by)
      if (contains_aggregate(*o.expr)) return true;
    return false;
  }

  std::vector<std::string> column_names() const {
    std::vector<std::string> out;
    for (const auto& s : select) out.push_back(s.var);
    return out;
  }
};

}  // namespace hpcoda::sparql
