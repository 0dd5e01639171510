#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <variant>
#include <vector>

#include "hpcoda/rdf/triple_store.hpp"
#include "hpcoda/sparql/ast.hpp"
#include "hpcoda/sparql/parser.hpp"
#include "hpcoda/sparql/value.hpp"

namespace hpcoda::sparql {

struct ResultTable {
  std::vector<std::string> columns;
  std::vector<std::vector<std::optional<Value>>> rows;

  std::size_t column_index(std::string_view name) const {
    for (std::size_t i = 0; i < columns.size(); ++i)
      if (columns[i] == name) return i;
    throw Error("no result column '" + std::string(name) + "'");
  }
};

namespace detail {

using Cell = std::variant<std::monostate, rdf::TermId, Value>;
using Row = std::vector<Cell>;

struct AggState {
  std::int64_t count = 0;
  bool error = false;
  ValueKind kind = ValueKind::Integer;
  std::int64_t isum = 0;
  bool int_overflow = false;
  long double dsum = 0;
  std::optional<Value> best;
  std::unordered_set<std::string> seen;
};

class Evaluator {
 public:
  Evaluator(const Query& q, const rdf::TripleStore& store) : q_(q), store_(store) {}

  ResultTable run() {
    ResultTable out;
    out.columns = q_.column_names();
    n_pattern_vars_ = count_pattern_vars();
    for (std::size_t i = 0; i < q_.select.size(); ++i) select_slots_.push_back(slot_of(q_.select[i].var));
    aggregate_ = q_.is_aggregate();
    if (aggregate_) {
      for (const auto& s : q_.select)
        if (s.expr) collect_aggs(*s.expr);
      for (const auto& h : q_.having) collect_aggs(*h);
      for (const auto& o : q_.order_by) collect_aggs(*o.expr);
      for (const auto& g : q_.group_by) group_slots_.push_back(slot_of(g));
    }
    early_stop_at_ = (!aggregate_ && q_.order_by.empty() && !q_.distinct && q_.limit)
                         ? std::optional<std::size_t>(q_.offset.value_or(0) + *q_.limit)
                         : std::nullopt;

    if (prepare_patterns()) {
      Row row(q_.variables.size());
      join(0, row);
    }

    if (aggregate_) finish_groups();
    std::vector<Entry>& entries = entries_;
    if (!q_.order_by.empty()) {
      std::stable_sort(entries.begin(), entries.end(), [&](const Entry& a, const Entry& b) {
        for (std::size_t k = 0; k < q_.order_by.size(); ++k) {
          const Value* va = a.keys[k] ? &*a.keys[k] : nullptr;
          const Value* vb = b.keys[k] ? &*b.keys[k] : nullptr;
          const int c = order_compare(va, vb);
          if (c != 0) return q_.order_by[k].descending ? c > 0 : c < 0;
        }
        return false;
      });
    }
    std::unordered_set<std::string> seen;
    std::size_t skipped = 0;
    const std::size_t offset = q_.offset.value_or(0);
    for (auto& e : entries) {
      std::vector<std::optional<Value>> cells;
      cells.reserve(e.cells.size());
      for (auto& c : e.cells) cells.push_back(to_optional(c));
      if (q_.distinct) {
        std::string key;
        for (const auto& c : cells) {
          key += c ? identity_key(*c) : std::string("-");
          key.push_back('\x1f');
        }
        if (!seen.insert(std::move(key)).second) continue;
      }
      if (skipped < offset) {
        ++skipped;
        continue;
      }
      if (q_.limit && out.rows.size() >= *q_.limit) break;
      out.rows.push_back(std::move(cells));
    }
    return out;
  }

 private:
  struct Entry {
    std::vector<Cell> cells;
    std::vector<std::optional<Value>> keys;
  };

  struct PlannedPattern {
    const TriplePatternAst* ast = nullptr;
    std::array<std::optional<rdf::TermId>, 3> constant;
    std::array<std::optional<std::size_t>, 3> slot;
  };

  struct Group {
    Row row;
    std::vector<AggState> states;
  };

  // --- setup
  std::size_t slot_of(const std::string& v) const {
    const auto it = std::find(q_.variables.begin(), q_.variables.end(), v);
    if (it == q_.variables.end()) throw Error("unresolved variable ?" + v);
    return static_cast<std::size_t>(it - q_.variables.begin());
  }

  std::size_t count_pattern_vars() const {
    std::unordered_set<std::string> vars;
    for (const auto& tp : q_.patterns)
      for (const PatternTerm* pt : {&tp.s, &tp.p, &tp.o})
        if (pt->is_var()) vars.insert(pt->var());
    return vars.size();
  }

  void collect_aggs(const Expr& e) {
    if (e.kind == ExprKind::Aggregate) {
      if (!agg_index_.count(&e)) {
        agg_index_[&e] = aggs_.size();
        aggs_.push_back(&e);
      }
      return;
    }
    for (const auto& a : e.args) collect_aggs(*a);
  }

  // Resolves constants and picks a join order. Returns false when a
  // constant is absent from the store, so the pattern group has no solutions.
  bool prepare_patterns() {
    std::vector<PlannedPattern> pending;
    for (const auto& tp : q_.patterns) {
      PlannedPattern pp;
      pp.ast = &tp;
      const PatternTerm* pos[3] = {&tp.s, &tp.p, &tp.o};
      for (std::size_t i = 0; i < 3; ++i) {
        if (pos[i]->is_var()) {
          pp.slot[i] = slot_of(pos[i]->var());
        } else {
          const auto id = store_.lookup(pos[i]->term());
          if (!id) return false;
          pp.constant[i] = *id;
        }
      }
      pending.push_back(pp);
    }

    // Greedy: most bound positions first; ties go to the smaller
    // constant-only match, then to the written order.
    std::vector<bool> bound(q_.variables.size(), false);
    while (!pending.empty()) {
      std::size_t best = 0;
      int best_bound = -1;
      std::size_t best_est = 0;
      for (std::size_t i = 0; i < pending.size(); ++i) {
        const auto& pp = pending[i];
        int b = 0;
        for (std::size_t k = 0; k < 3; ++k)
          if (pp.constant[k] || (pp.slot[k] && bound[*pp.slot[k]])) ++b;
        const std::size_t est = store_.match_ids({pp.constant[0], pp.constant[1], pp.constant[2]}).size();
        if (b > best_bound || (b == best_bound && est < best_est)) {
          best = i;
          best_bound = b;
          best_est = est;
        }
      }
      const PlannedPattern pp = pending[best];
      pending.erase(pending.begin() + static_cast<std::ptrdiff_t>(best));
      for (const auto& s : pp.slot)
        if (s) bound[*s] = true;
      plan_.push_back(pp);
    }

    // Schedule each filter right after the pattern that binds its last variable.
    std::vector<std::size_t> bound_at(q_.variables.size(), std::numeric_limits<std::size_t>::max());
    for (std::size_t i = 0; i < plan_.size(); ++i)
      for (const auto& s : plan_[i].slot)
        if (s && bound_at[*s] == std::numeric_limits<std::size_t>::max()) bound_at[*s] = i + 1;
    filters_at_.assign(plan_.size() + 2, {});
    for (const auto& f : q_.filters) {
      std::vector<std::string> vars;
      collect_all_vars(*f, vars);
      std::size_t level = 0;
      for (const auto& v : vars) {
        const std::size_t at = bound_at[slot_of(v)];
        level = std::max(level, at == std::numeric_limits<std::size_t>::max() ? plan_.size() + 1 : at);
      }
      filters_at_[level].push_back(f.get());
    }
    return true;
  }

  // --- evaluation
  Value value_of(const Cell& c) const {
    if (const auto* id = std::get_if<rdf::TermId>(&c)) return from_term(store_.resolve(*id));
    if (const auto* v = std::get_if<Value>(&c)) return *v;
    return Value::error();
  }

  std::optional<Value> to_optional(const Cell& c) const {
    if (std::holds_alternative<std::monostate>(c)) return std::nullopt;
    Value v = value_of(c);
    if (v.is_error()) return std::nullopt;
    return v;
  }

  Value eval(const Expr& e, const Row& row, const std::vector<Value>* agg_values) const {
    switch (e.kind) {
      case ExprKind::Var: return value_of(row[e.slot]);
      case ExprKind::Const: return e.constant;
      case ExprKind::Bound: return Value::boolean_value(!std::holds_alternative<std::monostate>(row[e.slot]));
      case ExprKind::Not: {
        const auto b = effective_boolean(eval(*e.args[0], row, agg_values));
        return b ? Value::boolean_value(!*b) : Value::error();
      }
      case ExprKind::Neg: return negate(eval(*e.args[0], row, agg_values));
      case ExprKind::Or:
      case ExprKind::And: {
        const auto a = effective_boolean(eval(*e.args[0], row, agg_values));
        const bool is_or = e.kind == ExprKind::Or;
        if (a && *a == is_or) return Value::boolean_value(is_or);
        const auto b = effective_boolean(eval(*e.args[1], row, agg_values));
        if (b && *b == is_or) return Value::boolean_value(is_or);
        if (a && b) return Value::boolean_value(!is_or);
        return Value::error();
      }
      case ExprKind::Compare:
        return compare(e.cmp, eval(*e.args[0], row, agg_values), eval(*e.args[1], row, agg_values));
      case ExprKind::Arith:
        return arithmetic(e.arith, eval(*e.args[0], row, agg_values), eval(*e.args[1], row, agg_values));
      case ExprKind::Cast: return cast_to(e.cast, eval(*e.args[0], row, agg_values));
      case ExprKind::Str: {
        Value v = eval(*e.args[0], row, agg_values);
        if (v.is_error() || v.kind == ValueKind::Blank) return Value::error();
        return Value::string(std::move(v.text));
      }
      case ExprKind::Aggregate:
        if (!agg_values) return Value::error();
        return (*agg_values)[agg_index_.at(&e)];
    }
    return Value::error();
  }

  bool passes(const Expr& f, const Row& row) const {
    const auto b = effective_boolean(eval(f, row, nullptr));
    return b && *b;
  }

  bool done() const { return early_stop_at_ && entries_.size() >= *early_stop_at_; }

  void join(std::size_t level, Row& row) {
    for (const Expr* f : filters_at_[level])
      if (!passes(*f, row)) return;
    if (level == plan_.size()) {
      leaf(row);
      return;
    }
    const PlannedPattern& pp = plan_[level];
    rdf::IdPattern ids;
    std::optional<rdf::TermId>* target[3] = {&ids.s, &ids.p, &ids.o};
    std::array<bool, 3> binds{};
    for (std::size_t k = 0; k < 3; ++k) {
      if (pp.constant[k]) {
        *target[k] = pp.constant[k];
      } else if (const auto* id = std::get_if<rdf::TermId>(&row[*pp.slot[k]])) {
        *target[k] = *id;
      } else {
        binds[k] = true;
      }
    }
    for (const rdf::TripleIds t : store_.match_ids(ids)) {
      const rdf::TermId vals[3] = {t.s, t.p, t.o};
      bool ok = true;
      std::array<bool, 3> set{};
      for (std::size_t k = 0; k < 3 && ok; ++k) {
        if (!binds[k]) continue;
        Cell& c = row[*pp.slot[k]];
        if (const auto* id = std::get_if<rdf::TermId>(&c)) {
          ok = *id == vals[k];  // repeated variable within the pattern
        } else {
          c = vals[k];
          set[k] = true;
        }
      }
      if (ok) join(level + 1, row);
      for (std::size_t k = 0; k < 3; ++k)
        if (set[k]) row[*pp.slot[k]] = std::monostate{};
      if (done()) return;
    }
  }

  void leaf(Row& row) {
    // BINDs, then filters that depend on them.
    for (const auto& b : q_.binds) {
      Value v = eval(*b.expr, row, nullptr);
      row[slot_of_bind(b)] = v.is_error() ? Cell{} : Cell{std::move(v)};
    }
    for (const Expr* f : filters_at_[plan_.size() + 1])
      if (!passes(*f, row)) return clear_binds(row);
    if (aggregate_) {
      accumulate(row);
    } else {
      entries_.push_back(make_entry(row, nullptr));
    }
    clear_binds(row);
  }

  std::size_t slot_of_bind(const Bind& b) {
    const auto it = bind_slots_.find(&b);
    if (it != bind_slots_.end()) return it->second;
    return bind_slots_[&b] = slot_of(b.var);
  }

  void clear_binds(Row& row) {
    for (std::size_t i = n_pattern_vars_; i < row.size(); ++i) row[i] = std::monostate{};
  }

  // Evaluates select aliases into the row, then builds output cells and sort keys.
  Entry make_entry(Row& row, const std::vector<Value>* agg_values) const {
    Entry e;
    for (std::size_t i = 0; i < q_.select.size(); ++i) {
      const auto& item = q_.select[i];
      if (item.expr) {
        Value v = eval(*item.expr, row, agg_values);
        row[select_slots_[i]] = v.is_error() ? Cell{} : Cell{std::move(v)};
      }
      e.cells.push_back(row[select_slots_[i]]);
    }
    for (const auto& o : q_.order_by) {
      Value v = eval(*o.expr, row, agg_values);
      e.keys.push_back(v.is_error() ? std::nullopt : std::optional<Value>(std::move(v)));
    }
    return e;
  }

  // --- aggregation
  std::string cell_key(const Cell& c) const {
    if (const auto* id = std::get_if<rdf::TermId>(&c)) return "#" + std::to_string(*id);
    if (const auto* v = std::get_if<Value>(&c)) return identity_key(*v);
    return "-";
  }

  std::string group_key(const Row& row) const {
    std::string key;
    for (const std::size_t s : group_slots_) {
      const Cell& c = row[s];
      if (const auto* id = std::get_if<rdf::TermId>(&c)) {
        key += identity_key(from_term(store_.resolve(*id)));
      } else {
        key += cell_key(c);
      }
      key.push_back('\x1f');
    }
    return key;
  }

  void accumulate(const Row& row) {
    std::string key = group_key(row);
    auto it = group_index_.find(key);
    if (it == group_index_.end()) {
      it = group_index_.emplace(std::move(key), groups_.size()).first;
      Group g;
      g.row.assign(row.size(), std::monostate{});
      for (const std::size_t s : group_slots_) g.row[s] = row[s];
      g.states.resize(aggs_.size());
      groups_.push_back(std::move(g));
    }
    Group& g = groups_[it->second];
    for (std::size_t i = 0; i < aggs_.size(); ++i) update(*aggs_[i], g.states[i], row);
  }

  void update(const Expr& agg, AggState& st, const Row& row) const {
    if (agg.star) {
      if (agg.distinct) {
        std::string key;
        for (std::size_t s = 0; s < n_pattern_vars_; ++s) {
          key += cell_key(row[s]);
          key.push_back('\x1f');
        }
        if (!st.seen.insert(std::move(key)).second) return;
      }
      ++st.count;
      return;
    }
    Value v = eval(*agg.args[0], row, nullptr);
    if (agg.agg == AggKind::Count) {
      if (v.is_error()) return;
      if (agg.distinct && !st.seen.insert(identity_key(v)).second) return;
      ++st.count;
      return;
    }
    if (v.is_error()) {
      if (agg.agg == AggKind::Sum || agg.agg == AggKind::Avg) st.error = true;
      return;
    }
    if (agg.distinct && !st.seen.insert(identity_key(v)).second) return;
    ++st.count;
    switch (agg.agg) {
      case AggKind::Sum:
      case AggKind::Avg:
        if (!v.is_numeric()) {
          st.error = true;
          return;
        }
        st.kind = promote(st.kind, v.kind);
        st.dsum += v.kind == ValueKind::Integer ? static_cast<long double>(v.ival) : static_cast<long double>(v.num);
        if (v.kind == ValueKind::Integer && !st.int_overflow)
          st.int_overflow = __builtin_add_overflow(st.isum, v.ival, &st.isum);
        return;
      case AggKind::Min:
        if (!st.best || order_compare(&v, &*st.best) < 0) st.best = std::move(v);
        return;
      case AggKind::Max:
        if (!st.best || order_compare(&v, &*st.best) > 0) st.best = std::move(v);
        return;
      case AggKind::Count: return;
    }
  }

  static Value finish(const Expr& agg, const AggState& st) {
    switch (agg.agg) {
      case AggKind::Count: return Value::integer(st.count);
      case AggKind::Sum:
        if (st.error) return Value::error();
        if (st.kind == ValueKind::Integer && !st.int_overflow) return Value::integer(st.isum);
        return Value::real(static_cast<double>(st.dsum), st.kind == ValueKind::Integer ? ValueKind::Decimal : st.kind);
      case AggKind::Avg:
        if (st.error) return Value::error();
        if (st.count == 0) return Value::integer(0);
        return Value::real(static_cast<double>(st.dsum / static_cast<long double>(st.count)),
                           st.kind == ValueKind::Integer ? ValueKind::Decimal : st.kind);
      case AggKind::Min:
      case AggKind::Max: return st.best ? *st.best : Value::error();
    }
    return Value::error();
  }

  static ValueKind promote(ValueKind a, ValueKind b) { return sparql::detail::promote(a, b); }

  void finish_groups() {
    if (groups_.empty() && q_.group_by.empty()) {
      Group g;
      g.row.assign(q_.variables.size(), std::monostate{});
      g.states.resize(aggs_.size());
      groups_.push_back(std::move(g));
    }
    for (auto& g : groups_) {
      std::vector<Value> agg_values;
      agg_values.reserve(aggs_.size());
      for (std::size_t i = 0; i < aggs_.size(); ++i) agg_values.push_back(finish(*aggs_[i], g.states[i]));
      // Aliases first, since HAVING may refer to them.
      Entry e = make_entry(g.row, &agg_values);
      bool keep = true;
      for (const auto& h : q_.having) {
        const auto b = effective_boolean(eval(*h, g.row, &agg_values));
        if (!b || !*b) {
          keep = false;
          break;
        }
      }
      if (keep) entries_.push_back(std::move(e));
    }
  }

  const Query& q_;
  const rdf::TripleStore& store_;
  std::size_t n_pattern_vars_ = 0;
  bool aggregate_ = false;
  std::vector<std::size_t> select_slots_;
  std::vector<std::size_t> group_slots_;
  std::vector<const Expr*> aggs_;
  std::unordered_map<const Expr*, std::size_t> agg_index_;
  std::unordered_map<const Bind*, std::size_t> bind_slots_;
  std::vector<PlannedPattern> plan_;
  std::vector<std::vector<const Expr*>> filters_at_;
  std::optional<std::size_t> early_stop_at_;
  std::vector<Entry> entries_;
  std::vector<Group> groups_;
  std::unordered_map<std::string, std::size_t> group_index_;
};

}  // namespace detail

// Evaluates a parsed query against a sealed store.
inline ResultTable evaluate(const Query& q, const rdf::TripleStore& store) {
  return detail::Evaluator(q, store).run();
}

inline ResultTable run_query(std::string_view text, const rdf::TripleStore& store) {
  const Query q = parse_query(text);
  return evaluate(q, store);
}

}  // namespace hpcoda::sparql
