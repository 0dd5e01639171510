#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "hpcoda/common/numeric.hpp"
#include "hpcoda/sparql/ast.hpp"
#include "hpcoda/sparql/lexer.hpp"

namespace hpcoda::sparql {

namespace detail {

inline std::string upper(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return out;
}

class Parser {
 public:
  explicit Parser(std::string_view text) : toks_(tokenize(text)) {}

  Query parse() {
    Query q;
    parse_prologue(q);
    if (!is_keyword("SELECT")) {
      for (const char* kw : {"CONSTRUCT", "ASK", "DESCRIBE", "INSERT", "DELETE", "LOAD", "CLEAR", "DROP", "CREATE"})
        if (is_keyword(kw)) throw UnsupportedFeature(std::string(kw) + " queries");
      fail("expected SELECT");
    }
    next();
    parse_select_clause(q);
    if (is_keyword("FROM")) throw UnsupportedFeature("FROM");
    if (is_keyword("WHERE")) next();
    expect_punct("{");
    parse_group(q);
    expect_punct("}");
    parse_modifiers(q);
    if (peek().kind != TokKind::End) {
      if (is_keyword("VALUES")) throw UnsupportedFeature("VALUES");
      fail("unexpected '" + peek().text + "' after query");
    }
    return q;
  }

 private:
  // --- token helpers
  const Token& peek(std::size_t ahead = 0) const { return toks_[std::min(pos_ + ahead, toks_.size() - 1)]; }
  const Token& next() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }

  [[noreturn]] void fail(const std::string& what) const {
    const Token& t = peek();
    throw QuerySyntaxError(what, t.line, t.column);
  }

  bool is_keyword(std::string_view kw, std::size_t ahead = 0) const {
    const Token& t = peek(ahead);
    return t.kind == TokKind::Word && upper(t.text) == kw;
  }
  bool is_punct(std::string_view p, std::size_t ahead = 0) const {
    const Token& t = peek(ahead);
    return t.kind == TokKind::Punct && t.text == p;
  }
  void expect_punct(std::string_view p) {
    if (!is_punct(p)) fail("expected '" + std::string(p) + "'" + found());
    next();
  }
  void expect_keyword(std::string_view kw) {
    if (!is_keyword(kw)) fail("expected " + std::string(kw) + found());
    next();
  }
  std::string found() const {
    const Token& t = peek();
    return t.kind == TokKind::End ? " but reached end of query" : " but found '" + t.text + "'";
  }

  std::string expand(const std::string& pname) {
    const auto colon = pname.find(':');
    const std::string prefix = pname.substr(0, colon);
    const auto it = prefixes_->find(prefix);
    if (it == prefixes_->end()) fail("unknown prefix '" + prefix + ":'");
    return it->second + pname.substr(colon + 1);
  }

  // --- prologue and SELECT
  void parse_prologue(Query& q) {
    prefixes_ = &q.prefixes;
    while (true) {
      if (is_keyword("BASE")) throw UnsupportedFeature("BASE");
      if (!is_keyword("PREFIX")) break;
      next();
      const Token& name = peek();
      if (name.kind != TokKind::PName || name.text.back() != ':') fail("expected prefix name");
      std::string prefix = name.text.substr(0, name.text.size() - 1);
      next();
      if (peek().kind != TokKind::IriRef) fail("expected IRI after PREFIX" + found());
      q.prefixes[prefix] = next().text;
    }
  }

  void parse_select_clause(Query& q) {
    if (is_keyword("DISTINCT")) {
      q.distinct = true;
      next();
    } else if (is_keyword("REDUCED")) {
      throw UnsupportedFeature("REDUCED");
    }
    if (is_punct("*")) {
      next();
      q.select_all = true;
      return;
    }
    while (true) {
      if (peek().kind == TokKind::Var) {
        q.select.push_back({next().text, nullptr});
      } else if (is_punct("(")) {
        next();
        ExprPtr e = parse_expression();
        expect_keyword("AS");
        if (peek().kind != TokKind::Var) fail("expected variable after AS" + found());
        q.select.push_back({next().text, std::move(e)});
        expect_punct(")");
      } else {
        break;
      }
    }
    if (q.select.empty()) fail("expected projection variables" + found());
  }

  // --- WHERE
  void parse_group(Query& q) {
    while (!is_punct("}")) {
      if (peek().kind == TokKind::End) fail("unterminated group pattern");
      if (is_punct(".")) {
        next();
        continue;
      }
      for (const char* kw : {"OPTIONAL", "UNION", "MINUS", "GRAPH", "SERVICE", "VALUES", "EXISTS", "NOT"}) {
        if (is_keyword(kw)) throw UnsupportedFeature(kw);
      }
      if (is_keyword("SELECT")) throw UnsupportedFeature("subqueries");
      if (is_punct("{")) throw UnsupportedFeature("nested group patterns");
      if (is_punct("[")) throw UnsupportedFeature("blank node property lists");
      if (is_punct("(")) throw UnsupportedFeature("RDF collections");
      if (is_keyword("FILTER")) {
        next();
        q.filters.push_back(parse_constraint());
        continue;
      }
      if (is_keyword("BIND")) {
        next();
        expect_punct("(");
        ExprPtr e = parse_expression();
        expect_keyword("AS");
        if (peek().kind != TokKind::Var) fail("expected variable after AS" + found());
        std::string var = next().text;
        expect_punct(")");
        q.binds.push_back({std::move(e), std::move(var)});
        continue;
      }
      parse_triples_block(q);
    }
  }

  void parse_triples_block(Query& q) {
    const PatternTerm subject = parse_pattern_term(false);
    if (!subject.is_var() && subject.term().is_literal()) fail("literal in subject position");
    while (true) {
      const PatternTerm predicate = parse_verb();
      while (true) {
        const PatternTerm object = parse_pattern_term(true);
        q.patterns.push_back({subject, predicate, object});
        if (!is_punct(",")) break;
        next();
      }
      if (!is_punct(";")) break;
      next();
      // Trailing ';' before '.' or '}' is allowed.
      if (is_punct(".") || is_punct("}")) break;
    }
    if (is_punct(".")) {
      next();
    } else if (!is_punct("}") && !is_keyword("FILTER") && !is_keyword("BIND")) {
      if (is_keyword("OPTIONAL") || is_keyword("MINUS") || is_keyword("VALUES")) return;
      fail("expected '.' or '}'" + found());
    }
  }

  PatternTerm parse_verb() {
    if (peek().kind == TokKind::Word && peek().text == "a") {
      next();
      return {rdf::rdf_type()};
    }
    PatternTerm p;
    const Token& t = peek();
    if (t.kind == TokKind::Var) {
      p = {next().text};
    } else if (t.kind == TokKind::IriRef) {
      p = {rdf::Term::iri(next().text)};
    } else if (t.kind == TokKind::PName) {
      p = {rdf::Term::iri(expand(next().text))};
    } else if (is_punct("^") || is_punct("!") || is_punct("(")) {
      throw UnsupportedFeature("property paths");
    } else {
      fail("expected predicate" + found());
    }
    if (is_punct("/") || is_punct("|") || is_punct("*") || is_punct("+") || (is_punct("?"))) {
      throw UnsupportedFeature("property paths");
    }
    return p;
  }

  PatternTerm parse_pattern_term(bool allow_literal) {
    const Token& t = peek();
    switch (t.kind) {
      case TokKind::Var: return {next().text};
      case TokKind::BlankLabel: return {"_:" + next().text};  // non-distinguished variable
      case TokKind::IriRef: return {rdf::Term::iri(next().text)};
      case TokKind::PName: return {rdf::Term::iri(expand(next().text))};
      default: break;
    }
    if (is_punct("[")) throw UnsupportedFeature("blank node property lists");
    if (is_punct("(")) throw UnsupportedFeature("RDF collections");
    if (!allow_literal) fail("expected subject" + found());
    return {parse_literal_term()};
  }

  rdf::Term parse_literal_term() {
    bool negative = false;
    if (is_punct("-") || is_punct("+")) {
      negative = next().text == "-";
    }
    const Token& t = peek();
    auto make = [&](rdf::Datatype dt) {
      std::string lex = (negative ? "-" : "") + next().text;
      return rdf::Term::literal(std::move(lex), dt);
    };
    switch (t.kind) {
      case TokKind::Integer: return make(rdf::Datatype::Integer);
      case TokKind::Decimal: return make(rdf::Datatype::Decimal);
      case TokKind::Double: return make(rdf::Datatype::Double);
      default: break;
    }
    if (negative) fail("expected number after sign");
    if (t.kind == TokKind::Word && (t.text == "true" || t.text == "false"))
      return rdf::Term::literal(next().text, rdf::Datatype::Boolean);
    if (t.kind == TokKind::String) {
      std::string lex = next().text;
      if (is_punct("@")) throw UnsupportedFeature("language tags");
      if (is_punct("^^")) {
        next();
        std::string dt_iri;
        if (peek().kind == TokKind::IriRef) {
          dt_iri = next().text;
        } else if (peek().kind == TokKind::PName) {
          dt_iri = expand(next().text);
        } else {
          fail("expected datatype IRI" + found());
        }
        const auto dt = rdf::datatype_from_iri(dt_iri);
        if (!dt) throw UnsupportedFeature("datatype <" + dt_iri + ">");
        if (!rdf::is_valid_lexical(lex, *dt)) fail("invalid lexical form '" + lex + "' for <" + dt_iri + ">");
        return rdf::Term::literal(std::move(lex), *dt);
      }
      return rdf::Term::string(std::move(lex));
    }
    fail("expected RDF term" + found());
  }

  // --- expressions
  ExprPtr parse_constraint() {
    if (is_punct("(")) {
      next();
      ExprPtr e = parse_expression();
      expect_punct(")");
      return e;
    }
    return parse_primary();  // built-in or function call
  }

  ExprPtr parse_expression() { return parse_or(); }

  ExprPtr binary(ExprKind k, ExprPtr a, ExprPtr b) {
    ExprPtr e = Expr::make(k);
    e->args.push_back(std::move(a));
    e->args.push_back(std::move(b));
    return e;
  }

  ExprPtr parse_or() {
    ExprPtr e = parse_and();
    while (is_punct("||")) {
      next();
      e = binary(ExprKind::Or, std::move(e), parse_and());
    }
    return e;
  }

  ExprPtr parse_and() {
    ExprPtr e = parse_relational();
    while (is_punct("&&")) {
      next();
      e = binary(ExprKind::And, std::move(e), parse_relational());
    }
    return e;
  }

  ExprPtr parse_relational() {
    ExprPtr e = parse_additive();
    static const std::map<std::string, CompareOp> kOps{{"=", CompareOp::Eq}, {"!=", CompareOp::Ne},
                                                       {"<", CompareOp::Lt}, {"<=", CompareOp::Le},
                                                       {">", CompareOp::Gt}, {">=", CompareOp::Ge}};
    if (peek().kind == TokKind::Punct) {
      const auto it = kOps.find(peek().text);
      if (it != kOps.end()) {
        next();
        ExprPtr r = binary(ExprKind::Compare, std::move(e), parse_additive());
        r->cmp = it->second;
        return r;
      }
    }
    if (is_keyword("IN") || (is_keyword("NOT") && is_keyword("IN", 1))) throw UnsupportedFeature("IN");
    return e;
  }

  ExprPtr parse_additive() {
    ExprPtr e = parse_multiplicative();
    while (is_punct("+") || is_punct("-")) {
      const ArithOp op = next().text == "+" ? ArithOp::Add : ArithOp::Sub;
      e = binary(ExprKind::Arith, std::move(e), parse_multiplicative());
      e->arith = op;
    }
    return e;
  }

  ExprPtr parse_multiplicative() {
    ExprPtr e = parse_unary();
    while (is_punct("*") || is_punct("/")) {
      const ArithOp op = next().text == "*" ? ArithOp::Mul : ArithOp::Div;
      e = binary(ExprKind::Arith, std::move(e), parse_unary());
      e->arith = op;
    }
    return e;
  }

  ExprPtr parse_unary() {
    if (is_punct("!")) {
      next();
      ExprPtr e = Expr::make(ExprKind::Not);
      e->args.push_back(parse_unary());
      return e;
    }
    if (is_punct("-")) {
      next();
      ExprPtr e = Expr::make(ExprKind::Neg);
      e->args.push_back(parse_unary());
      return e;
    }
    if (is_punct("+")) {
      next();
      return parse_unary();
    }
    return parse_primary();
  }

  ExprPtr constant(Value v) {
    ExprPtr e = Expr::make(ExprKind::Const);
    e->constant = std::move(v);
    return e;
  }

  ExprPtr parse_call_args_into(ExprPtr e, std::size_t arity, const std::string& name) {
    expect_punct("(");
    for (std::size_t i = 0; i < arity; ++i) {
      if (i) expect_punct(",");
      e->args.push_back(parse_expression());
    }
    if (!is_punct(")")) fail(name + " takes " + std::to_string(arity) + " argument(s)");
    next();
    return e;
  }

  ExprPtr parse_iri_or_call(const std::string& iri) {
    if (!is_punct("(")) return constant(Value::iri(iri));
    const auto dt = rdf::datatype_from_iri(iri);
    if (!dt) throw UnsupportedFeature("function <" + iri + ">");
    ExprPtr e = Expr::make(ExprKind::Cast);
    e->cast = *dt;
    return parse_call_args_into(std::move(e), 1, "cast");
  }

  ExprPtr parse_aggregate(AggKind kind, const std::string& name) {
    ExprPtr e = Expr::make(ExprKind::Aggregate);
    e->agg = kind;
    expect_punct("(");
    if (is_keyword("DISTINCT")) {
      next();
      e->distinct = true;
    }
    if (is_punct("*")) {
      if (kind != AggKind::Count) fail(name + "(*) is not allowed");
      next();
      e->star = true;
    } else {
      e->args.push_back(parse_expression());
    }
    expect_punct(")");
    return e;
  }

  ExprPtr parse_primary() {
    const Token& t = peek();
    switch (t.kind) {
      case TokKind::Var: {
        ExprPtr e = Expr::make(ExprKind::Var);
        e->var = next().text;
        return e;
      }
      case TokKind::IriRef: return parse_iri_or_call(next().text);
      case TokKind::PName: return parse_iri_or_call(expand(next().text));
      case TokKind::Integer:
      case TokKind::Decimal:
      case TokKind::Double:
      case TokKind::String: return constant(from_term(parse_literal_term()));
      case TokKind::BlankLabel: fail("blank nodes are not allowed in expressions");
      case TokKind::Punct:
        if (t.text == "(") {
          next();
          ExprPtr e = parse_expression();
          expect_punct(")");
          return e;
        }
        fail("unexpected '" + t.text + "' in expression");
      case TokKind::End: fail("unexpected end of query in expression");
      case TokKind::Word: break;
    }
    const std::string word = upper(t.text);
    if (word == "TRUE" || word == "FALSE") {
      next();
      return constant(Value::boolean_value(word == "TRUE"));
    }
    static const std::map<std::string, AggKind> kAggs{{"COUNT", AggKind::Count}, {"SUM", AggKind::Sum},
                                                      {"AVG", AggKind::Avg},     {"MIN", AggKind::Min},
                                                      {"MAX", AggKind::Max}};
    if (const auto it = kAggs.find(word); it != kAggs.end()) {
      next();
      return parse_aggregate(it->second, word);
    }
    if (word == "STR") {
      next();
      return parse_call_args_into(Expr::make(ExprKind::Str), 1, "STR");
    }
    if (word == "BOUND") {
      next();
      expect_punct("(");
      if (peek().kind != TokKind::Var) fail("BOUND expects a variable");
      ExprPtr e = Expr::make(ExprKind::Bound);
      e->var = next().text;
      expect_punct(")");
      return e;
    }
    if (word == "EXISTS" || word == "NOT") throw UnsupportedFeature("EXISTS");
    if (is_punct("(", 1)) throw UnsupportedFeature("function " + t.text);
    fail("unexpected '" + t.text + "' in expression");
  }

  // --- solution modifiers
  void parse_modifiers(Query& q) {
    if (is_keyword("GROUP")) {
      next();
      expect_keyword("BY");
      while (peek().kind == TokKind::Var) q.group_by.push_back(next().text);
      if (is_punct("(")) throw UnsupportedFeature("GROUP BY expressions");
      if (q.group_by.empty()) fail("expected variable after GROUP BY" + found());
    }
    if (is_keyword("HAVING")) {
      next();
      do {
        q.having.push_back(parse_constraint());
      } while (is_punct("("));
    }
    if (is_keyword("ORDER")) {
      next();
      expect_keyword("BY");
      while (true) {
        if (is_keyword("ASC") || is_keyword("DESC")) {
          const bool desc = upper(next().text) == "DESC";
          expect_punct("(");
          ExprPtr e = parse_expression();
          expect_punct(")");
          q.order_by.push_back({std::move(e), desc});
        } else if (peek().kind == TokKind::Var) {
          ExprPtr e = Expr::make(ExprKind::Var);
          e->var = next().text;
          q.order_by.push_back({std::move(e), false});
        } else if (is_punct("(")) {
          q.order_by.push_back({parse_constraint(), false});
        } else {
          break;
        }
      }
      if (q.order_by.empty()) fail("expected ORDER BY condition" + found());
    }
    for (int i = 0; i < 2; ++i) {
      if (is_keyword("LIMIT") && !q.limit) {
        next();
        q.limit = parse_count("LIMIT");
      } else if (is_keyword("OFFSET") && !q.offset) {
        next();
        q.offset = parse_count("OFFSET");
      }
    }
  }

  std::size_t parse_count(const char* what) {
    if (peek().kind != TokKind::Integer) fail(std::string("expected integer after ") + what + found());
    const auto v = parse_int64(next().text);
    if (!v || *v < 0) fail(std::string("bad ") + what);
    return static_cast<std::size_t>(*v);
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  std::map<std::string, std::string>* prefixes_ = nullptr;
};

class Validator {
 public:
  explicit Validator(Query& q) : q_(q) {}

  void run() {
    // Slot order: pattern variables, BIND targets, select aliases.
    for (const auto& tp : q_.patterns)
      for (const PatternTerm* pt : {&tp.s, &tp.p, &tp.o})
        if (pt->is_var()) add_var(pt->var());
    pattern_vars_ = std::set<std::string>(q_.variables.begin(), q_.variables.end());

    std::set<std::string> in_scope = pattern_vars_;
    for (auto& b : q_.binds) {
      check_no_aggregate(*b.expr, "BIND");
      require_vars(*b.expr, in_scope, "BIND");
      if (in_scope.count(b.var)) fail("BIND target ?" + b.var + " is already bound");
      in_scope.insert(b.var);
      add_var(b.var);
    }
    for (auto& f : q_.filters) {
      check_no_aggregate(*f, "FILTER");
      require_vars(*f, in_scope, "FILTER");
    }

    if (q_.select_all) {
      if (!q_.group_by.empty()) fail("SELECT * cannot be combined with GROUP BY");
      for (const auto& v : q_.variables)
        if (v.rfind("_:", 0) != 0) q_.select.push_back({v, nullptr});
    }

    for (const auto& g : q_.group_by)
      if (!in_scope.count(g)) fail("GROUP BY variable ?" + g + " is not bound in WHERE");

    const bool aggregate = q_.is_aggregate();
    const std::set<std::string> group_vars(q_.group_by.begin(), q_.group_by.end());
    std::set<std::string> projected;
    for (auto& item : q_.select) {
      if (projected.count(item.var)) fail("variable ?" + item.var + " projected twice");
      if (!item.expr) {
        if (!in_scope.count(item.var)) fail("SELECT variable ?" + item.var + " is not bound in WHERE");
        if (aggregate && !group_vars.count(item.var))
          fail("SELECT variable ?" + item.var + " must appear in GROUP BY");
      } else {
        if (in_scope.count(item.var)) fail("SELECT alias ?" + item.var + " is already bound");
        check_nested_aggregates(*item.expr, false);
        require_vars_agg(*item.expr, in_scope, projected, aggregate, group_vars);
        add_var(item.var);
      }
      projected.insert(item.var);
    }
    for (auto& h : q_.having) {
      check_nested_aggregates(*h, false);
      require_vars_agg(*h, in_scope, projected, true, group_vars);
    }
    for (auto& o : q_.order_by) {
      check_nested_aggregates(*o.expr, false);
      if (!aggregate && contains_aggregate(*o.expr)) fail("aggregate in ORDER BY of a non-aggregate query");
      require_vars_agg(*o.expr, in_scope, projected, aggregate, group_vars);
    }

    // Resolve slots.
    for (auto& b : q_.binds) resolve(*b.expr);
    for (auto& f : q_.filters) resolve(*f);
    for (auto& s : q_.select)
      if (s.expr) resolve(*s.expr);
    for (auto& h : q_.having) resolve(*h);
    for (auto& o : q_.order_by) resolve(*o.expr);
  }

 private:
  [[noreturn]] void fail(const std::string& what) const { throw QuerySyntaxError(what, 1, 1); }

  void add_var(const std::string& v) {
    if (std::find(q_.variables.begin(), q_.variables.end(), v) == q_.variables.end()) q_.variables.push_back(v);
  }

  void check_no_aggregate(const Expr& e, const char* where) const {
    if (contains_aggregate(e)) fail(std::string("aggregates are not allowed in ") + where);
  }

  void check_nested_aggregates(const Expr& e, bool inside) const {
    if (e.kind == ExprKind::Aggregate) {
      if (inside) fail("nested aggregates");
      for (const auto& a : e.args) check_nested_aggregates(*a, true);
      return;
    }
    for (const auto& a : e.args) check_nested_aggregates(*a, inside);
  }

  void require_vars(const Expr& e, const std::set<std::string>& scope, const char* where) const {
    std::vector<std::string> vars;
    collect_all_vars(e, vars);
    for (const auto& v : vars)
      if (!scope.count(v)) fail(std::string("variable ?") + v + " in " + where + " is not bound");
  }

  // Variables inside aggregates must be in scope; variables outside must be
  // group keys (aggregate queries) or in scope, or earlier projections.
  void require_vars_agg(const Expr& e, const std::set<std::string>& scope, const std::set<std::string>& projected,
                        bool aggregate, const std::set<std::string>& group_vars) const {
    if (e.kind == ExprKind::Aggregate) {
      for (const auto& a : e.args) require_vars(*a, scope, "aggregate");
      return;
    }
    if (e.kind == ExprKind::Var || e.kind == ExprKind::Bound) {
      if (projected.count(e.var)) return;
      if (!scope.count(e.var)) fail("variable ?" + e.var + " is not bound");
      if (aggregate && !group_vars.count(e.var)) fail("variable ?" + e.var + " must appear in GROUP BY");
      return;
    }
    for (const auto& a : e.args) require_vars_agg(*a, scope, projected, aggregate, group_vars);
  }

  void resolve(Expr& e) {
    if (e.kind == ExprKind::Var || e.kind == ExprKind::Bound) {
      const auto it = std::find(q_.variables.begin(), q_.variables.end(), e.var);
      e.slot = static_cast<std::size_t>(it - q_.variables.begin());
    }
    for (auto& a : e.args) resolve(*a);
  }

  Query& q_;
  std::set<std::string> pattern_vars_;
};

}  // namespace detail

// Parses and validates a query. Throws QuerySyntaxError (a ParseError) on
// bad syntax or invalid variable use, UnsupportedFeature for SPARQL
// constructs outside the subset.
inline Query parse_query(std::string_view text) {
  Query q = detail::Parser(text).parse();
  detail::Validator(q).run();
  return q;
}

}  // namespace hpcoda::sparql
