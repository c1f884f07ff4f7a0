#pragma once

#include <cctype>
#include <functional>
#include <string>
#include <vector>

#include "superforms/calculus.hpp"
#include "superforms/chart.hpp"
#include "superforms/form.hpp"

namespace superforms {

// --------------------------------------------------------------------------
// Expression grammar (whitespace-insensitive):
//
//   expr    := term (('+'|'-') term)*
//   term    := unary (('*'|'^'|'/') unary)*        '*' and '^' both wedge
//   unary   := '-' unary | primary
//   primary := INTEGER | coordinate | 'd' coordinate
//            | 'delta' ['^' INTEGER] '(' expr ')'
//            | 'd' '(' expr ')'
//            | 'iota' '(' direction ',' expr ')'
//            | 'O' '(' expr ')'
//            | 'pullback' '(' NAME ',' expr ')'
//            | NAME                                  (environment binding)
//            | '(' expr ')'
//
// Coordinates come from the ambient domain's names (e.g. x1, th2, dx1,
// dth2).  '/' divides by an invertible even expression; between integer
// literals this is ordinary rational division.  Errors carry the position.
// --------------------------------------------------------------------------

struct ParseEnv {
  std::function<const FormExpr*(const std::string&)> lookup_form = nullptr;
  std::function<const ChartMap*(const std::string&)> lookup_map = nullptr;
  int truncation_order = 4;
};

namespace parse_detail {

struct Lexer {
  std::string_view src;
  std::size_t pos = 0;

  void skip_ws() {
    while (pos < src.size() && (src[pos] == ' ' || src[pos] == '\t')) ++pos;
  }
  bool eof() {
    skip_ws();
    return pos >= src.size();
  }
  char peek() {
    skip_ws();
    return pos < src.size() ? src[pos] : '\0';
  }
  bool accept(char c) {
    if (peek() == c) {
      ++pos;
      return true;
    }
    return false;
  }
  void expect(char c, const std::string& what) {
    if (!accept(c)) fail("expected '" + std::string(1, c) + "' " + what);
  }
  [[noreturn]] void fail(const std::string& msg) const {
    throw Error("parse error at position " + std::to_string(pos) + ": " + msg);
  }
  bool ident_ahead() {
    char c = peek();
    return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
  }
  std::string ident() {
    skip_ws();
    std::string s;
    while (pos < src.size() &&
           (std::isalnum(static_cast<unsigned char>(src[pos])) || src[pos] == '_'))
      s += src[pos++];
    if (s.empty()) fail("expected an identifier");
    return s;
  }
  bool integer_ahead() { return std::isdigit(static_cast<unsigned char>(peek())); }
  Integer integer() {
    skip_ws();
    if (!integer_ahead()) fail("expected an integer");
    Integer v = 0;
    while (pos < src.size() && std::isdigit(static_cast<unsigned char>(src[pos])))
      v = v * 10 + (src[pos++] - '0');
    return v;
  }
};

class ExprParser {
 public:
  ExprParser(Lexer& lx, const SuperDomain& dom, const ParseEnv& env)
      : lx_(lx), dom_(dom), env_(env) {}

  FormExpr expr() {
    FormExpr acc = term();
    while (true) {
      if (lx_.accept('+'))
        acc += term();
      else if (lx_.accept('-'))
        acc -= term();
      else
        return acc;
    }
  }

 private:
  FormExpr term() {
    FormExpr acc = unary();
    while (true) {
      char c = lx_.peek();
      if (c == '*' || c == '^') {
        ++lx_.pos;
        acc = acc * unary();
      } else if (c == '/') {
        ++lx_.pos;
        acc = divide(acc, unary());
      } else {
        return acc;
      }
    }
  }

  FormExpr divide(const FormExpr& a, const FormExpr& b) {
    if (!b.is_function()) lx_.fail("division by a non-function");
    for (const auto& [k, c] : b.terms())
      if (k.theta != 0) lx_.fail("division by a theta-dependent function");
    if (b.is_zero()) lx_.fail("division by zero");
    Coefficient den = b.terms().begin()->second;
    FormExpr r(a.domain());
    for (const auto& [k, c] : a.terms()) r.add_term(k, c / den);
    return r;
  }

  FormExpr unary() {
    if (lx_.accept('-')) return -unary();
    return primary();
  }

  FormExpr primary() {
    if (lx_.accept('(')) {
      FormExpr e = expr();
      lx_.expect(')', "to close the parenthesis");
      return e;
    }
    if (lx_.integer_ahead()) {
      Integer v = lx_.integer();
      return FormExpr::scalar(dom_, Coefficient(Rational(v)));
    }
    if (!lx_.ident_ahead()) lx_.fail("expected an expression");
    std::size_t start = lx_.pos;
    std::string name = lx_.ident();

    if (name == "delta") {
      int order = 0;
      if (lx_.accept('^')) order = static_cast<int>(lx_.integer());
      lx_.expect('(', "after delta");
      FormExpr arg = expr();
      lx_.expect(')', "to close delta");
      return apply_delta(arg, order);
    }
    if (name == "d" && lx_.peek() == '(') {
      ++lx_.pos;
      FormExpr e = expr();
      lx_.expect(')', "to close d");
      return d(e);
    }
    if (name == "iota") {
      lx_.expect('(', "after iota");
      std::string dir = lx_.ident();
      lx_.expect(',', "between the direction and the argument of iota");
      FormExpr e = expr();
      lx_.expect(')', "to close iota");
      return contract_basis(direction(dir, start), e);
    }
    if (name == "O") {
      lx_.expect('(', "after O");
      FormExpr e = expr();
      lx_.expect(')', "to close O");
      return e.marked_truncated();
    }
    if (name == "pullback") {
      lx_.expect('(', "after pullback");
      std::string mapname = lx_.ident();
      const ChartMap* map = env_.lookup_map ? env_.lookup_map(mapname) : nullptr;
      if (!map) lx_.fail("unknown map '" + mapname + "'");
      lx_.expect(',', "between the map and the argument of pullback");
      FormExpr e = expr();
      lx_.expect(')', "to close pullback");
      return pullback(*map, e, env_.truncation_order);
    }

    // coordinates and their differentials
    int i = dom_.find_x(name);
    if (i >= 0) return FormExpr::coordinate(dom_, i);
    int a = dom_.find_theta(name);
    if (a >= 0) return FormExpr::theta(dom_, a);
    if (name.size() > 1 && name[0] == 'd') {
      std::string base = name.substr(1);
      i = dom_.find_x(base);
      if (i >= 0) return FormExpr::dx(dom_, i);
      a = dom_.find_theta(base);
      if (a >= 0) return FormExpr::dtheta(dom_, a);
    }

    if (env_.lookup_form) {
      if (const FormExpr* bound = env_.lookup_form(name)) {
        if (bound->domain() != dom_)
          lx_.fail("'" + name + "' is bound on domain " + bound->domain().to_string() +
                   ", not " + dom_.to_string());
        return *bound;
      }
    }
    lx_.pos = start;
    lx_.fail("unknown identifier '" + name + "'");
  }

  Direction direction(const std::string& name, std::size_t at) {
    if (name.size() > 1 && name[0] == 'd') {
      std::string base = name.substr(1);
      int i = dom_.find_x(base);
      if (i >= 0) return {false, i};
      int a = dom_.find_theta(base);
      if (a >= 0) return {true, a};
    }
    lx_.pos = at;
    lx_.fail("iota direction must name a 1-form generator (dx or dth)");
  }

  FormExpr apply_delta(const FormExpr& arg, int order) {
    // fast path: a plain dth generator
    if (arg.term_count() == 1) {
      const auto& [k, c] = *arg.terms().begin();
      if (k.theta == 0 && k.form.dx == 0 && k.form.deltas.empty() && k.form.dtheta.size() == 1 &&
          k.form.dtheta[0].second == 1 && c.is_constant() && c.constant_value() == 1)
        return FormExpr::delta(dom_, k.form.dtheta[0].first, order);
    }
    return delta_transform({arg}, {order}, env_.truncation_order);
  }

  Lexer& lx_;
  const SuperDomain& dom_;
  const ParseEnv& env_;
};

}  // namespace parse_detail

// Parse a single self-contained expression over the given domain.
inline FormExpr parse_expr(const std::string& text, const SuperDomain& dom,
                           const ParseEnv& env = {}) {
  parse_detail::Lexer lx{text};
  parse_detail::ExprParser p(lx, dom, env);
  FormExpr e = p.expr();
  if (!lx.eof()) lx.fail("trailing input");
  return e;
}

}  // namespace superforms
