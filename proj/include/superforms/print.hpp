#pragma once

#include <string>

#include "superforms/form.hpp"

namespace superforms {

// Canonical text form.  The printer writes exactly the grammar the parser
// reads: rationals p/q, products with '*', delta^k(dth_i), O(...) for
// truncated tail markers.  Powers are written as repeated factors, since '^'
// is a product operator in the grammar, not exponentiation.
namespace print_detail {

inline void append_factor(std::string& s, const std::string& f) {
  if (!s.empty()) s += "*";
  s += f;
}

inline std::string polynomial_term(const Polynomial::Monomial& mono, const Rational& c,
                                   const SuperDomain& dom) {
  std::string xpart;
  for (std::size_t i = 0; i < mono.size(); ++i)
    for (unsigned e = 0; e < mono[i]; ++e) append_factor(xpart, dom.x_names[i]);
  if (xpart.empty()) return rational_to_string(c);
  if (c == 1) return xpart;
  if (c == -1) return "-" + xpart;
  return rational_to_string(c) + "*" + xpart;
}

inline std::string polynomial_to_string(const Polynomial& p, const SuperDomain& dom) {
  if (p.is_zero()) return "0";
  std::string s;
  bool first = true;
  for (const auto& [m, c] : p.terms()) {
    std::string t = polynomial_term(m, c, dom);
    if (first) {
      s = t;
      first = false;
    } else if (!t.empty() && t[0] == '-') {
      s += " - " + t.substr(1);
    } else {
      s += " + " + t;
    }
  }
  return s;
}

}  // namespace print_detail

inline std::string to_string(const Coefficient& c, const SuperDomain& dom) {
  using print_detail::polynomial_to_string;
  std::string num = polynomial_to_string(c.num(), dom);
  if (c.is_polynomial()) return num;
  if (c.num().term_count() > 1) num = "(" + num + ")";
  return num + "/(" + polynomial_to_string(c.den(), dom) + ")";
}

inline std::string to_string(const MonomialKey& k, const Coefficient& c, const SuperDomain& dom) {
  using print_detail::append_factor;
  std::string mono;
  for (int a = 0; a < dom.n; ++a)
    if (k.theta >> a & 1u) append_factor(mono, dom.theta_names[a]);
  for (int i = 0; i < dom.m; ++i)
    if (k.form.dx >> i & 1u) append_factor(mono, "d" + dom.x_names[i]);
  for (const auto& [a, p] : k.form.dtheta)
    for (int e = 0; e < p; ++e) append_factor(mono, "d" + dom.theta_names[a]);
  for (const auto& df : k.form.deltas) {
    std::string d = "delta";
    if (df.order > 0) d += "^" + std::to_string(df.order);
    d += "(d" + dom.theta_names[df.index] + ")";
    append_factor(mono, d);
  }

  std::string cs;
  bool multi = c.is_polynomial() && c.num().term_count() > 1;
  if (mono.empty()) {
    cs = multi ? "(" + to_string(c, dom) + ")" : to_string(c, dom);
  } else if (multi) {
    cs = "(" + to_string(c, dom) + ")*" + mono;
  } else if (c.is_polynomial() && c.num().is_constant() && c.num().constant_value() == 1) {
    cs = mono;
  } else if (c.is_polynomial() && c.num().is_constant() && c.num().constant_value() == -1) {
    cs = "-" + mono;
  } else {
    cs = to_string(c, dom) + "*" + mono;
  }
  if (k.form.truncated) {
    if (!cs.empty() && cs[0] == '-') return "-O(" + cs.substr(1) + ")";
    return "O(" + cs + ")";
  }
  return cs;
}

inline std::string to_string(const FormExpr& e) {
  if (e.is_zero()) return "0";
  std::string s;
  bool first = true;
  for (const auto& [k, c] : e.terms()) {
    std::string t = to_string(k, c, e.domain());
    if (first) {
      s = t;
      first = false;
    } else if (!t.empty() && t[0] == '-') {
      s += " - " + t.substr(1);
    } else {
      s += " + " + t;
    }
  }
  return s;
}

}  // namespace superforms
