#pragma once

#include <map>
#include <utility>

#include "superforms/form.hpp"

namespace superforms {

// A coordinate direction d/dx^i (even) or d/dth^a (odd).
struct Direction {
  bool odd = false;
  int index = 0;
  auto operator<=>(const Direction&) const = default;
  int parity() const { return odd ? 1 : 0; }
};

// --------------------------------------------------------------------------
// partial derivatives of functions (degree-0, picture-0 expressions)
// --------------------------------------------------------------------------

inline FormExpr partial_x(const FormExpr& f, int i) {
  FormExpr r(f.domain());
  for (const auto& [k, c] : f.terms()) r.add_term(k, c.derivative(i));
  return r;
}

// Left derivative with respect to th^a.
inline FormExpr partial_theta(const FormExpr& f, int a) {
  FormExpr r(f.domain());
  const std::uint64_t bit = std::uint64_t{1} << a;
  for (const auto& [k, c] : f.terms()) {
    if (!(k.theta & bit)) continue;
    int before = std::popcount(k.theta & (bit - 1));
    MonomialKey kk = k;
    kk.theta &= ~bit;
    r.add_term(kk, (before & 1) ? -c : c);
  }
  return r;
}

inline FormExpr partial(const FormExpr& f, Direction dir) {
  return dir.odd ? partial_theta(f, dir.index) : partial_x(f, dir.index);
}

// --------------------------------------------------------------------------
// the de Rham differential, acting as an odd derivation from the left:
// d(x) = dx, d(th) = dth, d(dx) = d(dth) = d(delta^{(k)}) = 0
// --------------------------------------------------------------------------

inline FormExpr d(const FormExpr& a) {
  const SuperDomain& dom = a.domain();
  FormExpr r(dom);
  for (const auto& [k, c] : a.terms()) {
    // d on the coefficient: sum_i (d_i c) dx^i ∧ rest
    for (int i = 0; i < dom.m; ++i) {
      Coefficient ci = c.derivative(i);
      if (ci.is_zero()) continue;
      MonomialKey dxk;
      dxk.form.dx = std::uint64_t{1} << i;
      Rational f;
      if (auto merged = wedge_monomials(dxk, k, f)) r.add_term(*merged, ci * Coefficient(f));
    }
    // d on each theta: prefix sign, replace th^a by dth^a
    int pos = 0;
    for (int t = 0; t < dom.n; ++t) {
      if (!(k.theta >> t & 1u)) continue;
      MonomialKey base = k;
      base.theta &= ~(std::uint64_t{1} << t);
      MonomialKey dthk;
      dthk.form.dtheta.emplace_back(t, 1);
      Rational f;
      if (auto merged = wedge_monomials(base, dthk, f)) {
        Rational sign = (pos & 1) ? -1 : 1;
        r.add_term(*merged, c * Coefficient(sign * f));
      }
      ++pos;
    }
  }
  return r;
}

// --------------------------------------------------------------------------
// contraction along a basis direction:
//   i_{dx^i} dx^j = delta^j_i           (odd derivation)
//   i_{dth^a} dth^b = delta^b_a         (even derivation)
//   i_{dth^a} delta^{(k)}(dth^a) = delta^{(k+1)}(dth^a)
// --------------------------------------------------------------------------

inline FormExpr contract_basis(Direction dir, const FormExpr& a) {
  FormExpr r(a.domain());
  if (!dir.odd) {
    const std::uint64_t bit = std::uint64_t{1} << dir.index;
    for (const auto& [k, c] : a.terms()) {
      if (!(k.form.dx & bit)) continue;
      int before = std::popcount(k.theta) + std::popcount(k.form.dx & (bit - 1));
      MonomialKey kk = k;
      kk.form.dx &= ~bit;
      r.add_term(kk, (before & 1) ? -c : c);
    }
    return r;
  }
  for (const auto& [k, c] : a.terms()) {
    for (std::size_t t = 0; t < k.form.dtheta.size(); ++t) {
      if (k.form.dtheta[t].first != dir.index) continue;
      MonomialKey kk = k;
      int p = kk.form.dtheta[t].second;
      if (p == 1)
        kk.form.dtheta.erase(kk.form.dtheta.begin() + t);
      else
        kk.form.dtheta[t].second = p - 1;
      r.add_term(kk, c * Coefficient(Rational(p)));
    }
    for (std::size_t t = 0; t < k.form.deltas.size(); ++t) {
      if (k.form.deltas[t].index != dir.index) continue;
      MonomialKey kk = k;
      kk.form.deltas[t].order += 1;
      r.add_term(kk, c);
    }
  }
  return r;
}

// --------------------------------------------------------------------------
// vector fields with function coefficients, X = sum_dir c_dir * d_dir
// --------------------------------------------------------------------------

class VectorField {
 public:
  explicit VectorField(SuperDomain dom) : dom_(std::move(dom)), parity_(0) {}

  VectorField(SuperDomain dom, std::map<Direction, FormExpr> comps)
      : dom_(std::move(dom)), comps_(std::move(comps)) {
    int p = -1;
    for (auto it = comps_.begin(); it != comps_.end();) {
      if (!it->second.is_function())
        throw Error("VectorField: component coefficients must be functions");
      if (it->second.is_zero()) {
        it = comps_.erase(it);
        continue;
      }
      for (const auto& [k, c] : it->second.terms()) {
        int tp = (k.parity() + it->first.parity()) & 1;
        if (p < 0)
          p = tp;
        else if (p != tp)
          throw Error("VectorField: components of mixed parity");
      }
      ++it;
    }
    parity_ = p < 0 ? 0 : p;
  }

  static VectorField basis(const SuperDomain& dom, Direction dir) {
    std::map<Direction, FormExpr> m;
    m.emplace(dir, FormExpr::one(dom));
    return VectorField(dom, std::move(m));
  }
  static VectorField d_dx(const SuperDomain& dom, int i) { return basis(dom, {false, i}); }
  static VectorField d_dtheta(const SuperDomain& dom, int a) { return basis(dom, {true, a}); }

  const SuperDomain& domain() const { return dom_; }
  const std::map<Direction, FormExpr>& components() const { return comps_; }
  int parity() const { return parity_; }
  bool is_zero() const { return comps_.empty(); }

  // X acting on a function
  FormExpr apply(const FormExpr& f) const {
    FormExpr r(dom_);
    for (const auto& [dir, c] : comps_) r += c * partial(f, dir);
    return r;
  }

  friend VectorField operator+(const VectorField& a, const VectorField& b) {
    if (a.dom_ != b.dom_) throw Error("VectorField: mismatched domains");
    std::map<Direction, FormExpr> m = a.comps_;
    for (const auto& [dir, c] : b.comps_) {
      auto it = m.find(dir);
      if (it == m.end())
        m.emplace(dir, c);
      else {
        it->second += c;
        if (it->second.is_zero()) m.erase(it);
      }
    }
    return VectorField(a.dom_, std::move(m));
  }
  friend VectorField operator-(const VectorField& a, const VectorField& b) {
    return a + (b * Rational(-1));
  }
  friend VectorField operator*(VectorField a, const Rational& s) {
    for (auto& [dir, c] : a.comps_) c *= Coefficient(s);
    if (s == 0) a.comps_.clear();
    return a;
  }
  friend VectorField operator*(const FormExpr& f, const VectorField& a) {
    std::map<Direction, FormExpr> m;
    for (const auto& [dir, c] : a.comps_) {
      FormExpr fc = f * c;
      if (!fc.is_zero()) m.emplace(dir, fc);
    }
    return VectorField(a.dom_, std::move(m));
  }

  bool operator==(const VectorField& o) const {
    if (dom_ != o.dom_ || comps_.size() != o.comps_.size()) return false;
    auto it = o.comps_.begin();
    for (auto jt = comps_.begin(); jt != comps_.end(); ++jt, ++it)
      if (jt->first != it->first || jt->second != it->second) return false;
    return true;
  }

 private:
  SuperDomain dom_;
  std::map<Direction, FormExpr> comps_;
  int parity_;
};

// i_X, a graded derivation of parity |X| + 1; O-linear in X.
inline FormExpr contract(const VectorField& X, const FormExpr& a) {
  if (X.domain() != a.domain()) throw Error("contract: mismatched domains");
  FormExpr r(a.domain());
  for (const auto& [dir, c] : X.components()) r += c * contract_basis(dir, a);
  return r;
}

// L_X = d i_X - (-1)^{|i_X|} i_X d, with |i_X| = |X| + 1, so the second term
// enters with +(-1)^{|X|}.
inline FormExpr lie_derivative(const VectorField& X, const FormExpr& a) {
  FormExpr r = d(contract(X, a));
  FormExpr ixda = contract(X, d(a));
  return (X.parity() & 1) ? r - ixda : r + ixda;
}

// [X, Y] = X Y - (-1)^{|X||Y|} Y X as operators on functions.
inline VectorField graded_bracket(const VectorField& X, const VectorField& Y) {
  if (X.domain() != Y.domain()) throw Error("graded_bracket: mismatched domains");
  const int sign = (X.parity() & Y.parity() & 1) ? -1 : 1;
  std::map<Direction, FormExpr> comps;
  auto acc = [&](Direction dir, const FormExpr& c) {
    if (c.is_zero()) return;
    auto it = comps.find(dir);
    if (it == comps.end())
      comps.emplace(dir, c);
    else {
      it->second += c;
      if (it->second.is_zero()) comps.erase(it);
    }
  };
  for (const auto& [dir, c] : Y.components()) acc(dir, X.apply(c));
  for (const auto& [dir, c] : X.components())
    acc(dir, Y.apply(c) * Rational(-sign));
  return VectorField(X.domain(), std::move(comps));
}

}  // namespace superforms
