#pragma once

#include <array>
#include <vector>

#include "superforms/chart.hpp"
#include "superforms/linalg.hpp"
#include "superforms/sigma.hpp"

namespace superforms {

// --------------------------------------------------------------------------
// d=3 N=1 flat superspace R^(3|2), the coset ISO(1,2|1)/SO(1,2).
//
// gamma^0 = -Id, gamma^1 = sigma^3, gamma^2 = -sigma^1: real and symmetric.
// Spinor indices are raised with eps^{12} = 1, vector indices lowered with
// eta = diag(-1, 1, 1); both choices are validated by the closure and
// homotopy tests rather than assumed.
// --------------------------------------------------------------------------
struct D3N1Model {
  SuperDomain dom;
  std::array<std::array<std::array<Rational, 2>, 2>, 3> gamma;        // gamma^a_{ab}
  std::array<std::array<std::array<Rational, 2>, 2>, 3> gamma_upper;  // gamma^{a,ab}
  std::array<Rational, 3> eta;                                        // diag metric
  std::vector<VectorField> P, D, Q;
  std::vector<FormExpr> V, psi;

  static int epsilon3(int a, int b, int c) {
    if (a == b || b == c || a == c) return 0;
    int inv = (a > b) + (a > c) + (b > c);
    return (inv & 1) ? -1 : 1;
  }
};

inline D3N1Model d3n1_model() {
  D3N1Model md;
  md.dom = SuperDomain(3, 2, {"x0", "x1", "x2"}, {"th1", "th2"});
  const SuperDomain& dom = md.dom;

  md.gamma[0] = {{{Rational(-1), Rational(0)}, {Rational(0), Rational(-1)}}};
  md.gamma[1] = {{{Rational(1), Rational(0)}, {Rational(0), Rational(-1)}}};
  md.gamma[2] = {{{Rational(0), Rational(-1)}, {Rational(-1), Rational(0)}}};
  md.eta = {Rational(-1), Rational(1), Rational(1)};

  // gamma^{a,cd} = eps^{ca'} eps^{db'} gamma^a_{a'b'}, eps^{12} = 1
  const int epsilon2[2][2] = {{0, 1}, {-1, 0}};
  for (int a = 0; a < 3; ++a)
    for (int c = 0; c < 2; ++c)
      for (int e = 0; e < 2; ++e) {
        Rational v = 0;
        for (int i = 0; i < 2; ++i)
          for (int j = 0; j < 2; ++j)
            v += Rational(epsilon2[c][i]) * Rational(epsilon2[e][j]) * md.gamma[a][i][j];
        md.gamma_upper[a][c][e] = v;
      }

  // P_a = d_a;  D_al = d_al - th^be gamma^a_{al be} d_a;  Q_al = d_al + ...
  for (int a = 0; a < 3; ++a) md.P.push_back(VectorField::d_dx(dom, a));
  for (int al = 0; al < 2; ++al) {
    VectorField minus(dom), plus(dom);
    minus = VectorField::d_dtheta(dom, al);
    plus = VectorField::d_dtheta(dom, al);
    for (int a = 0; a < 3; ++a)
      for (int be = 0; be < 2; ++be) {
        if (md.gamma[a][al][be] == 0) continue;
        FormExpr coeff = FormExpr::theta(dom, be) * md.gamma[a][al][be];
        minus = minus - coeff * VectorField::d_dx(dom, a);
        plus = plus + coeff * VectorField::d_dx(dom, a);
      }
    md.D.push_back(minus);
    md.Q.push_back(plus);
  }

  // V^a = dx^a + th^al gamma^a_{al be} dth^be;  psi^al = dth^al
  for (int a = 0; a < 3; ++a) {
    FormExpr v = FormExpr::dx(dom, a);
    for (int al = 0; al < 2; ++al)
      for (int be = 0; be < 2; ++be) {
        if (md.gamma[a][al][be] == 0) continue;
        v += FormExpr::theta(dom, al) * FormExpr::dtheta(dom, be) * md.gamma[a][al][be];
      }
    md.V.push_back(v);
  }
  for (int al = 0; al < 2; ++al) md.psi.push_back(FormExpr::dtheta(dom, al));
  return md;
}

// Y_susy = -1/8 V^a V^b eps^{abc} (gamma_c)^{al be} i_al i_be delta(psi^1) delta(psi^2).
// The vector indices of the epsilon-gamma contraction are raised and lowered
// with eta (so eps^{012} = -eps_{012} = -1 and gamma_c = eta_{cc'} gamma^{c'});
// with this placement the class of Y_susy is +[pco_st], which is what the
// exactness of Y_susy - Y_st requires.  Plain summation over an unlowered c
// yields the inequivalent representative -3 [pco_st] instead.
inline FormExpr pco_susy(const D3N1Model& md) {
  const SuperDomain& dom = md.dom;
  FormExpr deltas = FormExpr::delta(dom, 0) * FormExpr::delta(dom, 1);
  FormExpr y(dom);
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b)
      for (int c = 0; c < 3; ++c) {
        int eps = D3N1Model::epsilon3(a, b, c);
        if (!eps) continue;
        for (int al = 0; al < 2; ++al)
          for (int be = 0; be < 2; ++be) {
            Rational g = md.gamma_upper[c][al][be] * md.eta[c] * Rational(-1);
            if (g == 0) continue;
            FormExpr dd = contract_basis({true, al}, contract_basis({true, be}, deltas));
            y += md.V[a] * md.V[b] * dd * (g * Rational(eps));
          }
      }
  return y * Rational(-1, 8);
}

// Solve d(Lambda) = target for Lambda of bidegree (deg-1 | pic) with
// constant coefficients; exact linear algebra over the monomial basis.
inline FormExpr solve_homotopy_potential(const FormExpr& target) {
  const SuperDomain& dom = target.domain();
  Bidegree tb = bidegree(target);
  auto src = enumerate_integral_monomials(dom, {tb.degree - 1, tb.picture});
  auto dst = enumerate_integral_monomials(dom, {tb.degree, tb.picture});
  std::map<MonomialKey, std::size_t> dst_index;
  for (std::size_t i = 0; i < dst.size(); ++i) dst_index[dst[i]] = i;

  QMatrix M(dst.size(), src.size());
  for (std::size_t j = 0; j < src.size(); ++j) {
    FormExpr e(dom);
    e.add_term(src[j], Coefficient(1));
    FormExpr de = d(e);
    for (const auto& [k, c] : de.terms()) {
      auto it = dst_index.find(k);
      if (it == dst_index.end()) throw Error("solve_homotopy_potential: basis does not close");
      M(it->second, j) = c.constant_value();
    }
  }
  std::vector<Rational> b(dst.size(), 0);
  for (const auto& [k, c] : target.terms()) {
    auto it = dst_index.find(k);
    if (it == dst_index.end() || !c.is_constant())
      throw Error("solve_homotopy_potential: target outside the constant-coefficient basis");
    b[it->second] = c.constant_value();
  }
  auto x = M.solve(b);
  if (!x) throw Error("solve_homotopy_potential: target is not exact");
  FormExpr lambda(dom);
  for (std::size_t j = 0; j < src.size(); ++j)
    if ((*x)[j] != 0) lambda.add_term(src[j], Coefficient((*x)[j]));
  return lambda;
}

// The recomputed homotopy form: d(lambda) = Y_susy - Y_st exactly.
inline FormExpr lambda_susy(const D3N1Model& md) {
  return solve_homotopy_potential(pco_susy(md) - pco_st(md.dom));
}

// The seven-term expression printed in the source for the same homotopy
// form, transcribed literally (including the suspicious dx0*dx1 term) as a
// comparison fixture; i_1^2 i_2 delta delta stands for
// delta^{(2)}(dth1) delta^{(1)}(dth2) and so on.
inline FormExpr lambda_printed(const D3N1Model& md) {
  const SuperDomain& dom = md.dom;
  auto dx = [&](int i) { return FormExpr::dx(dom, i); };
  auto th = [&](int a) { return FormExpr::theta(dom, a); };
  auto dd = [&](int k1, int k2) {
    return FormExpr::delta(dom, 0, k1) * FormExpr::delta(dom, 1, k2);
  };
  FormExpr r(dom);
  r += dx(0) * th(0) * th(1) * dd(0, 2) * Rational(1, 2);
  r += dx(0) * th(0) * th(1) * dd(2, 0) * Rational(1, 2);
  r -= dx(0) * dx(1) * th(0) * dd(2, 1) * Rational(1, 4);
  r -= dx(1) * dx(2) * th(1) * dd(2, 1) * Rational(1, 4);
  r -= dx(1) * dx(2) * th(0) * dd(1, 2) * Rational(1, 4);
  r += dx(2) * dx(0) * th(1) * dd(2, 1) * Rational(1, 4);
  r -= dx(2) * dx(0) * th(0) * dd(1, 2) * Rational(1, 4);
  return r;
}

// Berezin integration over a fat point R^(0|n): the coefficient of
// th^1..th^n delta(dth^1)..delta(dth^n), normalised to integrate pco_st
// to 1.  Vanishes on d-exact integrands of matching bidegree.
inline Rational fat_point_integral(const FormExpr& a) {
  const SuperDomain& dom = a.domain();
  if (dom.m != 0) throw Error("fat_point_integral: domain must be a fat point (m = 0)");
  const std::uint64_t full_n = dom.n == 0 ? 0 : (~std::uint64_t{0} >> (64 - dom.n));
  Rational result = 0;
  for (const auto& [k, c] : a.terms()) {
    if (k.picture() != dom.n)
      throw Error("fat_point_integral: integrand of picture " + std::to_string(k.picture()) +
                  ", expected " + std::to_string(dom.n));
    if (k.theta != full_n) continue;
    bool top = true;
    for (const auto& df : k.form.deltas) top = top && df.order == 0;
    if (top) result += c.constant_value();
  }
  return result;
}

}  // namespace superforms
