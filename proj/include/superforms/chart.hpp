#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "superforms/calculus.hpp"
#include "superforms/form.hpp"

namespace superforms {

// --------------------------------------------------------------------------
// Inverse of an even function c0(x) + nilpotent: a finite geometric series,
// since the nilpotent part has bounded theta degree.
// --------------------------------------------------------------------------
inline FormExpr invert_even(const FormExpr& e) {
  if (!e.is_function()) throw Error("invert_even: not a function");
  Coefficient c0;
  bool have = false;
  for (const auto& [k, c] : e.terms())
    if (k.theta == 0) {
      c0 = c;
      have = true;
    } else if (k.parity() != 0) {
      throw Error("invert_even: odd function part");
    }
  if (!have || c0.is_zero()) throw Error("invert_even: function has no invertible body");
  Coefficient inv0 = Coefficient(1) / c0;
  FormExpr nil = e - FormExpr::scalar(e.domain(), c0);
  FormExpr result(e.domain());
  FormExpr power = FormExpr::one(e.domain());
  Coefficient scale = inv0;
  while (!power.is_zero()) {
    result += power * scale;
    power = power * nil;
    scale = -(scale * inv0);
  }
  return result;
}

// Determinant of a matrix of (even, mutually commuting) expressions, by
// permutation expansion; the matrices here are at most n x n with n small.
inline FormExpr form_matrix_det(const std::vector<std::vector<FormExpr>>& mat,
                                const SuperDomain& dom) {
  const int r = static_cast<int>(mat.size());
  if (r == 0) return FormExpr::one(dom);
  std::vector<int> perm(r);
  for (int i = 0; i < r; ++i) perm[i] = i;
  FormExpr det(dom);
  do {
    int inv = 0;
    for (int i = 0; i < r; ++i)
      for (int j = i + 1; j < r; ++j)
        if (perm[i] > perm[j]) ++inv;
    FormExpr prod = FormExpr::one(dom);
    for (int i = 0; i < r && !prod.is_zero(); ++i) prod = prod * mat[i][perm[i]];
    det += (inv & 1) ? -prod : prod;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return det;
}

// --------------------------------------------------------------------------
// Product of derivative-order deltas at general linear-plus-shift arguments:
//
//   prod_a delta^{(k_a)}( sum_b M_ab dth^b + nu_a )
//
// The dth-linear coefficient matrix restricted to a chosen column set S must
// be invertible modulo nilpotents.  The factorisation runs in two steps:
//   1. each factor is Taylor-expanded in its shift (everything outside the
//      S-columns): delta^{(k)}(L + s) = sum_j s^j/j! delta^{(k+j)}(L);
//      non-nilpotent shifts truncate at `trunc_order` with a flagged marker;
//   2. the now purely linear product reduces through the dual contractions
//      v_a = sum_c (M_S^{-1})_{ca} i_{dth^c} as
//      prod_a delta^{(q_a)}(L_a) = prod_a v_a^{q_a} [ det(M_S)^{-1} prod_c delta(dth^c) ],
// which contains both the 1/det rule and delta^{(k)}(lambda dth) =
// lambda^{-k-1} delta^{(k)}(dth) as special cases.
// --------------------------------------------------------------------------
inline FormExpr delta_transform(const std::vector<FormExpr>& arguments,
                                const std::vector<int>& orders, int trunc_order = 4,
                                const std::vector<int>& preferred_columns = {}) {
  if (arguments.empty()) throw Error("delta_transform: no arguments");
  if (arguments.size() != orders.size())
    throw Error("delta_transform: argument/order count mismatch");
  const SuperDomain dom = arguments[0].domain();
  const int r = static_cast<int>(arguments.size());
  const int n = dom.n;
  if (r > n) throw Error("delta_transform: more delta factors than odd directions");

  // split each argument into dth-linear coefficients and the dx remainder
  std::vector<std::vector<FormExpr>> M(r, std::vector<FormExpr>(n, FormExpr(dom)));
  for (int a = 0; a < r; ++a) {
    arguments[a].require_same_domain(arguments[0], "delta_transform");
    for (const auto& [k, c] : arguments[a].terms()) {
      if (k.picture() != 0) throw Error("delta_transform: argument carries picture");
      if (k.degree() != 1) throw Error("delta_transform: argument must be a 1-form");
      if (k.form.dtheta.size() == 1 && k.form.dtheta[0].second == 1) {
        if (k.parity() != 0)
          throw Error("delta_transform: dtheta coefficients must be even");
        MonomialKey kk = k;
        int b = kk.form.dtheta[0].first;
        kk.form.dtheta.clear();
        M[a][b].add_term(kk, c);
      }
    }
  }

  // choose pivot columns: the x-part of M restricted to them must be
  // invertible; prefer the caller's columns (the delta's own index under a
  // pullback) so near-identity charts reduce along the diagonal
  std::vector<std::vector<Coefficient>> body(r, std::vector<Coefficient>(n));
  for (int a = 0; a < r; ++a)
    for (int b = 0; b < n; ++b)
      for (const auto& [k, c] : M[a][b].terms())
        if (k.theta == 0) body[a][b] = c;
  std::vector<int> cols;
  {
    std::vector<bool> taken(n, false);
    auto work = body;
    for (int row = 0; row < r; ++row) {
      int pick = -1;
      if (static_cast<int>(preferred_columns.size()) == r) {
        int pc = preferred_columns[row];
        if (pc >= 0 && pc < n && !taken[pc] && !work[row][pc].is_zero()) pick = pc;
      }
      if (pick < 0)
        for (int b = 0; b < n && pick < 0; ++b)
          if (!taken[b] && !work[row][b].is_zero()) pick = b;
      if (pick < 0) throw Error("delta_transform: non-invertible delta argument matrix");
      taken[pick] = true;
      cols.push_back(pick);
      for (int j = row + 1; j < r; ++j) {
        if (work[j][pick].is_zero()) continue;
        Coefficient f = work[j][pick] / work[row][pick];
        for (int b = 0; b < n; ++b) work[j][b] = work[j][b] - f * work[row][b];
      }
    }
  }
  std::vector<int> sorted_cols = cols;
  std::sort(sorted_cols.begin(), sorted_cols.end());

  // square submatrix, determinant, adjugate inverse (entries are even
  // functions, so everything commutes)
  std::vector<std::vector<FormExpr>> Msub(r, std::vector<FormExpr>(r, FormExpr(dom)));
  for (int a = 0; a < r; ++a)
    for (int c = 0; c < r; ++c) Msub[a][c] = M[a][sorted_cols[c]];
  FormExpr det = form_matrix_det(Msub, dom);
  FormExpr inv_det = invert_even(det);
  std::vector<std::vector<FormExpr>> Minv(r, std::vector<FormExpr>(r, FormExpr(dom)));
  for (int c = 0; c < r; ++c)
    for (int a = 0; a < r; ++a) {
      std::vector<std::vector<FormExpr>> minor;
      for (int i = 0; i < r; ++i) {
        if (i == a) continue;
        std::vector<FormExpr> rowv;
        for (int j = 0; j < r; ++j)
          if (j != c) rowv.push_back(Msub[i][j]);
        minor.push_back(std::move(rowv));
      }
      FormExpr cof = form_matrix_det(minor, dom);
      if ((a + c) & 1) cof = -cof;
      Minv[c][a] = cof * inv_det;
    }

  // shifts: everything in the arguments beyond the S-linear part
  std::vector<FormExpr> rest(r, FormExpr(dom));
  for (int a = 0; a < r; ++a) {
    rest[a] = arguments[a];
    for (int c = 0; c < r; ++c)
      rest[a] -= Msub[a][c] * FormExpr::dtheta(dom, sorted_cols[c]);
  }

  // per-factor Taylor data: (delta order bump j, prefactor s^j/j!, marker?)
  struct Piece {
    int bump;
    FormExpr pref;
  };
  std::vector<std::vector<Piece>> pieces(r);
  for (int a = 0; a < r; ++a) {
    bool exact = is_nilpotent_function_part(rest[a]);
    FormExpr power = FormExpr::one(dom);
    int j = 0;
    while (true) {
      FormExpr pref = power * Coefficient(Rational(1) / rational_factorial(j));
      if (!exact && j == trunc_order + 1) {
        pieces[a].push_back({j, pref.marked_truncated()});
        break;
      }
      pieces[a].push_back({j, pref});
      ++j;
      power = power * rest[a];
      if (power.is_zero()) break;
    }
  }

  // dual contraction fields along the chosen columns
  std::vector<VectorField> v;
  for (int a = 0; a < r; ++a) {
    VectorField va(dom);
    bool first = true;
    for (int c = 0; c < r; ++c) {
      if (Minv[c][a].is_zero()) continue;
      VectorField piece = Minv[c][a] * VectorField::d_dtheta(dom, sorted_cols[c]);
      va = first ? piece : va + piece;
      first = false;
    }
    v.push_back(va);
  }

  FormExpr core0 = inv_det;
  for (int c = 0; c < r; ++c) core0 = core0 * FormExpr::delta(dom, sorted_cols[c]);

  // assemble: sum over the product of the per-factor series
  std::map<std::vector<int>, FormExpr> core_cache;
  auto core_for = [&](const std::vector<int>& q) -> const FormExpr& {
    auto it = core_cache.find(q);
    if (it != core_cache.end()) return it->second;
    FormExpr e = core0;
    for (int a = 0; a < r; ++a)
      for (int i = 0; i < q[a]; ++i) e = contract(v[a], e);
    return core_cache.emplace(q, std::move(e)).first->second;
  };

  FormExpr result(dom);
  std::vector<std::size_t> idx(r, 0);
  while (true) {
    FormExpr pref = FormExpr::one(dom);
    std::vector<int> q(r);
    for (int a = 0; a < r && !pref.is_zero(); ++a) {
      pref = pref * pieces[a][idx[a]].pref;
      q[a] = orders[a] + pieces[a][idx[a]].bump;
    }
    if (!pref.is_zero()) result += pref * core_for(q);
    int a = r - 1;
    while (a >= 0 && ++idx[a] == pieces[a].size()) idx[a--] = 0;
    if (a < 0) break;
  }
  return result;
}

// --------------------------------------------------------------------------
// Polynomial coordinate transformations
// --------------------------------------------------------------------------

class ChartMap {
 public:
  ChartMap(SuperDomain source, SuperDomain target, std::vector<FormExpr> x_images,
           std::vector<FormExpr> theta_images)
      : source_(std::move(source)),
        target_(std::move(target)),
        x_images_(std::move(x_images)),
        theta_images_(std::move(theta_images)) {
    if (static_cast<int>(x_images_.size()) != target_.m ||
        static_cast<int>(theta_images_.size()) != target_.n)
      throw Error("ChartMap: image count does not match the target dimension");
    auto pure_parity = [](const FormExpr& f, int p) {
      for (const auto& [k, c] : f.terms())
        if (k.parity() != p) return false;
      return true;
    };
    for (const auto& f : x_images_) {
      f.require_same_domain(FormExpr(source_), "ChartMap");
      if (!f.is_function() || !pure_parity(f, 0))
        throw Error("ChartMap: x images must be even functions");
    }
    for (const auto& f : theta_images_) {
      f.require_same_domain(FormExpr(source_), "ChartMap");
      if (!f.is_function() || !pure_parity(f, 1))
        throw Error("ChartMap: theta images must be odd functions");
    }
  }

  static ChartMap identity(const SuperDomain& dom) {
    std::vector<FormExpr> xs, ths;
    for (int i = 0; i < dom.m; ++i) xs.push_back(FormExpr::coordinate(dom, i));
    for (int a = 0; a < dom.n; ++a) ths.push_back(FormExpr::theta(dom, a));
    return ChartMap(dom, dom, std::move(xs), std::move(ths));
  }

  const SuperDomain& source() const { return source_; }
  const SuperDomain& target() const { return target_; }
  const std::vector<FormExpr>& x_images() const { return x_images_; }
  const std::vector<FormExpr>& theta_images() const { return theta_images_; }

 private:
  SuperDomain source_, target_;
  std::vector<FormExpr> x_images_, theta_images_;
};

namespace chart_detail {

inline FormExpr substitute_polynomial(const Polynomial& p, const ChartMap& map) {
  const SuperDomain& dom = map.source();
  FormExpr acc(dom);
  for (const auto& [mono, c] : p.terms()) {
    FormExpr t = FormExpr::scalar(dom, Coefficient(c));
    for (std::size_t i = 0; i < mono.size(); ++i)
      for (unsigned e = 0; e < mono[i]; ++e) t = t * map.x_images()[i];
    acc += t;
  }
  return acc;
}

inline FormExpr substitute_coefficient(const Coefficient& c, const ChartMap& map) {
  FormExpr num = substitute_polynomial(c.num(), map);
  if (c.is_polynomial()) return num;
  return num * invert_even(substitute_polynomial(c.den(), map));
}

}  // namespace chart_detail

// Pullback of a function (no generators, only coordinates and thetas).
inline FormExpr pullback_function(const ChartMap& map, const FormExpr& f) {
  if (f.domain() != map.target()) throw Error("pullback: expression not on the map's target");
  FormExpr r(map.source());
  for (const auto& [k, c] : f.terms()) {
    if (k.form.dx || !k.form.dtheta.empty() || !k.form.deltas.empty())
      throw Error("pullback_function: not a function");
    FormExpr e = chart_detail::substitute_coefficient(c, map);
    for (int a = 0; a < map.target().n; ++a)
      if (k.theta >> a & 1u) e = e * map.theta_images()[a];
    if (k.form.truncated) e = e.marked_truncated();
    r += e;
  }
  return r;
}

// Full pullback: substitutes coordinates, pushes d through the map for the
// 1-form generators, and rewrites delta factors via delta_transform.
inline FormExpr pullback(const ChartMap& map, const FormExpr& a, int trunc_order = 4) {
  if (a.domain() != map.target()) throw Error("pullback: expression not on the map's target");
  const SuperDomain& src = map.source();
  std::vector<FormExpr> dx_img, dth_img;
  for (int i = 0; i < map.target().m; ++i) dx_img.push_back(d(map.x_images()[i]));
  for (int b = 0; b < map.target().n; ++b) dth_img.push_back(d(map.theta_images()[b]));

  FormExpr r(src);
  for (const auto& [k, c] : a.terms()) {
    FormExpr e = chart_detail::substitute_coefficient(c, map);
    for (int b = 0; b < map.target().n; ++b)
      if (k.theta >> b & 1u) e = e * map.theta_images()[b];
    for (int i = 0; i < map.target().m; ++i)
      if (k.form.dx >> i & 1u) e = e * dx_img[i];
    for (const auto& [b, p] : k.form.dtheta)
      for (int q = 0; q < p; ++q) e = e * dth_img[b];
    if (!k.form.deltas.empty()) {
      std::vector<FormExpr> args;
      std::vector<int> orders, prefer;
      for (const auto& df : k.form.deltas) {
        args.push_back(dth_img[df.index]);
        orders.push_back(df.order);
        prefer.push_back(df.index);
      }
      e = e * delta_transform(args, orders, trunc_order, prefer);
    }
    if (k.form.truncated) e = e.marked_truncated();
    r += e;
  }
  return r;
}

// Composite map (outer after inner): pullback factors contravariantly,
// pullback(compose(outer, inner), a) == pullback(inner, pullback(outer, a)).
inline ChartMap compose(const ChartMap& outer, const ChartMap& inner) {
  if (inner.target() != outer.source())
    throw Error("compose: inner target does not match outer source");
  std::vector<FormExpr> xs, ths;
  for (const auto& f : outer.x_images()) xs.push_back(pullback_function(inner, f));
  for (const auto& f : outer.theta_images()) ths.push_back(pullback_function(inner, f));
  return ChartMap(inner.source(), outer.target(), std::move(xs), std::move(ths));
}

namespace chart_detail {

inline Coefficient coefficient_matrix_det(std::vector<std::vector<Coefficient>> m) {
  const int r = static_cast<int>(m.size());
  if (r == 0) return Coefficient(1);
  std::vector<int> perm(r);
  for (int i = 0; i < r; ++i) perm[i] = i;
  Coefficient det(0);
  do {
    int inv = 0;
    for (int i = 0; i < r; ++i)
      for (int j = i + 1; j < r; ++j)
        if (perm[i] > perm[j]) ++inv;
    Coefficient prod(1);
    for (int i = 0; i < r; ++i) prod *= m[i][perm[i]];
    det = (inv & 1) ? det - prod : det + prod;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return det;
}

}  // namespace chart_detail

// Ber(J) with the nilpotent parts dropped: det(d f0 / dx) / det(chi),
// where f0 is the x-part of the x images and chi the theta-linear part of
// the theta images.
inline Coefficient berezinian_reduced(const ChartMap& map) {
  if (map.source().m != map.target().m || map.source().n != map.target().n)
    throw Error("berezinian_reduced: map must preserve the dimension");
  const int m = map.target().m, n = map.target().n;
  std::vector<std::vector<Coefficient>> A(m, std::vector<Coefficient>(m));
  for (int i = 0; i < m; ++i) {
    Coefficient f0;
    for (const auto& [k, c] : map.x_images()[i].terms())
      if (k.theta == 0) f0 = c;
    for (int j = 0; j < map.source().m; ++j)
      if (j < m) A[i][j] = f0.derivative(j);
  }
  std::vector<std::vector<Coefficient>> B(n, std::vector<Coefficient>(n));
  for (int a = 0; a < n; ++a)
    for (const auto& [k, c] : map.theta_images()[a].terms())
      if (std::popcount(k.theta) == 1) {
        int b = std::countr_zero(k.theta);
        if (b < n) B[a][b] = c;
      }
  Coefficient detA = chart_detail::coefficient_matrix_det(A);
  Coefficient detB = chart_detail::coefficient_matrix_det(B);
  if (detB.is_zero()) throw Error("berezinian_reduced: det(chi) vanishes identically");
  return detA / detB;
}

}  // namespace superforms
