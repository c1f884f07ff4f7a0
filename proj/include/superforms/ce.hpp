#pragma once

#include <utility>
#include <vector>

#include "superforms/calculus.hpp"
#include "superforms/lie_superalgebra.hpp"
#include "superforms/linalg.hpp"

namespace superforms {

// --------------------------------------------------------------------------
// Chevalley-Eilenberg cochains at fixed degree.  The cochain space C^p is
// spanned by monomials of total degree p in the dual generators: exterior in
// the duals of even generators, polynomial in the duals of odd ones; each
// fixed degree is finite-dimensional.
// --------------------------------------------------------------------------

inline std::vector<MonomialKey> ce_cochain_basis(const LieSuperalgebraModel& model, int p) {
  const SuperDomain& dom = model.cochain_domain();
  std::vector<MonomialKey> out;
  if (p < 0) return out;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << dom.m); ++mask) {
    int rem = p - std::popcount(mask);
    if (rem < 0) continue;
    std::vector<int> pow(dom.n, 0);
    while (true) {
      int sum = 0;
      for (int v : pow) sum += v;
      if (sum == rem) {
        MonomialKey k;
        k.form.dx = mask;
        for (int a = 0; a < dom.n; ++a)
          if (pow[a] > 0) k.form.dtheta.emplace_back(a, pow[a]);
        out.push_back(std::move(k));
      }
      int i = dom.n - 1;
      while (i >= 0 && pow[i] == rem) pow[i--] = 0;
      if (i < 0) break;
      ++pow[i];
    }
  }
  return out;
}

// Matrix of d: C^p -> C^{p+1} over the rationals in the monomial basis.
inline QMatrix ce_differential_matrix(const LieSuperalgebraModel& model, int p) {
  auto src = ce_cochain_basis(model, p);
  auto dst = ce_cochain_basis(model, p + 1);
  std::map<MonomialKey, std::size_t> dst_index;
  for (std::size_t i = 0; i < dst.size(); ++i) dst_index[dst[i]] = i;
  QMatrix M(dst.size(), src.size());
  const SuperDomain& dom = model.cochain_domain();
  for (std::size_t j = 0; j < src.size(); ++j) {
    FormExpr e(dom);
    e.add_term(src[j], Coefficient(1));
    FormExpr de = model.ce_d(e);
    for (const auto& [k, c] : de.terms()) {
      auto it = dst_index.find(k);
      if (it == dst_index.end()) throw Error("ce_differential_matrix: basis does not close");
      M(it->second, j) = c.constant_value();
    }
  }
  return M;
}

struct CeCohomology {
  int dimension = 0;
  std::vector<FormExpr> representatives;  // closed, independent modulo exact
};

// dim ker(d_p) - rank(d_{p-1}), with representatives completing the image
// of d_{p-1} to a basis of the cocycles.
inline CeCohomology ce_cohomology(const LieSuperalgebraModel& model, int p) {
  const SuperDomain& dom = model.cochain_domain();
  auto basis = ce_cochain_basis(model, p);
  QMatrix Mp = ce_differential_matrix(model, p);
  auto kernel = Mp.kernel_basis();
  QMatrix Mprev = ce_differential_matrix(model, p - 1);

  CeCohomology out;
  std::size_t rank_prev = p == 0 ? 0 : Mprev.rank();
  out.dimension = static_cast<int>(kernel.size() - rank_prev);

  // grow [image | chosen-kernel-vectors] greedily by rank
  std::size_t img_cols = p == 0 ? 0 : Mprev.cols();
  QMatrix probe(basis.size(), img_cols);
  for (std::size_t j = 0; j < img_cols; ++j)
    for (std::size_t i = 0; i < basis.size(); ++i) probe(i, j) = Mprev(i, j);
  std::size_t rank = rank_prev, used = 0;
  for (const auto& v : kernel) {
    QMatrix trial(basis.size(), img_cols + used + 1);
    for (std::size_t i = 0; i < basis.size(); ++i)
      for (std::size_t j = 0; j < img_cols + used; ++j) trial(i, j) = probe(i, j);
    for (std::size_t i = 0; i < basis.size(); ++i) trial(i, img_cols + used) = v[i];
    if (trial.rank() > rank) {
      ++rank;
      ++used;
      probe = trial;
      FormExpr rep(dom);
      for (std::size_t i = 0; i < basis.size(); ++i)
        if (v[i] != 0) rep.add_term(basis[i], Coefficient(v[i]));
      out.representatives.push_back(std::move(rep));
    }
  }
  return out;
}

// Algebraic Lie derivative along generator g on cochains, via the algebraic
// Cartan formula with the contraction dual to g.
inline FormExpr ce_lie_derivative(const LieSuperalgebraModel& model, int g, const FormExpr& a) {
  Direction dir{model.generators()[g].odd, model.class_index(g)};
  FormExpr r = model.ce_d(contract_basis(dir, a));
  FormExpr idb = contract_basis(dir, model.ce_d(a));
  return model.generators()[g].odd ? r - idb : r + idb;
}

// Basis of g-invariant cocycles at degree p: ker(d) intersected with every
// ker(L_g), by stacking the matrices.
inline std::vector<FormExpr> ce_invariant_cocycles(const LieSuperalgebraModel& model, int p) {
  const SuperDomain& dom = model.cochain_domain();
  auto basis = ce_cochain_basis(model, p);
  std::map<MonomialKey, std::size_t> bindex;
  for (std::size_t i = 0; i < basis.size(); ++i) bindex[basis[i]] = i;

  std::vector<QMatrix> blocks;
  blocks.push_back(ce_differential_matrix(model, p));
  for (int g = 0; g < model.size(); ++g) {
    QMatrix L(basis.size(), basis.size());
    for (std::size_t j = 0; j < basis.size(); ++j) {
      FormExpr e(dom);
      e.add_term(basis[j], Coefficient(1));
      FormExpr le = ce_lie_derivative(model, g, e);
      for (const auto& [k, c] : le.terms()) {
        auto it = bindex.find(k);
        if (it == bindex.end()) throw Error("ce_invariant_cocycles: Lie derivative leaves degree");
        L(it->second, j) = c.constant_value();
      }
    }
    blocks.push_back(std::move(L));
  }
  std::size_t rows = 0;
  for (const auto& b : blocks) rows += b.rows();
  QMatrix stacked(rows, basis.size());
  std::size_t off = 0;
  for (const auto& b : blocks) {
    for (std::size_t i = 0; i < b.rows(); ++i)
      for (std::size_t j = 0; j < b.cols(); ++j) stacked(off + i, j) = b(i, j);
    off += b.rows();
  }
  std::vector<FormExpr> out;
  for (const auto& v : stacked.kernel_basis()) {
    FormExpr rep(dom);
    for (std::size_t i = 0; i < basis.size(); ++i)
      if (v[i] != 0) rep.add_term(basis[i], Coefficient(v[i]));
    out.push_back(std::move(rep));
  }
  return out;
}

// --------------------------------------------------------------------------
// Algebraic integral forms: Sigma^k(g) = D ⊗ S^{dim0(g) - k} Pi g.  A Pi of
// an even generator is odd (a mask slot), a Pi of an odd generator is even
// (a power slot); the chain monomials therefore reuse the same encoding as
// the cochains, with the boundary driven by the brackets instead of the
// Maurer-Cartan table.
// --------------------------------------------------------------------------

inline std::vector<MonomialKey> integral_chain_space(const LieSuperalgebraModel& model,
                                                     int sigma_degree) {
  return ce_cochain_basis(model, model.even_dimension() - sigma_degree);
}

namespace ce_detail {

// generator slots of a Pi-monomial, in canonical word order
inline std::vector<int> chain_slots(const LieSuperalgebraModel& model, const MonomialKey& k) {
  std::vector<int> slots;
  for (int i = 0; i < model.cochain_domain().m; ++i)
    if (k.form.dx >> i & 1u) slots.push_back(model.even_generator(i));
  for (const auto& [a, p] : k.form.dtheta)
    for (int q = 0; q < p; ++q) slots.push_back(model.odd_generator(a));
  return slots;
}

inline MonomialKey pi_monomial(const LieSuperalgebraModel& model, const std::vector<int>& gens) {
  MonomialKey k;
  std::map<int, int> pows;
  for (int g : gens) {
    if (model.generators()[g].odd)
      pows[model.class_index(g)] += 1;
    else
      k.form.dx |= std::uint64_t{1} << model.class_index(g);
  }
  for (const auto& [a, p] : pows) k.form.dtheta.emplace_back(a, p);
  return k;
}

}  // namespace ce_detail

// The boundary of the algebraic integral-form complex: contract one pair of
// Pi factors into their bracket,
//   b(Pi x1 .. Pi xq) = sum_{s<t} K(s,t) (-1)^{|x_s|} Pi[x_s,x_t] ∧ rest,
// with K the Koszul sign of moving the pair to the front (in Pi parities).
// It raises the Sigma degree by one, mirroring delta on geometric integral
// forms, and squares to zero.
inline FormExpr chain_boundary(const LieSuperalgebraModel& model, const FormExpr& chain) {
  const SuperDomain& dom = model.cochain_domain();
  FormExpr r(dom);
  for (const auto& [key, c] : chain.terms()) {
    auto slots = ce_detail::chain_slots(model, key);
    const int q = static_cast<int>(slots.size());
    // Pi-parities of the slots
    std::vector<int> pip(q);
    for (int s = 0; s < q; ++s) pip[s] = model.generators()[slots[s]].odd ? 0 : 1;
    for (int s = 0; s < q; ++s)
      for (int t = s + 1; t < q; ++t) {
        auto br = model.bracket(slots[s], slots[t]);
        bool nonzero = false;
        for (const auto& v : br) nonzero = nonzero || v != 0;
        if (!nonzero) continue;
        // Koszul sign: move slot s then slot t to the front
        int sign = 0;
        for (int u = 0; u < s; ++u) sign += pip[s] & pip[u];
        for (int u = 0; u < t; ++u)
          if (u != s) sign += pip[t] & pip[u];
        if (model.generators()[slots[s]].odd) sign += 1;  // (-1)^{|x_s|}
        std::vector<int> rest;
        for (int u = 0; u < q; ++u)
          if (u != s && u != t) rest.push_back(slots[u]);
        MonomialKey rest_key = ce_detail::pi_monomial(model, rest);
        for (int g = 0; g < model.size(); ++g) {
          if (br[g] == 0) continue;
          MonomialKey head = ce_detail::pi_monomial(model, {g});
          Rational f;
          if (auto merged = wedge_monomials(head, rest_key, f)) {
            Rational v = c.constant_value() * br[g] * f;
            if (sign & 1) v = -v;
            r.add_term(*merged, Coefficient(v));
          }
        }
      }
  }
  return r;
}

// Matrix of the boundary Sigma^k -> Sigma^{k+1} in the monomial bases.
inline QMatrix integral_boundary_matrix(const LieSuperalgebraModel& model, int sigma_degree) {
  auto src = integral_chain_space(model, sigma_degree);
  auto dst = integral_chain_space(model, sigma_degree + 1);
  std::map<MonomialKey, std::size_t> dst_index;
  for (std::size_t i = 0; i < dst.size(); ++i) dst_index[dst[i]] = i;
  const SuperDomain& dom = model.cochain_domain();
  QMatrix M(dst.size(), src.size());
  for (std::size_t j = 0; j < src.size(); ++j) {
    FormExpr e(dom);
    e.add_term(src[j], Coefficient(1));
    FormExpr be = chain_boundary(model, e);
    for (const auto& [k, c] : be.terms()) {
      auto it = dst_index.find(k);
      if (it == dst_index.end()) throw Error("integral_boundary_matrix: basis does not close");
      M(it->second, j) = c.constant_value();
    }
  }
  return M;
}

}  // namespace superforms
