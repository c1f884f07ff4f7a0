#pragma once

#include <bit>
#include <functional>
#include <random>
#include <vector>

#include "superforms/chart.hpp"
#include "superforms/sigma.hpp"

namespace superforms {

// Seeded generators for property checks.  Coefficients are small integer
// polynomials so the exact arithmetic stays fast; everything important is
// already exercised by sign combinatorics, not magnitudes.
class FormSampler {
 public:
  FormSampler(SuperDomain dom, std::uint64_t seed) : dom_(std::move(dom)), rng_(seed) {}

  const SuperDomain& domain() const { return dom_; }
  std::mt19937_64& rng() { return rng_; }

  int uniform(int lo, int hi) {
    return std::uniform_int_distribution<int>(lo, hi)(rng_);
  }

  Coefficient coefficient(int max_degree = 2) {
    Polynomial p(dom_.m);
    int terms = 1 + uniform(0, 1);
    for (int t = 0; t < terms; ++t) {
      Polynomial::Monomial mono(dom_.m, 0);
      if (dom_.m > 0 && max_degree > 0) mono[uniform(0, dom_.m - 1)] = uniform(0, max_degree);
      p.add_term(mono, uniform(-3, 3));
    }
    if (p.is_zero()) p = Polynomial(dom_.m, uniform(1, 3));
    return Coefficient(p);
  }

  // arbitrary mixed superform (picture 0)
  FormExpr superform(int terms = 3, int max_dtheta = 2) {
    FormExpr e(dom_);
    for (int t = 0; t < terms; ++t) {
      MonomialKey k;
      k.theta = mask(dom_.n);
      k.form.dx = mask(dom_.m);
      for (int a = 0; a < dom_.n; ++a) {
        int p = uniform(0, max_dtheta);
        if (p > 0 && uniform(0, 1)) k.form.dtheta.emplace_back(a, p);
      }
      e.add_term(k, coefficient());
    }
    return e;
  }

  // homogeneous superform of the given form degree
  FormExpr superform_of_degree(int degree, int terms = 3) {
    FormExpr e(dom_);
    for (int t = 0; t < terms; ++t) {
      MonomialKey k;
      k.theta = mask(dom_.n);
      int dx_count = dom_.m == 0 ? 0 : uniform(0, std::min(degree, dom_.m));
      k.form.dx = mask_of_size(dom_.m, dx_count);
      int rem = degree - std::popcount(k.form.dx);
      if (rem > 0) {
        if (dom_.n == 0) continue;
        std::vector<int> pw(dom_.n, 0);
        for (int q = 0; q < rem; ++q) pw[uniform(0, dom_.n - 1)] += 1;
        for (int a = 0; a < dom_.n; ++a)
          if (pw[a]) k.form.dtheta.emplace_back(a, pw[a]);
      } else if (rem < 0) {
        continue;
      }
      e.add_term(k, coefficient());
    }
    return e;
  }

  // integral form (picture n) in the distributional realisation
  FormExpr integral_form(int terms = 3, int max_order = 2) {
    FormExpr e(dom_);
    for (int t = 0; t < terms; ++t) {
      MonomialKey k;
      k.theta = mask(dom_.n);
      k.form.dx = mask(dom_.m);
      for (int a = 0; a < dom_.n; ++a) k.form.deltas.push_back({a, uniform(0, max_order)});
      e.add_term(k, coefficient());
    }
    return e;
  }

  SigmaForm sigma_form(int terms = 3, int max_power = 2) {
    SigmaForm s(dom_);
    for (int t = 0; t < terms; ++t) {
      SigmaKey k;
      k.theta = mask(dom_.n);
      k.pdx = mask(dom_.m);
      for (int a = 0; a < dom_.n; ++a) {
        int p = uniform(0, max_power);
        if (p > 0 && uniform(0, 1)) k.pdtheta.emplace_back(a, p);
      }
      s.add_term(k, coefficient());
    }
    return s;
  }

  // homotopy form of bidegree (-1|n) with polynomial coefficients
  FormExpr homotopy_form(int terms = 4) {
    auto basis = enumerate_integral_monomials(dom_, {-1, dom_.n});
    FormExpr e(dom_);
    if (basis.empty()) return e;
    for (int t = 0; t < terms; ++t)
      e.add_term(basis[uniform(0, static_cast<int>(basis.size()) - 1)], coefficient(1));
    return e;
  }

  // invertible polynomial chart with nilpotent tails:
  //   x'^i  = A^i_j x^j + b^i + (theta-quadratic tail)
  //   th'^a = chi^a_b(x) th^b + (theta-cubic tail)
  // with integer A of nonzero determinant and chi triangular-plus-units so
  // that det chi(x) is a nonzero constant or a unit polynomial.
  ChartMap chart(bool with_tails = true) {
    const int m = dom_.m, n = dom_.n;
    std::vector<FormExpr> xs, ths;
    // invertible integer matrix by retry
    std::vector<std::vector<int>> A(m, std::vector<int>(m, 0));
    while (true) {
      for (auto& row : A)
        for (auto& v : row) v = uniform(-2, 2);
      // integer determinant by Laplace
      std::function<long long(std::vector<std::vector<int>>)> det =
          [&](std::vector<std::vector<int>> M) -> long long {
        if (M.empty()) return 1;
        if (M.size() == 1) return M[0][0];
        long long r = 0;
        for (std::size_t c = 0; c < M.size(); ++c) {
          if (!M[0][c]) continue;
          std::vector<std::vector<int>> minor;
          for (std::size_t i = 1; i < M.size(); ++i) {
            std::vector<int> row;
            for (std::size_t j = 0; j < M.size(); ++j)
              if (j != c) row.push_back(M[i][j]);
            minor.push_back(row);
          }
          r += (c % 2 ? -1 : 1) * M[0][c] * det(minor);
        }
        return r;
      };
      if (m == 0 || det(A) != 0) break;
    }
    for (int i = 0; i < m; ++i) {
      FormExpr f(dom_);
      for (int j = 0; j < m; ++j)
        if (A[i][j]) f += FormExpr::coordinate(dom_, j) * Rational(A[i][j]);
      f += FormExpr::scalar(dom_, Coefficient(Rational(uniform(-2, 2))));
      if (with_tails && n >= 2) {
        int a = uniform(0, n - 1), b = uniform(0, n - 1);
        if (a != b)
          f += FormExpr::theta(dom_, a) * FormExpr::theta(dom_, b) * coefficient(1);
      }
      xs.push_back(f);
    }
    // chi: unit diagonal entries times optional x-dependence off the diagonal
    for (int a = 0; a < n; ++a) {
      FormExpr f = FormExpr::theta(dom_, a) * Rational(uniform(0, 1) ? 1 : -1) *
                   Rational(1 + uniform(0, 2));
      for (int b = a + 1; b < n; ++b)
        if (uniform(0, 1)) {
          FormExpr entry = FormExpr::scalar(dom_, coefficient(1));
          f += entry * FormExpr::theta(dom_, b);
        }
      if (with_tails && n >= 3) {
        int b1 = 0, b2 = 1, b3 = 2;
        f += FormExpr::theta(dom_, b1) * FormExpr::theta(dom_, b2) * FormExpr::theta(dom_, b3) *
             Rational(uniform(-1, 1));
      }
      ths.push_back(f);
    }
    return ChartMap(dom_, dom_, std::move(xs), std::move(ths));
  }

 private:
  std::uint64_t mask(int bits) {
    if (bits == 0) return 0;
    return static_cast<std::uint64_t>(rng_()) & ((std::uint64_t{1} << bits) - 1);
  }
  std::uint64_t mask_of_size(int bits, int count) {
    std::uint64_t m = 0;
    while (std::popcount(m) < count) m |= std::uint64_t{1} << uniform(0, bits - 1);
    return m;
  }

  SuperDomain dom_;
  std::mt19937_64 rng_;
};

}  // namespace superforms
