#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "superforms/rational.hpp"

namespace superforms {

// Sparse multivariate polynomial over the exact rationals.  Variables are
// anonymous indices 0..nvars-1 (the even coordinates of some domain); names
// live with the domain, not here.  A monomial is its exponent vector.
class Polynomial {
 public:
  using Monomial = std::vector<unsigned>;

  Polynomial() = default;
  explicit Polynomial(int nvars) : nvars_(nvars) {}
  Polynomial(int nvars, const Rational& c) : nvars_(nvars) {
    if (c != 0) terms_[Monomial(nvars, 0)] = c;
  }

  static Polynomial constant(int nvars, const Rational& c) { return Polynomial(nvars, c); }

  static Polynomial variable(int nvars, int i, unsigned power = 1) {
    Polynomial p(nvars);
    Monomial m(nvars, 0);
    m[i] = power;
    p.terms_[m] = 1;
    return p;
  }

  int nvars() const { return nvars_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t term_count() const { return terms_.size(); }
  const std::map<Monomial, Rational>& terms() const { return terms_; }

  bool is_constant() const {
    if (terms_.empty()) return true;
    if (terms_.size() > 1) return false;
    const auto& m = terms_.begin()->first;
    return std::all_of(m.begin(), m.end(), [](unsigned e) { return e == 0; });
  }

  Rational constant_value() const {
    if (terms_.empty()) return 0;
    if (!is_constant()) throw Error("Polynomial: not a constant");
    return terms_.begin()->second;
  }

  unsigned total_degree() const {
    unsigned d = 0;
    for (const auto& [m, c] : terms_) {
      unsigned t = 0;
      for (unsigned e : m) t += e;
      d = std::max(d, t);
    }
    return d;
  }

  Polynomial& operator+=(const Polynomial& o) {
    unify(o);
    for (const auto& [m, c] : o.aligned(nvars_)) add_term(m, c);
    return *this;
  }
  Polynomial& operator-=(const Polynomial& o) {
    unify(o);
    for (const auto& [m, c] : o.aligned(nvars_)) add_term(m, -c);
    return *this;
  }

  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }

  Polynomial operator-() const {
    Polynomial r(*this);
    for (auto& [m, c] : r.terms_) c = -c;
    return r;
  }

  friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    int nv = std::max(a.nvars_, b.nvars_);
    Polynomial r(nv);
    for (const auto& [ma, ca] : a.aligned(nv))
      for (const auto& [mb, cb] : b.aligned(nv)) {
        Monomial m(nv);
        for (int i = 0; i < nv; ++i) m[i] = ma[i] + mb[i];
        r.add_term(m, ca * cb);
      }
    return r;
  }

  Polynomial& operator*=(const Polynomial& o) { return *this = *this * o; }

  Polynomial& operator*=(const Rational& c) {
    if (c == 0) {
      terms_.clear();
      return *this;
    }
    for (auto& [m, v] : terms_) v *= c;
    return *this;
  }
  friend Polynomial operator*(Polynomial a, const Rational& c) { return a *= c; }
  friend Polynomial operator*(const Rational& c, Polynomial a) { return a *= c; }

  bool operator==(const Polynomial& o) const {
    int nv = std::max(nvars_, o.nvars_);
    return aligned(nv) == o.aligned(nv);
  }
  bool operator!=(const Polynomial& o) const { return !(*this == o); }
  // Ordering so polynomials can key maps; not a mathematical order.
  bool operator<(const Polynomial& o) const {
    if (nvars_ != o.nvars_) {
      int nv = std::max(nvars_, o.nvars_);
      return aligned(nv) < o.aligned(nv);
    }
    return terms_ < o.terms_;
  }

  // d/dx_i
  Polynomial derivative(int i) const {
    Polynomial r(nvars_);
    if (i < 0 || i >= nvars_) return r;
    for (const auto& [m, c] : terms_) {
      if (m[i] == 0) continue;
      Monomial d = m;
      d[i] -= 1;
      r.add_term(d, c * Rational(m[i]));
    }
    return r;
  }

  // Keep only monomials with all exponents zero (the "reduced" part).
  Rational constant_part() const {
    Monomial z(nvars_, 0);
    auto it = terms_.find(z);
    return it == terms_.end() ? Rational(0) : it->second;
  }

  // Exact division: returns num/den when den divides num exactly.
  static std::optional<Polynomial> try_divide(const Polynomial& num, const Polynomial& den) {
    if (den.is_zero()) return std::nullopt;
    int nv = std::max(num.nvars_, den.nvars_);
    std::map<Monomial, Rational> rem = num.aligned(nv);
    auto dterms = den.aligned(nv);
    // leading monomial of den in the map's (lexicographic) order
    auto lead = dterms.rbegin();
    Polynomial q(nv);
    while (!rem.empty()) {
      auto r_lead = rem.rbegin();
      Monomial qm(nv);
      for (int i = 0; i < nv; ++i) {
        if (r_lead->first[i] < lead->first[i]) return std::nullopt;
        qm[i] = r_lead->first[i] - lead->first[i];
      }
      Rational qc = r_lead->second / lead->second;
      q.add_term(qm, qc);
      for (const auto& [m, c] : dterms) {
        Monomial mm(nv);
        for (int i = 0; i < nv; ++i) mm[i] = m[i] + qm[i];
        auto it = rem.find(mm);
        Rational nc = (it == rem.end() ? Rational(0) : it->second) - c * qc;
        if (nc == 0) {
          if (it != rem.end()) rem.erase(it);
        } else {
          rem[mm] = nc;
        }
      }
    }
    return q;
  }

  // Evaluate with each variable replaced by a value of ring type T.
  // T needs *, +, and construction from Rational via caller-supplied hooks.
  template <typename T, typename MakeConst, typename Pow>
  T evaluate(MakeConst make_const, Pow var_power) const {
    T acc = make_const(Rational(0));
    for (const auto& [m, c] : terms_) {
      T t = make_const(c);
      for (int i = 0; i < nvars_; ++i)
        if (m[i] > 0) t = t * var_power(i, m[i]);
      acc = acc + t;
    }
    return acc;
  }

  // Content: gcd of the rational coefficients' numerators over lcm of
  // denominators, signed to make the leading coefficient positive.
  Rational content() const {
    if (terms_.empty()) return 1;
    Integer num_gcd = 0, den_lcm = 1;
    for (const auto& [m, c] : terms_) {
      num_gcd = boost::multiprecision::gcd(num_gcd, boost::multiprecision::numerator(c));
      den_lcm = boost::multiprecision::lcm(den_lcm, boost::multiprecision::denominator(c));
    }
    Rational r(num_gcd, den_lcm);
    if (terms_.rbegin()->second < 0) r = -r;
    return r == 0 ? Rational(1) : r;
  }

  void add_term(const Monomial& m, const Rational& c) {
    if (c == 0) return;
    auto it = terms_.find(m);
    if (it == terms_.end()) {
      terms_[m] = c;
    } else {
      it->second += c;
      if (it->second == 0) terms_.erase(it);
    }
  }

 private:
  void unify(const Polynomial& o) {
    if (o.nvars_ > nvars_) {
      auto up = aligned(o.nvars_);
      nvars_ = o.nvars_;
      terms_ = std::move(up);
    }
  }

  std::map<Monomial, Rational> aligned(int nv) const {
    if (nv == nvars_) return terms_;
    std::map<Monomial, Rational> r;
    for (const auto& [m, c] : terms_) {
      Monomial mm(nv, 0);
      std::copy(m.begin(), m.end(), mm.begin());
      r[mm] = c;
    }
    return r;
  }

  int nvars_ = 0;
  std::map<Monomial, Rational> terms_;
};

}  // namespace superforms
