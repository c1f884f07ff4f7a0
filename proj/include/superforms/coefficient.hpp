#pragma once

#include <utility>

#include "superforms/polynomial.hpp"

namespace superforms {

// Coefficient ring of the form algebra: rational functions p(x)/q(x) in the
// even coordinates, with q == 1 in almost all computations.  Denominators
// only ever appear through pullbacks (division by det chi(x)).
//
// Canonicalisation is light: rational content is stripped from the
// denominator, a common monomial factor is cancelled, and exact division is
// attempted.  Equality is decided by cross-multiplication, which is exact
// regardless of whether the fraction happens to be fully reduced.
class Coefficient {
 public:
  Coefficient() : num_(0), den_(0, 1) {}
  Coefficient(const Rational& r) : num_(0, r), den_(0, 1) {}  // NOLINT(implicit)
  Coefficient(int v) : num_(0, v), den_(0, 1) {}              // NOLINT(implicit)
  explicit Coefficient(Polynomial p) : num_(std::move(p)), den_(num_.nvars(), 1) {}
  Coefficient(Polynomial num, Polynomial den) : num_(std::move(num)), den_(std::move(den)) {
    if (den_.is_zero()) throw Error("Coefficient: zero denominator");
    reduce();
  }

  static Coefficient variable(int nvars, int i) {
    return Coefficient(Polynomial::variable(nvars, i));
  }

  const Polynomial& num() const { return num_; }
  const Polynomial& den() const { return den_; }
  bool is_zero() const { return num_.is_zero(); }
  bool is_polynomial() const { return den_.is_constant(); }

  bool is_constant() const { return num_.is_constant() && den_.is_constant(); }
  Rational constant_value() const {
    return num_.constant_value() / den_.constant_value();
  }

  // The image under x -> 0 used by reduced/top extractions; requires the
  // denominator to have a non-vanishing constant part.
  Rational value_at_origin() const {
    Rational d = den_.constant_part();
    if (d == 0) throw Error("Coefficient: denominator vanishes at the origin");
    return num_.constant_part() / d;
  }

  friend Coefficient operator+(const Coefficient& a, const Coefficient& b) {
    if (a.den_ == b.den_) return Coefficient(a.num_ + b.num_, a.den_);
    return Coefficient(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
  }
  friend Coefficient operator-(const Coefficient& a, const Coefficient& b) {
    if (a.den_ == b.den_) return Coefficient(a.num_ - b.num_, a.den_);
    return Coefficient(a.num_ * b.den_ - b.num_ * a.den_, a.den_ * b.den_);
  }
  friend Coefficient operator*(const Coefficient& a, const Coefficient& b) {
    return Coefficient(a.num_ * b.num_, a.den_ * b.den_);
  }
  friend Coefficient operator/(const Coefficient& a, const Coefficient& b) {
    if (b.num_.is_zero()) throw Error("Coefficient: division by zero");
    return Coefficient(a.num_ * b.den_, a.den_ * b.num_);
  }
  Coefficient operator-() const {
    Coefficient r(*this);
    r.num_ = -r.num_;
    return r;
  }
  Coefficient& operator+=(const Coefficient& o) { return *this = *this + o; }
  Coefficient& operator-=(const Coefficient& o) { return *this = *this - o; }
  Coefficient& operator*=(const Coefficient& o) { return *this = *this * o; }

  bool operator==(const Coefficient& o) const {
    return num_ * o.den_ == o.num_ * den_;
  }
  bool operator!=(const Coefficient& o) const { return !(*this == o); }

  Coefficient derivative(int i) const {
    if (is_polynomial()) return Coefficient(num_.derivative(i));
    // (p/q)' = (p'q - pq')/q^2
    return Coefficient(num_.derivative(i) * den_ - num_ * den_.derivative(i), den_ * den_);
  }

 private:
  void reduce() {
    if (num_.is_zero()) {
      den_ = Polynomial(den_.nvars(), 1);
      return;
    }
    // strip a common monomial factor
    strip_monomial_content();
    // normalise the denominator's rational content to 1 (monic-ish form)
    Rational c = den_.content();
    if (c != 1) {
      den_ *= Rational(1) / c;
      num_ *= Rational(1) / c;
    }
    if (den_.is_constant()) {
      Rational d = den_.constant_value();
      if (d != 1) num_ *= Rational(1) / d;
      den_ = Polynomial(num_.nvars(), 1);
      return;
    }
    if (auto q = Polynomial::try_divide(num_, den_)) {
      num_ = *q;
      den_ = Polynomial(num_.nvars(), 1);
    }
  }

  void strip_monomial_content() {
    int nv = std::max(num_.nvars(), den_.nvars());
    std::vector<unsigned> common(nv, ~0u);
    auto scan = [&](const Polynomial& p) {
      for (const auto& [m, c] : p.terms())
        for (std::size_t i = 0; i < m.size(); ++i) common[i] = std::min(common[i], m[i]);
      for (int i = p.nvars(); i < nv; ++i) common[i] = 0;
    };
    scan(num_);
    scan(den_);
    bool any = false;
    for (unsigned e : common) any = any || e > 0;
    if (!any) return;
    auto strip = [&](const Polynomial& p) {
      Polynomial r(nv);
      for (const auto& [m, c] : p.terms()) {
        Polynomial::Monomial mm(nv, 0);
        for (std::size_t i = 0; i < m.size(); ++i) mm[i] = m[i] - common[i];
        r.add_term(mm, c);
      }
      return r;
    };
    num_ = strip(num_);
    den_ = strip(den_);
  }

  Polynomial num_, den_;
};

}  // namespace superforms
