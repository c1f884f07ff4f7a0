#pragma once

#include <algorithm>
#include <bit>
#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "superforms/coefficient.hpp"
#include "superforms/domain.hpp"

namespace superforms {

// ---------------------------------------------------------------------------
// Monomials
//
// A term of the algebra is
//
//     c(x) * th^{i1}..th^{ir} * dx^{j1}..dx^{js} * (dth^1)^{p1}.. * delta^{(k1)}(dth^{a1})..
//
// with all generator lists in ascending index order.  Parities: theta, dx and
// every delta factor are odd; dtheta and the coefficient are even.  The sign
// of any reordering is the parity of the permutation of the odd letters; that
// single convention fixes every sign in the library.
//
// Rewrite rules applied on the way into normal form:
//   th^a th^a = 0,  dx^i dx^i = 0
//   delta(dth^a) delta(dth^a)-type pairs (any orders, same index) = 0
//   dth^a * delta^{(k)}(dth^a) = -k delta^{(k-1)}(dth^a),  and = 0 for k = 0
//
// A monomial may carry a `truncated` flag: it is then the leading term of a
// series tail that was cut off at a finite order (see delta_series).  The
// flag rides along through every operation; a flagged term that gets
// annihilated takes the flag with it.
// ---------------------------------------------------------------------------

using GrassmannMonomial = std::uint64_t;  // bit a set <=> th^{a+1} present

struct DeltaFactor {
  int index = 0;  // which dtheta the delta is supported on
  int order = 0;  // k in delta^{(k)}
  auto operator<=>(const DeltaFactor&) const = default;
};

struct FormMonomial {
  std::uint64_t dx = 0;                     // bitmask of dx factors
  std::vector<std::pair<int, int>> dtheta;  // (index, power), sorted, power > 0
  std::vector<DeltaFactor> deltas;          // sorted by index, one per index
  bool truncated = false;
  auto operator<=>(const FormMonomial&) const = default;
};

struct MonomialKey {
  GrassmannMonomial theta = 0;
  FormMonomial form;
  auto operator<=>(const MonomialKey&) const = default;

  int picture() const { return static_cast<int>(form.deltas.size()); }
  int degree() const {
    int d = std::popcount(form.dx);
    for (const auto& [i, p] : form.dtheta) d += p;
    for (const auto& df : form.deltas) d -= df.order;
    return d;
  }
  int parity() const {
    return static_cast<int>((std::popcount(theta) + std::popcount(form.dx) +
                             form.deltas.size()) & 1u);
  }
  int dtheta_power(int index) const {
    for (const auto& [i, p] : form.dtheta)
      if (i == index) return p;
    return 0;
  }
  const DeltaFactor* delta_on(int index) const {
    for (const auto& df : form.deltas)
      if (df.index == index) return &df;
    return nullptr;
  }
};

namespace detail {

// Rank of an odd generator in the canonical word; used for sign counting.
// theta < dx < delta, each class ascending by index.
struct OddRank {
  int cls;
  int index;
  auto operator<=>(const OddRank&) const = default;
};

inline void odd_sequence(const MonomialKey& k, std::vector<OddRank>& out) {
  out.clear();
  for (int a = 0; a < 64; ++a)
    if (k.theta >> a & 1u) out.push_back({0, a});
  for (int i = 0; i < 64; ++i)
    if (k.form.dx >> i & 1u) out.push_back({1, i});
  for (const auto& df : k.form.deltas) out.push_back({2, df.index});
}

}  // namespace detail

// Product of two canonical monomials; returns nothing when the product is
// zero.  `coeff` accumulates the sign and any factors produced by the
// dtheta-delta reduction.
inline std::optional<MonomialKey> wedge_monomials(const MonomialKey& a, const MonomialKey& b,
                                                  Rational& factor) {
  if (a.theta & b.theta) return std::nullopt;
  if (a.form.dx & b.form.dx) return std::nullopt;
  // two deltas on the same index vanish by odd parity
  for (const auto& da : a.form.deltas)
    if (b.delta_on(da.index)) return std::nullopt;

  // sign: inversions between the two odd letter sequences
  static thread_local std::vector<detail::OddRank> oa, ob;
  detail::odd_sequence(a, oa);
  detail::odd_sequence(b, ob);
  long inversions = 0;
  for (const auto& x : oa)
    for (const auto& y : ob)
      if (y < x) ++inversions;
  factor = (inversions & 1) ? -1 : 1;

  MonomialKey r;
  r.theta = a.theta | b.theta;
  r.form.dx = a.form.dx | b.form.dx;
  r.form.truncated = a.form.truncated || b.form.truncated;

  // merge dtheta powers
  std::map<int, int> pw;
  for (const auto& [i, p] : a.form.dtheta) pw[i] += p;
  for (const auto& [i, p] : b.form.dtheta) pw[i] += p;

  // merge deltas, then reduce dth^a against delta^{(k)}(dth^a):
  // (dth)^p delta^{(k)} = (-1)^p k(k-1)..(k-p+1) delta^{(k-p)}, zero if p > k.
  std::vector<DeltaFactor> deltas;
  deltas.reserve(a.form.deltas.size() + b.form.deltas.size());
  deltas.insert(deltas.end(), a.form.deltas.begin(), a.form.deltas.end());
  deltas.insert(deltas.end(), b.form.deltas.begin(), b.form.deltas.end());
  std::sort(deltas.begin(), deltas.end());
  for (auto& df : deltas) {
    auto it = pw.find(df.index);
    if (it == pw.end() || it->second == 0) continue;
    int p = it->second;
    if (p > df.order) return std::nullopt;
    factor *= falling_factorial(df.order, p);
    if (p & 1) factor = -factor;
    df.order -= p;
    pw.erase(it);
  }
  for (const auto& [i, p] : pw)
    if (p > 0) r.form.dtheta.emplace_back(i, p);
  r.form.deltas = std::move(deltas);
  return r;
}

// ---------------------------------------------------------------------------
// FormExpr: a finite Coefficient-weighted sum of canonical monomials over a
// fixed domain.  Always stored in normal form; all values immutable in
// practice (operations return new expressions).
// ---------------------------------------------------------------------------
class FormExpr {
 public:
  FormExpr() = default;
  explicit FormExpr(SuperDomain dom) : dom_(std::move(dom)) {}

  static FormExpr zero(const SuperDomain& dom) { return FormExpr(dom); }

  static FormExpr scalar(const SuperDomain& dom, const Coefficient& c) {
    FormExpr e(dom);
    e.add_term({}, c);
    return e;
  }
  static FormExpr one(const SuperDomain& dom) { return scalar(dom, Coefficient(1)); }

  // the even coordinate x^i as a function
  static FormExpr coordinate(const SuperDomain& dom, int i) {
    check_index(i, dom.m, "x");
    return scalar(dom, Coefficient::variable(dom.m, i));
  }
  static FormExpr theta(const SuperDomain& dom, int a) {
    check_index(a, dom.n, "theta");
    FormExpr e(dom);
    MonomialKey k;
    k.theta = std::uint64_t{1} << a;
    e.add_term(k, Coefficient(1));
    return e;
  }
  static FormExpr dx(const SuperDomain& dom, int i) {
    check_index(i, dom.m, "dx");
    FormExpr e(dom);
    MonomialKey k;
    k.form.dx = std::uint64_t{1} << i;
    e.add_term(k, Coefficient(1));
    return e;
  }
  static FormExpr dtheta(const SuperDomain& dom, int a, int power = 1) {
    check_index(a, dom.n, "dtheta");
    if (power < 0) throw Error("dtheta: negative power");
    FormExpr e(dom);
    MonomialKey k;
    if (power > 0) k.form.dtheta.emplace_back(a, power);
    e.add_term(k, Coefficient(1));
    return e;
  }
  static FormExpr delta(const SuperDomain& dom, int a, int order = 0) {
    check_index(a, dom.n, "delta");
    if (order < 0) throw Error("delta: negative derivative order");
    FormExpr e(dom);
    MonomialKey k;
    k.form.deltas.push_back({a, order});
    e.add_term(k, Coefficient(1));
    return e;
  }

  const SuperDomain& domain() const { return dom_; }
  const std::map<MonomialKey, Coefficient>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t term_count() const { return terms_.size(); }

  // Insert c * key, merging with an existing term.  Assumes key is canonical.
  void add_term(const MonomialKey& key, const Coefficient& c) {
    if (c.is_zero()) return;
    auto it = terms_.find(key);
    if (it == terms_.end()) {
      if (term_limit() && terms_.size() >= term_limit())
        throw Error("expression exceeds the configured term limit");
      terms_.emplace(key, c);
    } else {
      it->second += c;
      if (it->second.is_zero()) terms_.erase(it);
    }
  }

  FormExpr& operator+=(const FormExpr& o) {
    require_same_domain(o, "+");
    for (const auto& [k, c] : o.terms_) add_term(k, c);
    return *this;
  }
  FormExpr& operator-=(const FormExpr& o) {
    require_same_domain(o, "-");
    for (const auto& [k, c] : o.terms_) add_term(k, -c);
    return *this;
  }
  friend FormExpr operator+(FormExpr a, const FormExpr& b) { return a += b; }
  friend FormExpr operator-(FormExpr a, const FormExpr& b) { return a -= b; }
  FormExpr operator-() const {
    FormExpr r(dom_);
    for (const auto& [k, c] : terms_) r.terms_.emplace(k, -c);
    return r;
  }

  // graded wedge product
  friend FormExpr operator*(const FormExpr& a, const FormExpr& b) {
    a.require_same_domain(b, "wedge");
    FormExpr r(a.dom_);
    for (const auto& [ka, ca] : a.terms_)
      for (const auto& [kb, cb] : b.terms_) {
        Rational f;
        if (auto k = wedge_monomials(ka, kb, f)) r.add_term(*k, ca * cb * Coefficient(f));
      }
    return r;
  }
  FormExpr& operator*=(const FormExpr& o) { return *this = *this * o; }

  FormExpr& operator*=(const Coefficient& c) {
    if (c.is_zero()) {
      terms_.clear();
      return *this;
    }
    for (auto& [k, v] : terms_) v *= c;
    return *this;
  }
  friend FormExpr operator*(FormExpr a, const Coefficient& c) { return a *= c; }
  friend FormExpr operator*(const Coefficient& c, FormExpr a) { return a *= c; }
  friend FormExpr operator*(FormExpr a, const Rational& c) { return a *= Coefficient(c); }
  friend FormExpr operator*(const Rational& c, FormExpr a) { return a *= Coefficient(c); }

  bool operator==(const FormExpr& o) const {
    if (dom_ != o.dom_ || terms_.size() != o.terms_.size()) return false;
    auto it = o.terms_.begin();
    for (auto jt = terms_.begin(); jt != terms_.end(); ++jt, ++it)
      if (jt->first != it->first || jt->second != it->second) return false;
    return true;
  }
  bool operator!=(const FormExpr& o) const { return !(*this == o); }

  // wedge power
  FormExpr pow(int p) const {
    if (p < 0) throw Error("pow: negative exponent");
    FormExpr r = one(dom_);
    for (int i = 0; i < p; ++i) r = r * *this;
    return r;
  }

  bool is_function() const {  // degree 0, picture 0: coefficients and thetas only
    for (const auto& [k, c] : terms_)
      if (k.form.dx || !k.form.dtheta.empty() || !k.form.deltas.empty()) return false;
    return true;
  }

  bool is_truncated() const {
    for (const auto& [k, c] : terms_)
      if (k.form.truncated) return true;
    return false;
  }

  FormExpr exact_part() const {
    FormExpr r(dom_);
    for (const auto& [k, c] : terms_)
      if (!k.form.truncated) r.terms_.emplace(k, c);
    return r;
  }
  FormExpr truncated_part() const {
    FormExpr r(dom_);
    for (const auto& [k, c] : terms_)
      if (k.form.truncated) r.terms_.emplace(k, c);
    return r;
  }
  FormExpr marked_truncated() const {
    FormExpr r(dom_);
    for (const auto& [k, c] : terms_) {
      MonomialKey kk = k;
      kk.form.truncated = true;
      r.add_term(kk, c);
    }
    return r;
  }

  // Expression-size guard used by the CLI (0 = unlimited).
  static std::size_t& term_limit() {
    static thread_local std::size_t limit = 0;
    return limit;
  }

  void require_same_domain(const FormExpr& o, const char* op) const {
    if (dom_ != o.dom_)
      throw Error(std::string(op) + ": mismatched domains " + dom_.to_string() + " vs " +
                  o.dom_.to_string());
  }

 private:
  static void check_index(int i, int bound, const char* what) {
    if (i < 0 || i >= bound)
      throw Error(std::string(what) + " index " + std::to_string(i + 1) + " out of range");
  }

  SuperDomain dom_;
  std::map<MonomialKey, Coefficient> terms_;
};

inline FormExpr wedge(const FormExpr& a, const FormExpr& b) { return a * b; }

// Already-constructed expressions are in normal form by construction; the
// rewrite system lives in wedge_monomials and fires on every product.
inline FormExpr normalize(const FormExpr& a) { return a; }

// ---------------------------------------------------------------------------
// Gradings
// ---------------------------------------------------------------------------

struct Bidegree {
  int degree = 0;
  int picture = 0;
  auto operator<=>(const Bidegree&) const = default;
  std::string to_string() const {
    return "(" + std::to_string(degree) + "|" + std::to_string(picture) + ")";
  }
};

inline Bidegree term_bidegree(const MonomialKey& k) { return {k.degree(), k.picture()}; }

// Bidegree of a homogeneous expression; lists the offending bidegrees
// otherwise.  The zero expression is assigned (0|0).
inline Bidegree bidegree(const FormExpr& a) {
  std::set<Bidegree> seen;
  for (const auto& [k, c] : a.terms()) seen.insert(term_bidegree(k));
  if (seen.empty()) return {0, 0};
  if (seen.size() == 1) return *seen.begin();
  std::string msg = "bidegree: inhomogeneous expression with bidegrees";
  for (const auto& b : seen) msg += " " + b.to_string();
  throw Error(msg);
}

inline bool has_bidegree(const FormExpr& a, Bidegree b) {
  for (const auto& [k, c] : a.terms())
    if (term_bidegree(k) != b) return false;
  return true;
}

// Parity of a homogeneous expression (0 even, 1 odd); zero counts as even.
inline int parity(const FormExpr& a) {
  int p = -1;
  for (const auto& [k, c] : a.terms()) {
    if (p < 0)
      p = k.parity();
    else if (p != k.parity())
      throw Error("parity: expression of mixed parity");
  }
  return p < 0 ? 0 : p;
}

inline bool is_parity_homogeneous(const FormExpr& a) {
  int p = -1;
  for (const auto& [k, c] : a.terms()) {
    if (p < 0)
      p = k.parity();
    else if (p != k.parity())
      return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// delta of a shifted argument: the Taylor rule
//
//   delta(dth^a + R) = sum_p  R^p / p!  delta^{(p)}(dth^a)
//
// The series terminates exactly when R is nilpotent (every term carries a
// theta or a dx).  Otherwise it is cut at `order`, and the leading omitted
// term is kept as a monomial flagged `truncated`: any later operation that
// annihilates the tail (e.g. wedging with delta(dth^b) for a dth^b appearing
// in R) removes the marker and restores an exact result.
// ---------------------------------------------------------------------------

inline bool is_nilpotent_function_part(const FormExpr& r) {
  for (const auto& [k, c] : r.terms())
    if (k.theta == 0 && k.form.dx == 0) return false;
  return true;
}

inline FormExpr delta_series(const FormExpr& argument, int base_index, int order) {
  const SuperDomain& dom = argument.domain();
  if (order < 0) throw Error("delta_series: negative truncation order");
  for (const auto& [k, c] : argument.terms()) {
    if (k.picture() != 0) throw Error("delta_series: argument carries picture");
    if (k.degree() != 1) throw Error("delta_series: argument must be a 1-form");
  }
  FormExpr shift = argument - FormExpr::dtheta(dom, base_index);
  bool exact = is_nilpotent_function_part(shift);

  FormExpr result(dom);
  FormExpr power = FormExpr::one(dom);
  int p = 0;
  while (true) {
    FormExpr term = power * FormExpr::delta(dom, base_index, p);
    term *= Coefficient(Rational(1) / rational_factorial(p));
    if (!exact && p == order + 1) {
      result += term.marked_truncated();
      break;
    }
    result += term;
    ++p;
    power = power * shift;
    if (power.is_zero()) break;  // nilpotent shift: the series ended exactly
  }
  return result;
}

}  // namespace superforms
