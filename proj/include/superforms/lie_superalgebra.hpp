#pragma once

#include <cctype>
#include <map>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "superforms/form.hpp"

namespace superforms {

// --------------------------------------------------------------------------
// A finite-dimensional Lie superalgebra presented by structure constants,
// together with the dual Maurer-Cartan differential table.
//
// Cochains reuse FormExpr: the dual of an even generator is an
// anticommuting 1-form (a dx slot), the dual of an odd generator is a
// commuting 1-form (a dth slot).  Chains reuse the same monomial encoding
// through the parity flip Pi: Pi(even) is odd (a dx-style mask), Pi(odd) is
// even (dth-style powers).
//
// Plain-text model format, one declaration per line ('#' comments):
//   generator P0 even
//   generator D1 odd
//   [D1,D2] = 2*P2
//   [D1,D1] = 2*P0 - 2*P1
// Brackets not listed are zero; graded antisymmetry fills the other order.
// --------------------------------------------------------------------------

struct LieGenerator {
  std::string name;
  bool odd = false;
};

class LieSuperalgebraModel {
 public:
  LieSuperalgebraModel(std::vector<LieGenerator> gens,
                       std::map<std::pair<int, int>, std::vector<Rational>> brackets)
      : gens_(std::move(gens)), brackets_(std::move(brackets)) {
    std::vector<std::string> even_names, odd_names;
    for (const auto& g : gens_) {
      if (g.odd)
        odd_names.push_back(g.name);
      else
        even_names.push_back(g.name);
      index_.push_back(g.odd ? static_cast<int>(odd_names.size()) - 1
                             : static_cast<int>(even_names.size()) - 1);
    }
    dom_ = SuperDomain(static_cast<int>(even_names.size()), static_cast<int>(odd_names.size()),
                       even_names, odd_names);
    validate();
  }

  static LieSuperalgebraModel parse(const std::string& text);

  const std::vector<LieGenerator>& generators() const { return gens_; }
  int size() const { return static_cast<int>(gens_.size()); }
  int even_dimension() const { return dom_.m; }
  int odd_dimension() const { return dom_.n; }
  // The cochain algebra lives on this auxiliary domain: even duals are dx
  // slots, odd duals are dth slots, there are no coordinates.
  const SuperDomain& cochain_domain() const { return dom_; }

  int find(const std::string& name) const {
    for (int i = 0; i < size(); ++i)
      if (gens_[i].name == name) return i;
    return -1;
  }

  // [g_i, g_j] as coefficients over the generators (graded symmetry applied)
  std::vector<Rational> bracket(int i, int j) const {
    bool swap = i > j;
    auto it = brackets_.find(swap ? std::make_pair(j, i) : std::make_pair(i, j));
    std::vector<Rational> r(size(), 0);
    if (it == brackets_.end()) return r;
    r = it->second;
    if (swap && !(gens_[i].odd && gens_[j].odd))
      for (auto& c : r) c = -c;  // [j,i] stored; flip unless both odd
    return r;
  }

  // dual 1-form of generator i as a cochain
  FormExpr dual(int i) const {
    return gens_[i].odd ? FormExpr::dtheta(dom_, index_[i]) : FormExpr::dx(dom_, index_[i]);
  }

  // Maurer-Cartan differential of the dual of generator k:
  //   d w^k = -1/2 sum_{ij} (-1)^{|i|(|j|+1)} f^k_{ij} w^i w^j
  // The Koszul weight compensates the parity flip of the dual 1-forms
  // (|w^i| = |i| + 1); without it every mixed even-odd bracket would cancel
  // out of the sum.  Fixed by the realisation dual to [P, D] = D, whose
  // Maurer-Cartan equation is d w^D = -w^P w^D.
  FormExpr mc_differential(int k) const {
    FormExpr r(dom_);
    for (int i = 0; i < size(); ++i)
      for (int j = 0; j < size(); ++j) {
        Rational f = bracket(i, j)[k];
        if (f == 0) continue;
        if (gens_[i].odd && !gens_[j].odd) f = -f;
        r += dual(i) * dual(j) * (f * Rational(-1, 2));
      }
    return r;
  }

  // The Chevalley-Eilenberg differential, extending the Maurer-Cartan table
  // as an odd derivation from the left.
  FormExpr ce_d(const FormExpr& a) const {
    FormExpr r(dom_);
    for (const auto& [k, c] : a.terms()) {
      if (k.theta || !k.form.deltas.empty())
        throw Error("ce_d: cochains carry only dual-generator factors");
      // odd (dx-slot) factors: prefix sign counts the odd letters in front
      int pos = 0;
      for (int i = 0; i < dom_.m; ++i) {
        if (!(k.form.dx >> i & 1u)) continue;
        MonomialKey base = k;
        base.form.dx &= ~(std::uint64_t{1} << i);
        FormExpr rest(dom_);
        rest.add_term(base, (pos & 1) ? -c : c);
        r += mc_of_even_[i] * rest;
        ++pos;
      }
      // even (dth-slot) factors: no sign, multiplicity p
      for (std::size_t t = 0; t < k.form.dtheta.size(); ++t) {
        const auto [a_idx, p] = k.form.dtheta[t];
        if (mc_of_odd_[a_idx].is_zero()) continue;
        MonomialKey base = k;
        if (p == 1)
          base.form.dtheta.erase(base.form.dtheta.begin() + t);
        else
          base.form.dtheta[t].second = p - 1;
        FormExpr rest(dom_);
        rest.add_term(base, c * Coefficient(Rational(p)));
        r += mc_of_odd_[a_idx] * rest;
      }
    }
    return r;
  }

  // index of generator i inside its parity class
  int class_index(int i) const { return index_[i]; }
  // generator (global index) for an even-class or odd-class slot
  int even_generator(int slot) const {
    for (int i = 0; i < size(); ++i)
      if (!gens_[i].odd && index_[i] == slot) return i;
    throw Error("even_generator: bad slot");
  }
  int odd_generator(int slot) const {
    for (int i = 0; i < size(); ++i)
      if (gens_[i].odd && index_[i] == slot) return i;
    throw Error("odd_generator: bad slot");
  }

 private:
  void validate() {
    for (const auto& [ij, coeffs] : brackets_) {
      auto [i, j] = ij;
      if (i < 0 || j < 0 || i >= size() || j >= size() ||
          static_cast<int>(coeffs.size()) != size())
        throw Error("LieSuperalgebraModel: malformed bracket table");
      // parity: |[i,j]| = |i| + |j|
      int par = (gens_[i].odd + gens_[j].odd) & 1;
      for (int k = 0; k < size(); ++k)
        if (coeffs[k] != 0 && (gens_[k].odd ? 1 : 0) != par)
          throw Error("LieSuperalgebraModel: bracket [" + gens_[i].name + "," + gens_[j].name +
                      "] violates parity");
      if (i == j && !gens_[i].odd) {
        for (int k = 0; k < size(); ++k)
          if (coeffs[k] != 0)
            throw Error("LieSuperalgebraModel: [x,x] must vanish for even x");
      }
    }
    // cache the MC table, then graded Jacobi as d^2 = 0 on every dual
    mc_of_even_.clear();
    mc_of_odd_.clear();
    for (int s = 0; s < dom_.m; ++s) mc_of_even_.push_back(mc_differential(even_generator(s)));
    for (int s = 0; s < dom_.n; ++s) mc_of_odd_.push_back(mc_differential(odd_generator(s)));
    for (int k = 0; k < size(); ++k)
      if (!ce_d(mc_differential(k)).is_zero())
        throw Error("LieSuperalgebraModel: graded Jacobi fails (d^2 != 0 on " + gens_[k].name +
                    ")");
  }

  std::vector<LieGenerator> gens_;
  std::map<std::pair<int, int>, std::vector<Rational>> brackets_;
  std::vector<int> index_;  // index within the parity class
  SuperDomain dom_;
  std::vector<FormExpr> mc_of_even_, mc_of_odd_;
};

// --------------------------------------------------------------------------
// plain-text model parsing
// --------------------------------------------------------------------------
inline LieSuperalgebraModel LieSuperalgebraModel::parse(const std::string& text) {
  std::vector<LieGenerator> gens;
  struct PendingBracket {
    std::string a, b, rhs;
    int line;
  };
  std::vector<PendingBracket> pending;

  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    std::istringstream ls(line);
    std::string head;
    if (!(ls >> head)) continue;
    if (head == "generator") {
      std::string name, par;
      if (!(ls >> name >> par) || (par != "even" && par != "odd"))
        throw Error("model line " + std::to_string(lineno) +
                    ": expected 'generator <name> even|odd'");
      gens.push_back({name, par == "odd"});
    } else if (head.size() >= 2 && head[0] == '[') {
      std::string rest = head;
      std::string tail;
      while (ls >> tail) rest += " " + tail;
      auto close = rest.find(']');
      auto comma = rest.find(',');
      auto eq = rest.find('=');
      if (close == std::string::npos || comma == std::string::npos || eq == std::string::npos ||
          comma > close || eq < close)
        throw Error("model line " + std::to_string(lineno) + ": expected '[A,B] = ...'");
      auto strip = [](std::string s) {
        auto b = s.find_first_not_of(" \t");
        auto e = s.find_last_not_of(" \t");
        return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
      };
      pending.push_back({strip(rest.substr(1, comma - 1)),
                         strip(rest.substr(comma + 1, close - comma - 1)),
                         strip(rest.substr(eq + 1)), lineno});
    } else {
      throw Error("model line " + std::to_string(lineno) + ": unrecognised declaration");
    }
  }

  auto find = [&](const std::string& n) {
    for (std::size_t i = 0; i < gens.size(); ++i)
      if (gens[i].name == n) return static_cast<int>(i);
    return -1;
  };

  std::map<std::pair<int, int>, std::vector<Rational>> brackets;
  for (const auto& pb : pending) {
    int i = find(pb.a), j = find(pb.b);
    if (i < 0 || j < 0)
      throw Error("model line " + std::to_string(pb.line) + ": unknown generator");
    // parse rhs: sum of [+-] [rational *] name
    std::vector<Rational> coeffs(gens.size(), 0);
    std::string s = pb.rhs;
    std::size_t pos = 0;
    auto skip_ws = [&] {
      while (pos < s.size() && (s[pos] == ' ' || s[pos] == '\t')) ++pos;
    };
    skip_ws();
    if (pos < s.size() && s.compare(pos, 1, "0") == 0 && pos + 1 == s.size()) {
      // explicit zero bracket
    } else {
      while (pos < s.size()) {
        skip_ws();
        Rational sign = 1;
        if (pos < s.size() && (s[pos] == '+' || s[pos] == '-')) {
          if (s[pos] == '-') sign = -1;
          ++pos;
          skip_ws();
        }
        Rational num = 1, den = 1;
        bool have_num = false;
        while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) {
          if (!have_num) num = 0;
          num = num * 10 + (s[pos] - '0');
          have_num = true;
          ++pos;
        }
        if (have_num && pos < s.size() && s[pos] == '/') {
          ++pos;
          den = 0;
          while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) {
            den = den * 10 + (s[pos] - '0');
            ++pos;
          }
          if (den == 0) throw Error("model line " + std::to_string(pb.line) + ": bad rational");
        }
        skip_ws();
        if (have_num && pos < s.size() && s[pos] == '*') {
          ++pos;
          skip_ws();
        }
        std::string name;
        while (pos < s.size() && (std::isalnum(static_cast<unsigned char>(s[pos])) || s[pos] == '_'))
          name += s[pos++];
        if (name.empty()) throw Error("model line " + std::to_string(pb.line) + ": expected generator name");
        int k = find(name);
        if (k < 0)
          throw Error("model line " + std::to_string(pb.line) + ": unknown generator " + name);
        coeffs[k] += sign * num / den;
        skip_ws();
      }
    }
    brackets[{std::min(i, j), std::max(i, j)}] = [&] {
      if (i <= j) return coeffs;
      // stored order is (j,i): flip sign unless both odd
      if (!(gens[i].odd && gens[j].odd))
        for (auto& c : coeffs) c = -c;
      return coeffs;
    }();
  }
  return LieSuperalgebraModel(std::move(gens), std::move(brackets));
}

}  // namespace superforms
