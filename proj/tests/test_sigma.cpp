#include <catch2/catch_amalgamated.hpp>

#include "superforms/sampling.hpp"
#include "superforms/sigma.hpp"

using namespace superforms;

namespace {

// Literal evaluation of the epsilon-summation form of the pairing: expand
// the full pdx wedge over all orderings with the permutation symbol and the
// 1/(m-p)! prefactor, realising each pdx word as a contraction chain on D in
// word order.  The (-1)^{p(n+1)} factor is the Koszul cost of carrying the
// dx factors through th^1..th^n and of pairing from the left; it converts
// the algebraic pairing into the distributional realisation.
SigmaForm f_epsilon_oracle(int p, const FormExpr& omega) {
  const SuperDomain& dom = omega.domain();
  const int m = dom.m;
  SigmaForm out(dom);
  if (p < 0 || p > m) return out;
  std::vector<int> all(m);
  for (int i = 0; i < m; ++i) all[i] = i;
  for (const auto& [k, c] : omega.terms()) {
    if (k.theta != 0 || !k.form.dtheta.empty() || !k.form.deltas.empty()) continue;
    if (std::popcount(k.form.dx) != p) continue;
    std::vector<int> upper;
    for (int i = 0; i < m; ++i)
      if (k.form.dx >> i & 1u) upper.push_back(i);
    // sum over permutations j of 1..m with j_1..j_p matching the dx indices
    std::vector<int> perm = all;
    SigmaForm acc(dom);
    do {
      bool match = true;
      for (int i = 0; i < p; ++i) match = match && perm[i] == upper[i];
      if (!match) continue;
      int inv = 0;
      for (int i = 0; i < m; ++i)
        for (int j = i + 1; j < m; ++j)
          if (perm[i] > perm[j]) ++inv;
      // realise pdx^{j_{p+1}} .. pdx^{j_m} as a contraction chain on D in
      // word order, i.e. the wedge reordered to the canonical mask
      std::vector<int> rest(perm.begin() + p, perm.end());
      int reorder = 0;
      for (std::size_t i = 0; i < rest.size(); ++i)
        for (std::size_t j = i + 1; j < rest.size(); ++j)
          if (rest[i] > rest[j]) ++reorder;
      SigmaKey sk;
      sk.theta = dom.n == 0 ? 0 : (~std::uint64_t{0} >> (64 - dom.n));
      for (int r : rest) sk.pdx |= std::uint64_t{1} << r;
      Rational w = ((inv + reorder) & 1) ? -1 : 1;
      acc.add_term(sk, c * Coefficient(w));
    } while (std::next_permutation(perm.begin(), perm.end()));
    Rational fact = 1;
    for (int i = 2; i <= m - p; ++i) fact *= i;
    int pm = (p * m) & 1, koszul = (p * (dom.n + 1)) & 1;
    Rational pref = ((pm + koszul) & 1) ? -1 : 1;
    out += acc * Coefficient(pref / fact);
  }
  return out;
}

}  // namespace

TEST_CASE("the spacetime PCO") {
  SuperDomain d12(1, 2);
  CHECK(pco_st(d12) == FormExpr::theta(d12, 0) * FormExpr::theta(d12, 1) *
                           FormExpr::delta(d12, 0) * FormExpr::delta(d12, 1));
  SuperDomain d10(1, 0);
  CHECK(pco_st(d10) == FormExpr::one(d10));  // no odd directions: the trivial picture
  SuperDomain d32(3, 2);
  CHECK(d(pco_st(d32)).is_zero());
  CHECK(bidegree(pco_st(d32)) == Bidegree{0, 2});
}

TEST_CASE("dictionary between the two realisations") {
  SuperDomain dom(3, 2);

  SECTION("the PCO corresponds to the theta-full top section") {
    SigmaForm s(dom);
    SigmaKey k;
    k.theta = 0b11;
    k.pdx = 0b111;
    s.add_term(k, Coefficient(1));
    CHECK(from_sigma(s) == pco_st(dom));
    CHECK(to_sigma(pco_st(dom)) == s);
  }

  SECTION("a bare coefficient times D") {
    SigmaForm s(dom);
    s.add_term({}, Coefficient::variable(3, 1));
    CHECK(from_sigma(s) == FormExpr::coordinate(dom, 1) * berezinian_top_form(dom));
  }

  SECTION("round trip on random integral forms") {
    FormSampler smp(dom, 101);
    for (int t = 0; t < 100; ++t) {
      SigmaForm s = smp.sigma_form(3);
      CHECK(to_sigma(from_sigma(s)) == s);
      FormExpr e = smp.integral_form(3);
      CHECK(from_sigma(to_sigma(e)) == e);
    }
  }

  SECTION("picture validation") {
    CHECK_THROWS_WITH(to_sigma(FormExpr::delta(dom, 0)),
                      Catch::Matchers::ContainsSubstring("picture"));
  }
}

TEST_CASE("delta on Sigma forms") {
  SuperDomain dom(3, 2);

  SECTION("spec examples") {
    SigmaForm s(dom);
    SigmaKey k;
    k.pdx = 0b10;  // pdx^2
    s.add_term(k, Coefficient::variable(3, 1));  // g = x2
    SigmaForm expect(dom);
    expect.add_term({}, Coefficient(1));
    CHECK(delta_sigma(s) == expect);

    CHECK(delta_sigma(SigmaForm::berezinian(dom)).is_zero());

    SigmaForm t(dom);
    SigmaKey kt;
    kt.theta = 0b01;
    kt.pdtheta.emplace_back(0, 1);
    t.add_term(kt, Coefficient(1));
    SigmaForm minus_d(dom);
    minus_d.add_term({}, Coefficient(-1));
    CHECK(delta_sigma(t) == minus_d);
  }

  SECTION("delta squares to zero") {
    FormSampler smp(dom, 7);
    for (int t = 0; t < 500; ++t) {
      SigmaForm s = smp.sigma_form(3);
      CHECK(delta_sigma(delta_sigma(s)).is_zero());
    }
  }

  SECTION("the dictionary intertwines delta with d") {
    FormSampler smp(dom, 13);
    for (int t = 0; t < 200; ++t) {
      SigmaForm s = smp.sigma_form(3);
      CHECK(from_sigma(delta_sigma(s)) == d(from_sigma(s)));
    }
  }
}

TEST_CASE("the cochain map f") {
  SuperDomain dom(3, 2);
  FormSampler smp(dom, 19);

  SECTION("f^(0) reduces the function") {
    // g = x1 + th1 th2 x2: the theta part dies
    FormExpr g = FormExpr::coordinate(dom, 0) +
                 FormExpr::theta(dom, 0) * FormExpr::theta(dom, 1) * FormExpr::coordinate(dom, 1);
    SigmaForm expect(dom);
    SigmaKey k;
    k.theta = 0b11;
    k.pdx = 0b111;
    expect.add_term(k, Coefficient::variable(3, 0));
    CHECK(f_map(0, g) == expect);
    CHECK(f_map(0, FormExpr::theta(dom, 0)).is_zero());
  }

  SECTION("f at top degree via the epsilon oracle") {
    FormExpr top = FormExpr::dx(dom, 0) * FormExpr::dx(dom, 1) * FormExpr::dx(dom, 2);
    SigmaForm expect(dom);
    SigmaKey k;
    k.theta = 0b11;
    expect.add_term(k, Coefficient(1));  // + th1 th2 D on R^(3|2)
    CHECK(f_map(3, top) == expect);
    CHECK(f_map(3, top) == f_epsilon_oracle(3, top));
  }

  SECTION("f agrees with the epsilon-summation oracle in every degree") {
    for (int p = 0; p <= 3; ++p)
      for (int t = 0; t < 30; ++t) {
        FormExpr w = smp.superform_of_degree(p, 3);
        CHECK(f_map(p, w) == f_epsilon_oracle(p, w));
      }
  }

  SECTION("f agrees with wedging the PCO through the dictionary") {
    for (int t = 0; t < 100; ++t) {
      FormExpr w = smp.superform(3);
      CHECK(f_map_total(w) == to_sigma(w * pco_st(dom)));
    }
  }

  SECTION("f rejects pictures") {
    CHECK_THROWS_AS(f_map(0, FormExpr::delta(dom, 0)), Error);
  }

  SECTION("cochain identity per degree") {
    for (int p = 0; p <= 3; ++p)
      for (int t = 0; t < 30; ++t) {
        FormExpr w = smp.superform_of_degree(p, 3);
        CHECK(f_map(p + 1, d(w)) == delta_sigma(f_map(p, w)));
      }
  }
}

TEST_CASE("the quasi-inverse Z") {
  SuperDomain dom(3, 2);
  FormSampler smp(dom, 29);

  SECTION("top-degree extraction") {
    // g(x,th) D with g = x1 + x2 th1 th2: g_top = x2
    SigmaForm s(dom);
    s.add_term({}, Coefficient::variable(3, 0));
    SigmaKey k;
    k.theta = 0b11;
    s.add_term(k, Coefficient::variable(3, 1));
    FormExpr expect = FormExpr::coordinate(dom, 1) * FormExpr::dx(dom, 0) *
                      FormExpr::dx(dom, 1) * FormExpr::dx(dom, 2);
    CHECK(z_map(3, s) == expect);
  }

  SECTION("pdth factors die") {
    SigmaForm s(dom);
    SigmaKey k;
    k.theta = 0b11;
    k.pdtheta.emplace_back(0, 1);
    s.add_term(k, Coefficient(1));
    CHECK(z_map_total(s).is_zero());
  }

  SECTION("degree zero example on R^(1|2)") {
    SuperDomain d12(1, 2);
    SigmaForm s(d12);
    SigmaKey k;
    k.theta = 0b11;
    k.pdx = 0b1;
    s.add_term(k, Coefficient(1));
    CHECK(z_map(0, s) == FormExpr::one(d12));
  }

  SECTION("quasi-inverse identities") {
    for (int t = 0; t < 100; ++t) {
      FormExpr w = smp.superform(3);
      SigmaForm fw = f_map_total(w);
      CHECK(f_map_total(z_map_total(fw)) == fw);
      SigmaForm s = smp.sigma_form(3);
      FormExpr zs = z_map_total(s);
      CHECK(z_map_total(f_map_total(zs)) == zs);
    }
  }

  SECTION("Z is a cochain map") {
    for (int t = 0; t < 100; ++t) {
      SigmaForm s = smp.sigma_form(3);
      CHECK(z_map_total(delta_sigma(s)) == d(z_map_total(s)));
    }
  }
}

TEST_CASE("chain homotopies") {
  SuperDomain dom(3, 2);
  FormSampler smp(dom, 41);

  SECTION("zero Lambda gives e = f and h = 0") {
    HomotopyData H{FormExpr(dom)};
    for (int t = 0; t < 20; ++t) {
      FormExpr w = smp.superform(3);
      CHECK(H.h(w).is_zero());
      CHECK(H.e_total(w) == f_map_total(w));
    }
  }

  SECTION("h has odd parity") {
    FormExpr lam = smp.homotopy_form(4);
    HomotopyData H(lam);
    // h of a parity-even form lands in odd Sigma degree relative to f
    FormExpr w = smp.superform_of_degree(1, 2);
    SigmaForm hw = H.h(w);
    for (const auto& [k, c] : hw.terms())
      CHECK(sigma_degree(k, dom) == 0);  // one below the degree of f(w)
  }

  SECTION("the homotopy identity, per degree and exactly") {
    for (int trial = 0; trial < 10; ++trial) {
      HomotopyData H(smp.homotopy_form(4));
      for (int p = 0; p <= 3; ++p)
        for (int t = 0; t < 10; ++t) {
          FormExpr w = smp.superform_of_degree(p, 2);
          SigmaForm lhs = H.e(p, w) - f_map(p, w);
          SigmaForm rhs = delta_sigma(H.h(w)) + H.h(d(w));
          CHECK(lhs == rhs);
        }
    }
  }

  SECTION("graded Leibniz for delta h") {
    HomotopyData H(smp.homotopy_form(4));
    for (int t = 0; t < 50; ++t) {
      FormExpr w = smp.superform(3);
      CHECK(delta_sigma(H.h(w)) == H.delta_h(w) - H.h(d(w)));
    }
  }

  SECTION("bidegree validation") {
    CHECK_THROWS_WITH(HomotopyData(pco_st(dom)),
                      Catch::Matchers::ContainsSubstring("bidegree"));
  }
}

TEST_CASE("verify_cochain_family report") {
  SuperDomain dom(3, 2);
  FormSampler smp(dom, 53);
  std::vector<FormExpr> sfs;
  std::vector<SigmaForm> ints;
  for (int t = 0; t < 25; ++t) {
    sfs.push_back(smp.superform(3));
    ints.push_back(smp.sigma_form(3));
  }
  Report rep = verify_cochain_family(sfs, ints);
  REQUIRE(rep.records.size() == 4);
  CHECK(rep.all_passed());

  // empty samples: trivially all-pass, no failures
  Report trivial = verify_cochain_family({}, {});
  CHECK(trivial.all_passed());
}
