#pragma once

#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <fstream>

#include "superforms/ce.hpp"
#include "superforms/models.hpp"
#include "superforms/parse.hpp"
#include "superforms/report.hpp"
#include "superforms/sampling.hpp"

namespace superforms {

// --------------------------------------------------------------------------
// Batch scripts: one command per line, '#' comments, names defined before
// use.  Commands:
//
//   domain NAME (m|n) [coords c1 .. cm t1 .. tn]   declare + select a domain
//   use NAME                                       select a declared domain
//   model d3n1                                     bind the d=3 N=1 fixtures
//   map NAME : x1 = <expr> ; th1 = <expr> ; ...    chart on the current domain
//                                                  (omitted coords: identity)
//   let NAME = <expr>
//   compute [NAME =] <expr>                        evaluate and print
//   check NAME : <expr> == <expr>                  exact identity check
//   verify cochain [samples=N]                     f/Z cochain + quasi-inverse
//                                                  residuals on random forms
//   cecheck <file> [maxdegree=N]                   load a structure-constant
//                                                  file and check Jacobi,
//                                                  d^2 = 0 and boundary^2 = 0
//
// Every check yields one report record; runtime errors become failed
// records, never crashes.  The run's exit status is nonzero iff any check
// failed.
// --------------------------------------------------------------------------

struct ScriptOptions {
  int truncation_order = 4;
  std::uint64_t seed = 1;
  std::size_t max_terms = 0;  // 0 = unlimited
};

struct ScriptResult {
  Report report;
  std::vector<std::string> output;  // computed values, in script order
};

class ScriptEngine {
 public:
  explicit ScriptEngine(ScriptOptions opt = {}) : opt_(opt) {}

  ScriptResult run(const std::string& text) {
    ScriptResult result;
    FormExpr::term_limit() = opt_.max_terms;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      auto hash = line.find('#');
      if (hash != std::string::npos) line = line.substr(0, hash);
      if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
      try {
        execute(line, result);
      } catch (const std::exception& ex) {
        CheckRecord rec;
        rec.check = "line " + std::to_string(lineno);
        rec.status = "error";
        rec.detail = ex.what();
        result.report.add(rec);
      }
    }
    FormExpr::term_limit() = 0;
    return result;
  }

 private:
  void execute(const std::string& line, ScriptResult& result) {
    parse_detail::Lexer lx{line};
    std::string head = lx.ident();
    if (head == "domain") {
      std::string name = lx.ident();
      lx.expect('(', "after the domain name");
      int m = static_cast<int>(lx.integer());
      lx.expect('|', "between the dimensions");
      int n = static_cast<int>(lx.integer());
      lx.expect(')', "to close the dimension");
      if (lx.ident_ahead()) {
        std::string kw = lx.ident();
        if (kw != "coords") lx.fail("expected 'coords'");
        std::vector<std::string> xs, ths;
        for (int i = 0; i < m; ++i) xs.push_back(lx.ident());
        for (int a = 0; a < n; ++a) ths.push_back(lx.ident());
        domains_.insert_or_assign(name, SuperDomain(m, n, xs, ths));
      } else {
        domains_.insert_or_assign(name, SuperDomain(m, n));
      }
      current_ = name;
      require_end(lx);
    } else if (head == "use") {
      std::string name = lx.ident();
      if (!domains_.count(name)) lx.fail("unknown domain '" + name + "'");
      current_ = name;
      require_end(lx);
    } else if (head == "model") {
      std::string which = lx.ident();
      if (which != "d3n1") lx.fail("unknown model '" + which + "'");
      bind_d3n1();
      require_end(lx);
    } else if (head == "map") {
      std::string name = lx.ident();
      lx.expect(':', "after the map name");
      define_map(name, lx);
    } else if (head == "let") {
      std::string name = lx.ident();
      lx.expect('=', "after the name");
      forms_.insert_or_assign(name, parse_rest(lx));
    } else if (head == "compute") {
      std::size_t mark = lx.pos;
      std::string name;
      if (lx.ident_ahead()) {
        std::string n = lx.ident();
        if (lx.accept('='))
          name = n;
        else
          lx.pos = mark;
      }
      FormExpr value = parse_rest(lx);
      if (!name.empty()) forms_.insert_or_assign(name, value);
      std::string label = name.empty() ? "compute" : name;
      result.output.push_back(label + " = " + to_string(value));
    } else if (head == "check") {
      // check names are labels: anything up to the colon
      lx.skip_ws();
      std::string name;
      while (lx.pos < lx.src.size() && lx.src[lx.pos] != ':') name += lx.src[lx.pos++];
      while (!name.empty() && (name.back() == ' ' || name.back() == '\t')) name.pop_back();
      if (name.empty()) lx.fail("expected a check name");
      lx.expect(':', "after the check name");
      run_check(name, lx, result);
    } else if (head == "verify") {
      std::string what = lx.ident();
      if (what != "cochain") lx.fail("unknown verification family '" + what + "'");
      int samples = 25;
      if (lx.ident_ahead()) {
        std::string kw = lx.ident();
        if (kw != "samples") lx.fail("expected 'samples=N'");
        lx.expect('=', "after 'samples'");
        samples = static_cast<int>(lx.integer());
      }
      require_end(lx);
      run_verify(samples, result);
    } else if (head == "cecheck") {
      lx.skip_ws();
      std::string path;
      while (lx.pos < lx.src.size() && lx.src[lx.pos] != ' ' && lx.src[lx.pos] != '\t')
        path += lx.src[lx.pos++];
      int maxdeg = 4;
      if (lx.ident_ahead()) {
        std::string kw = lx.ident();
        if (kw != "maxdegree") lx.fail("expected 'maxdegree=N'");
        lx.expect('=', "after 'maxdegree'");
        maxdeg = static_cast<int>(lx.integer());
      }
      require_end(lx);
      run_cecheck(path, maxdeg, result);
    } else {
      lx.fail("unknown command '" + head + "'");
    }
  }

  void run_cecheck(const std::string& path, int maxdeg, ScriptResult& result) {
    std::ifstream in(path);
    if (!in) throw Error("cecheck: cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    CheckRecord jac;
    jac.check = "ce-jacobi " + path;
    std::optional<LieSuperalgebraModel> model;
    try {
      model.emplace(LieSuperalgebraModel::parse(ss.str()));
      jac.status = "pass";
    } catch (const std::exception& ex) {
      jac.status = "fail";
      jac.detail = ex.what();
    }
    result.report.add(jac);
    if (!model) return;
    for (int p = 0; p <= maxdeg; ++p) {
      CheckRecord rec;
      rec.check = "ce-d-squared p=" + std::to_string(p);
      QMatrix prod = ce_differential_matrix(*model, p + 1) * ce_differential_matrix(*model, p);
      rec.status = prod.is_zero() ? "pass" : "fail";
      result.report.add(rec);
      CheckRecord brec;
      int k = model->even_dimension() - p;
      brec.check = "ce-boundary-squared sigma-degree=" + std::to_string(k);
      QMatrix bprod = integral_boundary_matrix(*model, k) * integral_boundary_matrix(*model, k - 1);
      brec.status = bprod.is_zero() ? "pass" : "fail";
      result.report.add(brec);
    }
  }

  void require_end(parse_detail::Lexer& lx) {
    if (!lx.eof()) lx.fail("trailing input");
  }

  const SuperDomain& current_domain() {
    auto it = domains_.find(current_);
    if (it == domains_.end()) throw Error("no domain selected (use 'domain' or 'model' first)");
    return it->second;
  }

  ParseEnv env() {
    ParseEnv e;
    e.truncation_order = opt_.truncation_order;
    e.lookup_form = [this](const std::string& n) -> const FormExpr* {
      auto it = forms_.find(n);
      return it == forms_.end() ? nullptr : &it->second;
    };
    e.lookup_map = [this](const std::string& n) -> const ChartMap* {
      auto it = maps_.find(n);
      return it == maps_.end() ? nullptr : &it->second;
    };
    return e;
  }

  FormExpr parse_rest(parse_detail::Lexer& lx) {
    ParseEnv e = env();
    parse_detail::ExprParser p(lx, current_domain(), e);
    FormExpr value = p.expr();
    require_end(lx);
    return value;
  }

  void define_map(const std::string& name, parse_detail::Lexer& lx) {
    const SuperDomain& dom = current_domain();
    std::vector<FormExpr> xs, ths;
    for (int i = 0; i < dom.m; ++i) xs.push_back(FormExpr::coordinate(dom, i));
    for (int a = 0; a < dom.n; ++a) ths.push_back(FormExpr::theta(dom, a));
    ParseEnv e = env();
    while (true) {
      std::string coord = lx.ident();
      lx.expect('=', "after the coordinate name");
      parse_detail::ExprParser p(lx, dom, e);
      FormExpr img = p.expr();
      int i = dom.find_x(coord);
      int a = dom.find_theta(coord);
      if (i >= 0)
        xs[i] = img;
      else if (a >= 0)
        ths[a] = img;
      else
        lx.fail("'" + coord + "' is not a coordinate of the current domain");
      if (!lx.accept(';')) break;
    }
    require_end(lx);
    maps_.insert_or_assign(name, ChartMap(dom, dom, std::move(xs), std::move(ths)));
  }

  void run_check(const std::string& name, parse_detail::Lexer& lx, ScriptResult& result) {
    CheckRecord rec;
    rec.check = name;
    ParseEnv e = env();
    parse_detail::ExprParser p(lx, current_domain(), e);
    FormExpr lhs = p.expr();
    lx.expect('=', "expected '==' in check");
    lx.expect('=', "expected '==' in check");
    FormExpr rhs = p.expr();
    require_end(lx);
    FormExpr residual = lhs - rhs;
    rec.truncated = lhs.is_truncated() || rhs.is_truncated();
    rec.residual_terms = static_cast<int>(residual.term_count());
    if (residual.is_zero()) {
      rec.status = "pass";
    } else {
      rec.status = "fail";
      const auto& [k, c] = *residual.terms().begin();
      rec.detail = "first residual term: " + to_string(k, c, current_domain());
    }
    result.report.add(rec);
  }

  void run_verify(int samples, ScriptResult& result) {
    FormSampler sampler(current_domain(), opt_.seed);
    std::vector<FormExpr> sfs;
    std::vector<SigmaForm> ints;
    for (int t = 0; t < samples; ++t) {
      sfs.push_back(sampler.superform());
      ints.push_back(sampler.sigma_form());
    }
    Report rep = verify_cochain_family(sfs, ints);
    for (auto& rec : rep.records) result.report.add(std::move(rec));
  }

  void bind_d3n1() {
    D3N1Model md = d3n1_model();
    domains_.insert_or_assign("d3n1", md.dom);
    current_ = "d3n1";
    for (int a = 0; a < 3; ++a) forms_.insert_or_assign("V" + std::to_string(a), md.V[a]);
    for (int al = 0; al < 2; ++al)
      forms_.insert_or_assign("psi" + std::to_string(al + 1), md.psi[al]);
    forms_.insert_or_assign("Yst", pco_st(md.dom));
    forms_.insert_or_assign("Ysusy", pco_susy(md));
    forms_.insert_or_assign("Lambda", lambda_susy(md));
    forms_.insert_or_assign("LambdaPrinted", lambda_printed(md));
  }

  ScriptOptions opt_;
  std::map<std::string, SuperDomain> domains_;
  std::map<std::string, FormExpr> forms_;
  std::map<std::string, ChartMap> maps_;
  std::string current_;
};

inline std::string render_report(const ScriptResult& result, bool structured) {
  std::string out;
  if (structured) {
    for (const auto& line : result.output) out += "value " + line + "\n";
    for (const auto& rec : result.report.records) out += rec.structured() + "\n";
    out += "summary checks=" + std::to_string(result.report.records.size()) +
           " failures=" + std::to_string(result.report.failures()) + "\n";
  } else {
    for (const auto& line : result.output) out += line + "\n";
    for (const auto& rec : result.report.records) out += rec.human() + "\n";
    out += std::to_string(result.report.records.size() - result.report.failures()) + "/" +
           std::to_string(result.report.records.size()) + " checks passed\n";
  }
  return out;
}

}  // namespace superforms
