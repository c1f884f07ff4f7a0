// Command-line front end: runs batch scripts of form computations and
// identity checks, emitting a human or line-structured report.

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "superforms/script.hpp"

int main(int argc, char** argv) {
  CLI::App app{"exact calculus of superforms and integral forms"};

  std::string script_path;
  std::string format = "human";
  superforms::ScriptOptions opt;
  long long max_terms = 0;

  app.add_option("--script", script_path, "script file to run (defaults to stdin)");
  app.add_option("--format", format, "output format: human or structured")
      ->check(CLI::IsMember({"human", "structured"}));
  app.add_option("--truncation-order", opt.truncation_order,
                 "Taylor order for non-terminating delta series");
  app.add_option("--seed", opt.seed, "seed for randomized verification commands");
  app.add_option("--max-terms", max_terms, "abort any expression growing past this many terms");

  CLI11_PARSE(app, argc, argv);
  if (opt.truncation_order < 0) {
    std::cerr << "error: --truncation-order must be non-negative\n";
    return 2;
  }
  opt.max_terms = max_terms < 0 ? 0 : static_cast<std::size_t>(max_terms);

  std::string text;
  if (script_path.empty()) {
    std::ostringstream ss;
    ss << std::cin.rdbuf();
    text = ss.str();
  } else {
    std::ifstream in(script_path);
    if (!in) {
      std::cerr << "error: cannot open " << script_path << "\n";
      return 2;
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    text = ss.str();
  }

  superforms::ScriptEngine engine(opt);
  superforms::ScriptResult result = engine.run(text);
  std::cout << superforms::render_report(result, format == "structured");
  return result.report.all_passed() ? 0 : 1;
}
