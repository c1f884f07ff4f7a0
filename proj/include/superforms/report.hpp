#pragma once

#include <string>
#include <vector>

namespace superforms {

// One record per identity check.  The structured output format is
// line-delimited with a fixed field order:
//   check=<name> status=<pass|fail|error> residual_terms=<int> truncated=<0|1>
struct CheckRecord {
  std::string check;
  std::string status;  // "pass", "fail" or "error"
  int residual_terms = 0;
  bool truncated = false;
  std::string detail;  // human-readable extra (counterexample term, message)

  bool passed() const { return status == "pass"; }
  std::string structured() const {
    return "check=" + check + " status=" + status +
           " residual_terms=" + std::to_string(residual_terms) +
           " truncated=" + std::to_string(truncated ? 1 : 0);
  }
  std::string human() const {
    std::string s = (passed() ? "[PASS] " : "[FAIL] ") + check;
    if (!passed() && !detail.empty()) s += "  (" + detail + ")";
    return s;
  }
};

struct Report {
  std::vector<CheckRecord> records;

  void add(CheckRecord r) { records.push_back(std::move(r)); }
  bool all_passed() const {
    for (const auto& r : records)
      if (!r.passed()) return false;
    return true;
  }
  std::size_t failures() const {
    std::size_t k = 0;
    for (const auto& r : records)
      if (!r.passed()) ++k;
    return k;
  }
};

}  // namespace superforms
