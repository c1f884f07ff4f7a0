#pragma once

#include <string>
#include <vector>

#include "superforms/rational.hpp"

namespace superforms {

// A local model R^(m|n): m even coordinates x, n odd coordinates theta.
// Coordinate names drive parsing and printing only; the algebra works with
// 0-based indices throughout.
struct SuperDomain {
  int m = 0;
  int n = 0;
  std::vector<std::string> x_names;
  std::vector<std::string> theta_names;

  SuperDomain() = default;
  SuperDomain(int even, int odd) : m(even), n(odd) {
    if (even < 0 || odd < 0) throw Error("SuperDomain: negative dimension");
    for (int i = 0; i < m; ++i) x_names.push_back("x" + std::to_string(i + 1));
    for (int a = 0; a < n; ++a) theta_names.push_back("th" + std::to_string(a + 1));
  }
  SuperDomain(int even, int odd, std::vector<std::string> xs, std::vector<std::string> ths)
      : m(even), n(odd), x_names(std::move(xs)), theta_names(std::move(ths)) {
    if (static_cast<int>(x_names.size()) != m || static_cast<int>(theta_names.size()) != n)
      throw Error("SuperDomain: coordinate name count does not match dimension");
    for (int i = 0; i < m + n; ++i)
      for (int j = i + 1; j < m + n; ++j)
        if (name(i) == name(j)) throw Error("SuperDomain: duplicate coordinate name " + name(i));
  }

  const std::string& name(int k) const {
    return k < m ? x_names[k] : theta_names[k - m];
  }

  int find_x(const std::string& s) const {
    for (int i = 0; i < m; ++i)
      if (x_names[i] == s) return i;
    return -1;
  }
  int find_theta(const std::string& s) const {
    for (int a = 0; a < n; ++a)
      if (theta_names[a] == s) return a;
    return -1;
  }

  bool operator==(const SuperDomain& o) const {
    return m == o.m && n == o.n && x_names == o.x_names && theta_names == o.theta_names;
  }
  bool operator!=(const SuperDomain& o) const { return !(*this == o); }

  std::string to_string() const {
    return "(" + std::to_string(m) + "|" + std::to_string(n) + ")";
  }
};

}  // namespace superforms
