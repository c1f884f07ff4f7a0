#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <sstream>
#include <stdexcept>
#include <string>

namespace superforms {

// Exact arbitrary-precision rationals. Everything in this library is exact;
// there is not a single floating point number anywhere in the engine.
using Rational = boost::multiprecision::cpp_rational;
using Integer = boost::multiprecision::cpp_int;

// Error type for all user-facing failures (domain mismatches, bad input,
// singular matrices, parser errors, ...).
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

inline Rational rational_factorial(int n) {
  Integer r = 1;
  for (int i = 2; i <= n; ++i) r *= i;
  return Rational(r);
}

// k(k-1)...(k-p+1), the falling factorial.
inline Rational falling_factorial(int k, int p) {
  Integer r = 1;
  for (int i = 0; i < p; ++i) r *= (k - i);
  return Rational(r);
}

inline std::string rational_to_string(const Rational& r) {
  std::ostringstream os;
  os << r;
  return os.str();
}

}  // namespace superforms
