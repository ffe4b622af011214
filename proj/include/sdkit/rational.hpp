#pragma once

#include <string>

#include <boost/multiprecision/cpp_int.hpp>

namespace sdkit {

/// Arbitrary-precision rational used wherever results must be exact
/// (table reproduction, oracle checks, exact discriminant tracking).
using Rational = boost::multiprecision::cpp_rational;

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

/// "p/q", or "p" for integers.
inline std::string to_string(const Rational& r) {
  const auto& num = boost::multiprecision::numerator(r);
  const auto& den = boost::multiprecision::denominator(r);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

}  // namespace sdkit
