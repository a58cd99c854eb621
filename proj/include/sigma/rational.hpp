#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <string>
#include <string_view>

#include "errors.hpp"

namespace sigma {

using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

// Parses "p", "p/q" or a finite decimal such as "0.125" exactly.
inline Rational parse_rational(std::string_view text) {
  std::string s(text);
  if (s.empty()) throw StructuralError("empty rational literal");
  try {
    if (auto slash = s.find('/'); slash != std::string::npos) {
      BigInt num(s.substr(0, slash));
      BigInt den(s.substr(slash + 1));
      if (den == 0) throw StructuralError("zero denominator in '" + s + "'");
      return Rational(num, den);
    }
    if (auto dot = s.find('.'); dot != std::string::npos) {
      std::string digits = s.substr(0, dot) + s.substr(dot + 1);
      BigInt den = 1;
      for (std::size_t i = dot + 1; i < s.size(); ++i) den *= 10;
      if (digits == "-" || digits == "+" || digits.empty()) digits += "0";
      return Rational(BigInt(digits), den);
    }
    return Rational(BigInt(s));
  } catch (const std::runtime_error&) {
    throw StructuralError("bad rational literal '" + s + "'");
  }
}

inline std::string to_string(const Rational& r) {
  if (denominator(r) == 1) return numerator(r).str();
  return numerator(r).str() + "/" + denominator(r).str();
}

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

// Exact conversion of a finite double.
inline Rational from_double(double d) { return Rational(d); }

inline Rational ceil(const Rational& r) {
  BigInt q = numerator(r) / denominator(r);
  if (q * denominator(r) < numerator(r)) q += 1;
  return Rational(q);
}

}  // namespace sigma
