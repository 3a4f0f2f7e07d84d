#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <string>
#include <string_view>

namespace qplab {

using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

inline double to_double(const Rational& q) { return q.convert_to<double>(); }
inline double to_double(const BigInt& z) { return z.convert_to<double>(); }
std::string to_string(const Rational& q);  // "num/den" or "num"

/// Accepts "p/q", an integer, or a finite decimal such as "0.125".
Rational parse_rational(std::string_view text);

}  // namespace qplab
