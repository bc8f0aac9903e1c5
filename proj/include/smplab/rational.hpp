#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <string>
#include <string_view>

namespace smplab {

/// Exact rational with unbounded numerator and denominator.
using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

/// "p/q" in lowest terms, or "p" when q == 1.
std::string to_string(const Rational& r);
/// Accepts "p", "p/q" and "-p/q".
Rational parse_rational(std::string_view text);
double to_double(const Rational& r);
Rational pow(const Rational& base, unsigned exponent);

}  // namespace smplab
