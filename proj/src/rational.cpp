#include "smplab/rational.hpp"

#include "smplab/error.hpp"

namespace smplab {

std::string to_string(const Rational& r) {
  const BigInt num = boost::multiprecision::numerator(r);
  const BigInt den = boost::multiprecision::denominator(r);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

Rational parse_rational(std::string_view text) {
  try {
    const auto slash = text.find('/');
    if (slash == std::string_view::npos) return Rational(BigInt(std::string(text)));
    const BigInt num(std::string(text.substr(0, slash)));
    const BigInt den(std::string(text.substr(slash + 1)));
    if (den == 0) throw ConfigError("zero denominator in '" + std::string(text) + "'");
    return Rational(num, den);
  } catch (const std::runtime_error& e) {
    if (dynamic_cast<const ConfigError*>(&e)) throw;
    throw ConfigError("cannot parse rational '" + std::string(text) + "'");
  }
}

double to_double(const Rational& r) { return r.convert_to<double>(); }

Rational pow(const Rational& base, unsigned exponent) {
  Rational out = 1;
  for (unsigned i = 0; i < exponent; ++i) out *= base;
  return out;
}

}  // namespace smplab
