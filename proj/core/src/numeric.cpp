#include "belllab/numeric.hpp"

#include <cctype>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace belllab {

BigInt pow(const BigInt& base, std::uint64_t exponent) {
  BigInt out;
  if (exponent <= std::numeric_limits<unsigned long>::max()) {
    mpz_pow_ui(out.get_mpz_t(), base.get_mpz_t(),
               static_cast<unsigned long>(exponent));
    return out;
  }
  throw std::overflow_error("exponent too large");
}

double log10(const BigInt& value) {
  if (sgn(value) <= 0) throw std::domain_error("log10 of non-positive value");
  long exp2 = 0;
  const double mantissa = mpz_get_d_2exp(&exp2, value.get_mpz_t());
  return std::log10(mantissa) + static_cast<double>(exp2) * std::log10(2.0);
}

double log10(const Rational& value) {
  if (sgn(value) <= 0) throw std::domain_error("log10 of non-positive value");
  return log10(BigInt(value.get_num())) - log10(BigInt(value.get_den()));
}

std::size_t decimal_digits(const BigInt& value) {
  if (sgn(value) == 0) return 1;
  // mpz_sizeinbase may overshoot by one for base 10.
  std::size_t digits = mpz_sizeinbase(value.get_mpz_t(), 10);
  BigInt bound;
  mpz_ui_pow_ui(bound.get_mpz_t(), 10, digits - 1);
  if (abs(value) < bound) --digits;
  return digits;
}

std::string to_decimal(const BigInt& value) { return value.get_str(10); }

std::string to_string(const Rational& value) { return value.get_str(10); }

Rational parse_rational(std::string_view text) {
  std::string s(text);
  if (s.empty()) throw std::invalid_argument("empty rational");
  const auto dot = s.find('.');
  if (dot != std::string::npos) {
    if (s.find_first_of("/eE") != std::string::npos)
      throw std::invalid_argument("malformed decimal: " + s);
    std::string digits = s.substr(0, dot) + s.substr(dot + 1);
    if (digits.empty() || digits == "-" || digits == "+")
      throw std::invalid_argument("malformed decimal: " + s);
    if (digits.front() == '+') digits.erase(0, 1);
    for (std::size_t i = digits.front() == '-' ? 1 : 0; i < digits.size(); ++i)
      if (!std::isdigit(static_cast<unsigned char>(digits[i])))
        throw std::invalid_argument("malformed decimal: " + s);
    BigInt num(digits, 10);
    BigInt den;
    mpz_ui_pow_ui(den.get_mpz_t(), 10, s.size() - dot - 1);
    Rational r(num, den);
    r.canonicalize();
    return r;
  }
  Rational r;
  if (r.set_str(s, 10) != 0) throw std::invalid_argument("malformed rational: " + s);
  if (sgn(r.get_den()) == 0) throw std::invalid_argument("zero denominator: " + s);
  r.canonicalize();
  return r;
}

}  // namespace belllab
