#ifndef BELLLAB_NUMERIC_HPP
#define BELLLAB_NUMERIC_HPP

#include <cstdint>
#include <string>
#include <string_view>

#include <gmpxx.h>

namespace belllab {

/// Arbitrary-precision integer used for every configuration count.
using BigInt = mpz_class;
/// Exact rational used for probabilities and outcome statistics.
using Rational = mpq_class;

BigInt pow(const BigInt& base, std::uint64_t exponent);

/// log10 of a strictly positive big integer, accurate to double precision
/// even when the value is far outside the range of a double.
double log10(const BigInt& value);

/// log10 of a strictly positive rational.
double log10(const Rational& value);

/// Number of decimal digits of |value| (1 for zero).
std::size_t decimal_digits(const BigInt& value);

std::string to_decimal(const BigInt& value);

/// "p/q" (or "p" when q == 1), canonical form.
std::string to_string(const Rational& value);

/// Parses "p", "p/q" or a finite decimal such as "0.25". Throws
/// std::invalid_argument on malformed input or a zero denominator.
Rational parse_rational(std::string_view text);

}  // namespace belllab

#endif  // BELLLAB_NUMERIC_HPP
