#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace itbound {

/// Arbitrary precision rational. Every quantity that ends up in a bound or a
/// certificate is carried in this type.
using Rational = mpq_class;
using BigInt = mpz_class;

/// num/den reduced to lowest terms. mpq_class(num, den) alone is not, and
/// comparisons on unreduced values give wrong answers.
Rational ratio(const BigInt& num, const BigInt& den);

/// "p/q" with q > 0 and gcd(p, q) = 1, or a bare integer when q = 1.
std::string to_string(const Rational& value);

/// Accepts "[-]p" or "[-]p/q" with q > 0. Throws std::invalid_argument.
Rational parse_rational(std::string_view text);

double to_double(const Rational& value);

/// The rational with the smallest denominator inside [lo, hi], found by
/// walking the Stern-Brocot tree. Requires lo <= hi.
Rational simplest_between(const Rational& lo, const Rational& hi);

/// Continued-fraction reconstruction of a floating value: the simplest
/// rational within `tolerance` of `value` whose denominator does not exceed
/// `max_denominator`. Returns false when no such rational exists.
bool rationalize(double value, double tolerance, const BigInt& max_denominator, Rational& out);

}  // namespace itbound
