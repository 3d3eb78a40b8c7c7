#include "itbound/rational.hpp"

#include <cctype>
#include <cmath>
#include <stdexcept>

namespace itbound {

Rational ratio(const BigInt& num, const BigInt& den) {
  if (den == 0) throw std::invalid_argument("zero denominator");
  Rational out(num, den);
  out.canonicalize();
  return out;
}

std::string to_string(const Rational& value) {
  // mpq_class keeps its value canonical, so get_str already omits "/1".
  return value.get_str();
}

namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  return true;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  std::string_view body = text;
  bool negative = false;
  if (!body.empty() && (body.front() == '-' || body.front() == '+')) {
    negative = body.front() == '-';
    body.remove_prefix(1);
  }
  const auto slash = body.find('/');
  std::string_view num = body.substr(0, slash);
  std::string_view den = slash == std::string_view::npos ? std::string_view{"1"} : body.substr(slash + 1);
  if (!all_digits(num) || !all_digits(den))
    throw std::invalid_argument("malformed rational '" + std::string(text) + "'");
  BigInt p(std::string(num), 10);
  BigInt q(std::string(den), 10);
  if (q == 0) throw std::invalid_argument("zero denominator in '" + std::string(text) + "'");
  Rational r(p, q);
  r.canonicalize();
  if (negative) r = -r;
  return r;
}

double to_double(const Rational& value) { return value.get_d(); }

Rational simplest_between(const Rational& lo, const Rational& hi) {
  if (lo > hi) throw std::invalid_argument("simplest_between: empty interval");
  if (lo <= 0 && hi >= 0) return Rational(0);
  if (hi < 0) return -simplest_between(-hi, -lo);

  // 0 < lo <= hi. Continued-fraction walk: h/k convergents.
  BigInt p0 = 0, q0 = 1, p1 = 1, q1 = 0;
  Rational a = lo, b = hi;
  for (;;) {
    BigInt fl;
    mpz_fdiv_q(fl.get_mpz_t(), a.get_num_mpz_t(), a.get_den_mpz_t());
    // If an integer lies in [a, b] take the smallest such integer.
    Rational candidate = (Rational(fl) == a) ? Rational(fl) : Rational(fl + 1);
    if (candidate <= b) {
      BigInt c = candidate.get_num();
      BigInt p = c * p1 + p0;
      BigInt q = c * q1 + q0;
      return Rational(p, q);
    }
    BigInt p2 = fl * p1 + p0;
    BigInt q2 = fl * q1 + q0;
    p0 = p1; q0 = q1; p1 = p2; q1 = q2;
    Rational na = 1 / (b - fl);
    Rational nb = 1 / (a - fl);
    a = na;
    b = nb;
  }
}

bool rationalize(double value, double tolerance, const BigInt& max_denominator, Rational& out) {
  if (!std::isfinite(value)) return false;
  Rational center(value);
  Rational tol(tolerance);
  Rational r = simplest_between(center - tol, center + tol);
  if (r.get_den() > max_denominator) return false;
  out = r;
  return true;
}

}  // namespace itbound
