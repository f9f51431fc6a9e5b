#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "latspec/errors.hpp"

namespace latspec {

// Exact scalars. mpq_class keeps values in lowest terms with a positive
// denominator as long as every value is built through the helpers below or
// through gmpxx arithmetic (which canonicalizes).
using Integer = mpz_class;
using Rational = mpq_class;

using IntegerVector = std::vector<Integer>;
using RationalVector = std::vector<Rational>;

inline Rational make_rational(const Integer& num, const Integer& den) {
  if (den == 0) throw std::domain_error("rational with zero denominator");
  Rational q(num, den);
  q.canonicalize();
  return q;
}

inline Rational divide(const Rational& a, const Rational& b) {
  if (b == 0) throw std::domain_error("division by zero");
  return a / b;
}

// Parses "p", "-p" or "p/q". Whitespace is not accepted.
inline Rational parse_rational(std::string_view text) {
  auto valid_int = [](std::string_view s) {
    if (s.empty()) return false;
    std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
    if (i == s.size()) return false;
    for (; i < s.size(); ++i)
      if (s[i] < '0' || s[i] > '9') return false;
    return true;
  };
  auto to_integer = [](std::string_view s) {
    if (!s.empty() && s[0] == '+') s.remove_prefix(1);
    return Integer(std::string(s), 10);
  };
  const auto slash = text.find('/');
  if (slash == std::string_view::npos) {
    if (!valid_int(text)) throw ParseError("malformed rational '" + std::string(text) + "'");
    return Rational(to_integer(text));
  }
  const auto num = text.substr(0, slash);
  const auto den = text.substr(slash + 1);
  if (!valid_int(num) || !valid_int(den) || den[0] == '-')
    throw ParseError("malformed rational '" + std::string(text) + "'");
  const Integer d = to_integer(den);
  if (d == 0) throw ParseError("zero denominator in '" + std::string(text) + "'");
  return make_rational(to_integer(num), d);
}

// "p/q", or "p" when the denominator is 1.
inline std::string to_string(const Rational& q) {
  if (q.get_den() == 1) return q.get_num().get_str();
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

inline std::string to_string(const Integer& z) { return z.get_str(); }

inline bool is_integer(const Rational& q) { return q.get_den() == 1; }

inline Integer floor(const Rational& q) {
  Integer r;
  mpz_fdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return r;
}

inline Integer ceil(const Rational& q) {
  Integer r;
  mpz_cdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return r;
}

// Nearest integer, halves rounded up: floor(q + 1/2).
inline Integer round_nearest(const Rational& q) { return floor(q + Rational(1, 2)); }

inline Integer floor_div(const Integer& a, const Integer& b) {
  Integer r;
  mpz_fdiv_q(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return r;
}

inline Integer isqrt(const Integer& n) {
  if (n < 0) throw std::domain_error("isqrt of negative value");
  Integer r;
  mpz_sqrt(r.get_mpz_t(), n.get_mpz_t());
  return r;
}

inline Integer gcd(const Integer& a, const Integer& b) {
  Integer r;
  mpz_gcd(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return r;
}

inline Integer lcm(const Integer& a, const Integer& b) {
  Integer r;
  mpz_lcm(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return r;
}

// Exact square root of q when q is the square of a rational.
inline bool exact_sqrt(const Rational& q, Rational& root) {
  if (q < 0) return false;
  if (!mpz_perfect_square_p(q.get_num_mpz_t()) || !mpz_perfect_square_p(q.get_den_mpz_t()))
    return false;
  root = make_rational(isqrt(q.get_num()), isqrt(q.get_den()));
  return true;
}

template <typename A, typename B>
Rational dot(std::span<const A> a, std::span<const B> b) {
  if (a.size() != b.size()) throw std::invalid_argument("dot: dimension mismatch");
  Rational s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += Rational(a[i]) * Rational(b[i]);
  return s;
}

inline Rational dot(const RationalVector& a, const RationalVector& b) {
  return dot<Rational, Rational>(a, b);
}

inline Rational norm_sq(std::span<const Rational> v) { return dot<Rational, Rational>(v, v); }

inline Integer norm_sq(std::span<const Integer> v) {
  Integer s = 0;
  for (const auto& x : v) s += x * x;
  return s;
}

inline RationalVector to_rational(std::span<const Integer> v) {
  return RationalVector(v.begin(), v.end());
}

// Lowest common denominator of a list of rationals.
inline Integer common_denominator(std::span<const Rational> values) {
  Integer d = 1;
  for (const auto& q : values) d = lcm(d, q.get_den());
  return d;
}

}  // namespace latspec
