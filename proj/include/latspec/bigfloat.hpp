#pragma once

#include <mpfr.h>

#include <cmath>
#include <cstddef>
#include <string>
#include <utility>

#include "latspec/rational.hpp"

namespace latspec {

// Owning wrapper around mpfr_t. Every operation takes an explicit rounding
// direction so callers can build one-sided bounds.
class BigFloat {
 public:
  explicit BigFloat(mpfr_prec_t bits = 256) { mpfr_init2(v_, bits); mpfr_set_zero(v_, 1); }
  BigFloat(const BigFloat& o) {
    mpfr_init2(v_, mpfr_get_prec(o.v_));
    mpfr_set(v_, o.v_, MPFR_RNDN);
  }
  BigFloat(BigFloat&& o) noexcept {
    mpfr_init2(v_, mpfr_get_prec(o.v_));
    mpfr_swap(v_, o.v_);
  }
  BigFloat& operator=(const BigFloat& o) {
    if (this != &o) {
      mpfr_set_prec(v_, mpfr_get_prec(o.v_));
      mpfr_set(v_, o.v_, MPFR_RNDN);
    }
    return *this;
  }
  BigFloat& operator=(BigFloat&& o) noexcept {
    mpfr_swap(v_, o.v_);
    return *this;
  }
  ~BigFloat() { mpfr_clear(v_); }

  static BigFloat from(const Rational& q, mpfr_prec_t bits, mpfr_rnd_t rnd) {
    BigFloat r(bits);
    mpfr_set_q(r.v_, q.get_mpq_t(), rnd);
    return r;
  }
  static BigFloat from(const Integer& z, mpfr_prec_t bits, mpfr_rnd_t rnd) {
    BigFloat r(bits);
    mpfr_set_z(r.v_, z.get_mpz_t(), rnd);
    return r;
  }
  static BigFloat pi(mpfr_prec_t bits, mpfr_rnd_t rnd) {
    BigFloat r(bits);
    mpfr_const_pi(r.v_, rnd);
    return r;
  }
  static BigFloat e(mpfr_prec_t bits, mpfr_rnd_t rnd) {
    BigFloat r(bits);
    BigFloat one = from(Integer(1), bits, MPFR_RNDN);
    mpfr_exp(r.v_, one.v_, rnd);
    return r;
  }

  mpfr_prec_t precision() const { return mpfr_get_prec(v_); }

  mpfr_ptr get() { return v_; }
  mpfr_srcptr get() const { return v_; }

  double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }

  // Scientific notation with the requested significant digits, rounded in
  // the given direction.
  std::string to_string(int digits, mpfr_rnd_t rnd = MPFR_RNDN) const {
    char* buf = nullptr;
    mpfr_asprintf(&buf, "%.*R*e", digits - 1, rnd, v_);
    std::string s(buf);
    mpfr_free_str(buf);
    return s;
  }

  friend bool operator<(const BigFloat& a, const BigFloat& b) { return mpfr_less_p(a.v_, b.v_) != 0; }
  friend bool operator<=(const BigFloat& a, const BigFloat& b) { return mpfr_lessequal_p(a.v_, b.v_) != 0; }
  friend bool operator>(const BigFloat& a, const BigFloat& b) { return mpfr_greater_p(a.v_, b.v_) != 0; }
  friend bool operator>=(const BigFloat& a, const BigFloat& b) { return mpfr_greaterequal_p(a.v_, b.v_) != 0; }

 private:
  mpfr_t v_;
};

// Bits needed for the given number of significant decimal digits, plus guard bits.
inline mpfr_prec_t bits_for_digits(int digits) {
  return static_cast<mpfr_prec_t>(std::ceil(digits * 3.3219280948873623)) + 32;
}

inline mpfr_rnd_t opposite(mpfr_rnd_t rnd) {
  if (rnd == MPFR_RNDD) return MPFR_RNDU;
  if (rnd == MPFR_RNDU) return MPFR_RNDD;
  return rnd;
}

inline BigFloat mul(const BigFloat& a, const BigFloat& b, mpfr_rnd_t rnd) {
  BigFloat r(std::max(a.precision(), b.precision()));
  mpfr_mul(r.get(), a.get(), b.get(), rnd);
  return r;
}

inline BigFloat div(const BigFloat& a, const BigFloat& b, mpfr_rnd_t rnd) {
  BigFloat r(std::max(a.precision(), b.precision()));
  mpfr_div(r.get(), a.get(), b.get(), rnd);
  return r;
}

inline BigFloat add(const BigFloat& a, const BigFloat& b, mpfr_rnd_t rnd) {
  BigFloat r(std::max(a.precision(), b.precision()));
  mpfr_add(r.get(), a.get(), b.get(), rnd);
  return r;
}

inline BigFloat sqrt(const BigFloat& a, mpfr_rnd_t rnd) {
  BigFloat r(a.precision());
  mpfr_sqrt(r.get(), a.get(), rnd);
  return r;
}

// a^(1/k) for a >= 0.
inline BigFloat root(const BigFloat& a, unsigned long k, mpfr_rnd_t rnd) {
  BigFloat r(a.precision());
  mpfr_rootn_ui(r.get(), a.get(), k, rnd);
  return r;
}

inline BigFloat pow(const BigFloat& a, unsigned long k, mpfr_rnd_t rnd) {
  BigFloat r(a.precision());
  mpfr_pow_ui(r.get(), a.get(), k, rnd);
  return r;
}

inline BigFloat log(const BigFloat& a, mpfr_rnd_t rnd) {
  BigFloat r(a.precision());
  mpfr_log(r.get(), a.get(), rnd);
  return r;
}

// Square root of a nonnegative rational, rounded in the given direction.
inline BigFloat sqrt_of(const Rational& q, mpfr_prec_t bits, mpfr_rnd_t rnd) {
  return sqrt(BigFloat::from(q, bits, rnd), rnd);
}

// Enclosure [lo, hi] of a real number; lo rounded down, hi rounded up.
struct Enclosure {
  BigFloat lo;
  BigFloat hi;

  std::string lower_string(int digits) const { return lo.to_string(digits, MPFR_RNDD); }
  std::string upper_string(int digits) const { return hi.to_string(digits, MPFR_RNDU); }
};

inline Enclosure sqrt_enclosure(const Rational& q, mpfr_prec_t bits) {
  return {sqrt_of(q, bits, MPFR_RNDD), sqrt_of(q, bits, MPFR_RNDU)};
}

}  // namespace latspec
