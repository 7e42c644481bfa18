#pragma once

// Thin RAII wrapper around MPFR reals, used by the constants module and by
// high-precision cross-checks. Arithmetic is performed at the precision of
// the left operand unless stated otherwise.

#include <gmp.h>
#include <mpfr.h>

#include <cstdint>
#include <string>
#include <utility>

#include "psix/dd.hpp"

namespace psix {

class Real {
 public:
  explicit Real(mpfr_prec_t prec = 106) { mpfr_init2(v_, prec); mpfr_set_zero(v_, 1); }
  Real(const Real& o) {
    mpfr_init2(v_, mpfr_get_prec(o.v_));
    mpfr_set(v_, o.v_, MPFR_RNDN);
  }
  Real(Real&& o) noexcept {
    mpfr_init2(v_, mpfr_get_prec(o.v_));
    mpfr_swap(v_, o.v_);
  }
  Real& operator=(Real o) {
    mpfr_swap(v_, o.v_);
    return *this;
  }
  ~Real() { mpfr_clear(v_); }

  static Real from_double(double d, mpfr_prec_t prec = 106) {
    Real r(prec);
    mpfr_set_d(r.v_, d, MPFR_RNDN);
    return r;
  }
  static Real from_u64(std::uint64_t n, mpfr_prec_t prec = 106) {
    Real r(prec);
    mpfr_set_uj(r.v_, n, MPFR_RNDN);
    return r;
  }
  static Real from_dd(const DD& d, mpfr_prec_t prec = 160) {
    Real r(prec);
    mpfr_set_d(r.v_, d.hi, MPFR_RNDN);
    mpfr_add_d(r.v_, r.v_, d.lo, MPFR_RNDN);
    return r;
  }
  static Real from_mpz(mpz_srcptr z, mpfr_prec_t prec) {
    Real r(prec);
    mpfr_set_z(r.v_, z, MPFR_RNDN);
    return r;
  }
  static Real pi(mpfr_prec_t prec) {
    Real r(prec);
    mpfr_const_pi(r.v_, MPFR_RNDN);
    return r;
  }
  static Real euler(mpfr_prec_t prec) {
    Real r(prec);
    mpfr_const_euler(r.v_, MPFR_RNDN);
    return r;
  }

  mpfr_prec_t prec() const { return mpfr_get_prec(v_); }
  mpfr_ptr raw() { return v_; }
  mpfr_srcptr raw() const { return v_; }

  double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }
  DD to_dd() const {
    double hi = mpfr_get_d(v_, MPFR_RNDN);
    Real rest(*this);
    mpfr_sub_d(rest.v_, rest.v_, hi, MPFR_RNDN);
    return DD(hi, mpfr_get_d(rest.v_, MPFR_RNDN));
  }
  std::string to_string(int significant_digits = 25) const {
    char* out = nullptr;
    mpfr_asprintf(&out, "%.*Re", significant_digits - 1, v_);
    std::string s(out);
    mpfr_free_str(out);
    return s;
  }

  Real& operator+=(const Real& o) { mpfr_add(v_, v_, o.v_, MPFR_RNDN); return *this; }
  Real& operator-=(const Real& o) { mpfr_sub(v_, v_, o.v_, MPFR_RNDN); return *this; }
  Real& operator*=(const Real& o) { mpfr_mul(v_, v_, o.v_, MPFR_RNDN); return *this; }
  Real& operator/=(const Real& o) { mpfr_div(v_, v_, o.v_, MPFR_RNDN); return *this; }
  Real& operator+=(double d) { mpfr_add_d(v_, v_, d, MPFR_RNDN); return *this; }
  Real& operator-=(double d) { mpfr_sub_d(v_, v_, d, MPFR_RNDN); return *this; }
  Real& operator*=(double d) { mpfr_mul_d(v_, v_, d, MPFR_RNDN); return *this; }
  Real& operator/=(double d) { mpfr_div_d(v_, v_, d, MPFR_RNDN); return *this; }

  friend Real operator+(Real a, const Real& b) { return a += b; }
  friend Real operator-(Real a, const Real& b) { return a -= b; }
  friend Real operator*(Real a, const Real& b) { return a *= b; }
  friend Real operator/(Real a, const Real& b) { return a /= b; }
  friend Real operator+(Real a, double b) { return a += b; }
  friend Real operator-(Real a, double b) { return a -= b; }
  friend Real operator*(Real a, double b) { return a *= b; }
  friend Real operator/(Real a, double b) { return a /= b; }
  Real operator-() const {
    Real r(*this);
    mpfr_neg(r.v_, r.v_, MPFR_RNDN);
    return r;
  }

  int cmp(const Real& o) const { return mpfr_cmp(v_, o.v_); }
  friend bool operator<(const Real& a, const Real& b) { return a.cmp(b) < 0; }
  friend bool operator>(const Real& a, const Real& b) { return a.cmp(b) > 0; }
  friend bool operator<=(const Real& a, const Real& b) { return a.cmp(b) <= 0; }
  friend bool operator>=(const Real& a, const Real& b) { return a.cmp(b) >= 0; }

  friend Real abs(Real a) {
    mpfr_abs(a.v_, a.v_, MPFR_RNDN);
    return a;
  }
  friend Real log(Real a) {
    mpfr_log(a.v_, a.v_, MPFR_RNDN);
    return a;
  }
  friend Real log1p(Real a) {
    mpfr_log1p(a.v_, a.v_, MPFR_RNDN);
    return a;
  }
  friend Real exp(Real a) {
    mpfr_exp(a.v_, a.v_, MPFR_RNDN);
    return a;
  }
  friend Real sqrt(Real a) {
    mpfr_sqrt(a.v_, a.v_, MPFR_RNDN);
    return a;
  }
  friend Real pow_si(Real a, long e) {
    mpfr_pow_si(a.v_, a.v_, e, MPFR_RNDN);
    return a;
  }

 private:
  mpfr_t v_;
};

}  // namespace psix
