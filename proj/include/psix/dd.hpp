#pragma once

// Double-double arithmetic: a real carried as an unevaluated sum of two
// doubles (hi + lo), giving ~106 significand bits. Error-free transforms
// follow Dekker/Knuth; the accurate (two-path) variants are used throughout
// so that every combine is deterministic given operand order.

#include <cmath>
#include <cstdint>
#include <string>

namespace psix {

struct DD {
  double hi = 0.0;
  double lo = 0.0;

  constexpr DD() = default;
  constexpr DD(double h) : hi(h), lo(0.0) {}
  constexpr DD(double h, double l) : hi(h), lo(l) {}

  double to_double() const { return hi + lo; }

  DD operator-() const { return DD(-hi, -lo); }

  DD& operator+=(const DD& o);
  DD& operator-=(const DD& o);
  DD& operator*=(const DD& o);
  DD& operator/=(const DD& o);
  DD& operator+=(double o);
  DD& operator*=(double o);
};

namespace detail {

inline double two_sum(double a, double b, double& err) {
  double s = a + b;
  double bb = s - a;
  err = (a - (s - bb)) + (b - bb);
  return s;
}

// requires |a| >= |b| or a == 0
inline double quick_two_sum(double a, double b, double& err) {
  double s = a + b;
  err = b - (s - a);
  return s;
}

inline double two_prod(double a, double b, double& err) {
  double p = a * b;
  err = std::fma(a, b, -p);
  return p;
}

}  // namespace detail

inline DD dd_add(const DD& a, const DD& b) {
  double s1, s2, t1, t2;
  s1 = detail::two_sum(a.hi, b.hi, s2);
  t1 = detail::two_sum(a.lo, b.lo, t2);
  s2 += t1;
  s1 = detail::quick_two_sum(s1, s2, s2);
  s2 += t2;
  s1 = detail::quick_two_sum(s1, s2, s2);
  return DD(s1, s2);
}

inline DD dd_add(const DD& a, double b) {
  double s1, s2;
  s1 = detail::two_sum(a.hi, b, s2);
  s2 += a.lo;
  s1 = detail::quick_two_sum(s1, s2, s2);
  return DD(s1, s2);
}

inline DD dd_sub(const DD& a, const DD& b) { return dd_add(a, -b); }

inline DD dd_mul(const DD& a, const DD& b) {
  double p1, p2;
  p1 = detail::two_prod(a.hi, b.hi, p2);
  p2 += a.hi * b.lo + a.lo * b.hi;
  p1 = detail::quick_two_sum(p1, p2, p2);
  return DD(p1, p2);
}

inline DD dd_mul(const DD& a, double b) {
  double p1, p2;
  p1 = detail::two_prod(a.hi, b, p2);
  p2 += a.lo * b;
  p1 = detail::quick_two_sum(p1, p2, p2);
  return DD(p1, p2);
}

// accurate quotient of two doubles as a DD
inline DD dd_div(double a, double b) {
  double q1 = a / b;
  double r = std::fma(-q1, b, a);
  double q2 = r / b;
  double s, e;
  s = detail::quick_two_sum(q1, q2, e);
  return DD(s, e);
}

inline DD dd_div(const DD& a, const DD& b) {
  double q1 = a.hi / b.hi;
  DD r = dd_sub(a, dd_mul(b, q1));
  double q2 = r.hi / b.hi;
  r = dd_sub(r, dd_mul(b, q2));
  double q3 = r.hi / b.hi;
  double s, e;
  s = detail::quick_two_sum(q1, q2, e);
  DD q(s, e);
  return dd_add(q, q3);
}

inline DD& DD::operator+=(const DD& o) { return *this = dd_add(*this, o); }
inline DD& DD::operator-=(const DD& o) { return *this = dd_sub(*this, o); }
inline DD& DD::operator*=(const DD& o) { return *this = dd_mul(*this, o); }
inline DD& DD::operator/=(const DD& o) { return *this = dd_div(*this, o); }
inline DD& DD::operator+=(double o) { return *this = dd_add(*this, o); }
inline DD& DD::operator*=(double o) { return *this = dd_mul(*this, o); }

inline DD operator+(const DD& a, const DD& b) { return dd_add(a, b); }
inline DD operator-(const DD& a, const DD& b) { return dd_sub(a, b); }
inline DD operator*(const DD& a, const DD& b) { return dd_mul(a, b); }
inline DD operator/(const DD& a, const DD& b) { return dd_div(a, b); }
inline DD operator+(const DD& a, double b) { return dd_add(a, b); }
inline DD operator-(const DD& a, double b) { return dd_add(a, -b); }
inline DD operator*(const DD& a, double b) { return dd_mul(a, b); }
inline DD operator/(const DD& a, double b) { return dd_div(a, DD(b)); }

inline bool operator<(const DD& a, const DD& b) {
  return a.hi < b.hi || (a.hi == b.hi && a.lo < b.lo);
}
inline bool operator>(const DD& a, const DD& b) { return b < a; }
inline bool operator==(const DD& a, const DD& b) {
  return a.hi == b.hi && a.lo == b.lo;
}
inline bool operator<=(const DD& a, const DD& b) { return !(b < a); }
inline bool operator>=(const DD& a, const DD& b) { return !(a < b); }

inline DD dd_abs(const DD& a) { return a.hi < 0.0 ? -a : a; }

// exact conversion of a 64-bit unsigned integer
DD dd_from_u64(std::uint64_t x);

DD dd_sqrt(const DD& a);
DD dd_exp(const DD& a);
DD dd_log(const DD& a);     // a > 0
// log(1+u) by direct series; requires |u| <= 1/2
DD dd_log1p_small(const DD& u);

// 25-significant-digit scientific decimal (via a 120-bit join of hi+lo)
std::string dd_to_string(const DD& a, int significant_digits = 25);

// bit-exact round trip as a pair of C99 hex-float literals "hexhi:hexlo"
std::string dd_to_hex(const DD& a);
DD dd_from_hex(const std::string& s);

}  // namespace psix
