#include "psix/dd.hpp"

#include <mpfr.h>

#include <cstdio>
#include <cstdlib>
#include <stdexcept>

namespace psix {

namespace {

// ln 2 to double-double precision
const DD kLn2(6.931471805599452862e-01, 2.3190468138462995584e-17);

}  // namespace

DD dd_from_u64(std::uint64_t x) {
  double top = static_cast<double>(x >> 32) * 4294967296.0;  // exact
  double bot = static_cast<double>(x & 0xffffffffULL);       // exact
  double s, e;
  s = detail::two_sum(top, bot, e);
  return DD(s, e);
}

DD dd_sqrt(const DD& a) {
  if (a.hi == 0.0 && a.lo == 0.0) return DD(0.0);
  if (a.hi < 0.0) throw std::domain_error("dd_sqrt of negative value");
  double x = 1.0 / std::sqrt(a.hi);
  double ax = a.hi * x;
  DD r = dd_sub(a, dd_mul(DD(ax), DD(ax)));
  return dd_add(DD(ax), r.hi * (x * 0.5));
}

DD dd_exp(const DD& a) {
  if (a.hi > 700.0) throw std::overflow_error("dd_exp overflow");
  if (a.hi < -745.0) return DD(0.0);
  double k = std::nearbyint(a.hi / kLn2.hi);
  DD r = dd_sub(a, dd_mul(kLn2, k));  // |r| <= ln2/2 + eps
  // Taylor series of exp(r); |r| small so ~26 terms suffice
  DD sum(1.0);
  DD term(1.0);
  for (int n = 1; n <= 32; ++n) {
    term = dd_mul(term, r);
    term = dd_div(term, DD(static_cast<double>(n)));
    sum = dd_add(sum, term);
    if (std::abs(term.hi) < 1e-35 * std::abs(sum.hi)) break;
  }
  int ik = static_cast<int>(k);
  return DD(std::ldexp(sum.hi, ik), std::ldexp(sum.lo, ik));
}

DD dd_log(const DD& a) {
  if (a.hi <= 0.0) throw std::domain_error("dd_log of non-positive value");
  int e = 0;
  double mh = std::frexp(a.hi, &e);  // mh in [0.5, 1)
  if (mh < 0.70710678118654752) {
    mh *= 2.0;
    e -= 1;
  }
  DD m(mh, std::ldexp(a.lo, -e));
  // log m = 2 atanh(u), u = (m-1)/(m+1), |u| <= ~0.172
  DD u = dd_div(dd_add(m, -1.0), dd_add(m, 1.0));
  DD u2 = dd_mul(u, u);
  DD term = u;
  DD sum = u;
  for (int n = 3; n <= 45; n += 2) {
    term = dd_mul(term, u2);
    DD t = dd_div(term, DD(static_cast<double>(n)));
    sum = dd_add(sum, t);
    if (std::abs(t.hi) < 1e-35 * std::abs(sum.hi)) break;
  }
  sum = dd_mul(sum, 2.0);
  return dd_add(dd_mul(kLn2, static_cast<double>(e)), sum);
}

DD dd_log1p_small(const DD& u) {
  if (std::abs(u.hi) > 0.5)
    throw std::domain_error("dd_log1p_small requires |u| <= 1/2");
  // alternating series u - u^2/2 + u^3/3 - ...
  DD sum = u;
  DD pow = u;
  double sign = -1.0;
  for (int n = 2; n <= 130; ++n) {
    pow = dd_mul(pow, u);
    DD t = dd_div(dd_mul(pow, sign), DD(static_cast<double>(n)));
    sum = dd_add(sum, t);
    sign = -sign;
    if (std::abs(t.hi) < 1e-35 * std::abs(sum.hi) + 1e-320) break;
  }
  return sum;
}

std::string dd_to_string(const DD& a, int significant_digits) {
  mpfr_t v;
  mpfr_init2(v, 140);
  mpfr_set_d(v, a.hi, MPFR_RNDN);
  mpfr_add_d(v, v, a.lo, MPFR_RNDN);
  char* out = nullptr;
  mpfr_asprintf(&out, "%.*Re", significant_digits - 1, v);
  std::string s(out);
  mpfr_free_str(out);
  mpfr_clear(v);
  return s;
}

std::string dd_to_hex(const DD& a) {
  char buf[96];
  std::snprintf(buf, sizeof(buf), "%a:%a", a.hi, a.lo);
  return buf;
}

DD dd_from_hex(const std::string& s) {
  auto pos = s.find(':');
  if (pos == std::string::npos)
    throw std::invalid_argument("malformed dd hex pair: " + s);
  char* end = nullptr;
  double hi = std::strtod(s.substr(0, pos).c_str(), &end);
  double lo = std::strtod(s.substr(pos + 1).c_str(), &end);
  return DD(hi, lo);
}

}  // namespace psix
