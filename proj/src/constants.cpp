#include "psix/constants.hpp"

#include <cmath>

#include "psix/errors.hpp"
#include "psix/sieve.hpp"

namespace psix {

namespace {

void check_bits(int bits) {
  if (bits < kMinPrecisionBits || bits > kMaxPrecisionBits)
    throw ArgumentError("precision_bits must be in [24, 4096]");
}

int moebius_small(unsigned n) {
  int m = 1;
  for (unsigned p = 2; p * p <= n; ++p) {
    if (n % p == 0) {
      n /= p;
      if (n % p == 0) return 0;
      m = -m;
    }
  }
  if (n > 1) m = -m;
  return m;
}

}  // namespace

Real euler_gamma(int precision_bits) {
  check_bits(precision_bits);
  return Real::euler(precision_bits);  // MPFR: Brent-McMillan scheme
}

double mertens_tail_bound(std::uint64_t prime_cutoff) {
  return 2.0 / static_cast<double>(prime_cutoff);
}

Real prime_zeta(unsigned s, int precision_bits) {
  if (s < 2) throw ArgumentError("prime_zeta requires s >= 2");
  mpfr_prec_t prec = precision_bits + 16;
  Real sum(prec);
  // P(s) = sum_{k>=1} mu(k)/k * log zeta(k s); log zeta(m) ~ 2^-m
  for (unsigned k = 1; k * s <= static_cast<unsigned>(prec) + 10; ++k) {
    int mu = moebius_small(k);
    if (mu == 0) continue;
    Real z(prec);
    mpfr_zeta_ui(z.raw(), k * s, MPFR_RNDN);
    Real term = log(z);
    term /= static_cast<double>(k);
    if (mu > 0)
      sum += term;
    else
      sum -= term;
  }
  Real out(precision_bits);
  mpfr_set(out.raw(), sum.raw(), MPFR_RNDN);
  return out;
}

Real mertens_constant(int precision_bits, std::uint64_t prime_cutoff) {
  check_bits(precision_bits);
  if (prime_cutoff < 100)
    throw PrecisionInfeasibleError(
        "mertens_constant: prime cutoff too small, minimal cutoff is 100", 100);
  mpfr_prec_t prec = precision_bits + 64;

  // n_max: drop tail orders n with cutoff^{1-n}/(n-1) below the rounding floor
  double log2_cutoff = std::log2(static_cast<double>(prime_cutoff));
  unsigned n_max = 2;
  while ((static_cast<double>(n_max) - 0.0) * log2_cutoff <
         static_cast<double>(prec) + 20)
    ++n_max;

  Real acc(prec);  // sum over p <= cutoff of (log(1 - 1/p) + 1/p)
  std::vector<Real> power_sums;  // S_n = sum_{p <= cutoff} p^{-n}, n = 2..n_max
  for (unsigned n = 2; n <= n_max; ++n) power_sums.emplace_back(prec);

  Real r(prec), t(prec);
  for_each_prime(2, prime_cutoff + 1, [&](std::uint64_t p) {
    mpfr_set_uj(r.raw(), p, MPFR_RNDN);
    mpfr_ui_div(r.raw(), 1, r.raw(), MPFR_RNDN);  // 1/p
    mpfr_neg(t.raw(), r.raw(), MPFR_RNDN);
    mpfr_log1p(t.raw(), t.raw(), MPFR_RNDN);  // log(1 - 1/p)
    mpfr_add(t.raw(), t.raw(), r.raw(), MPFR_RNDN);
    mpfr_add(acc.raw(), acc.raw(), t.raw(), MPFR_RNDN);
    Real pw = r;
    for (unsigned n = 2; n <= n_max; ++n) {
      pw *= r;
      power_sums[n - 2] += pw;
      if (std::abs(pw.to_double()) < std::ldexp(1.0, -(static_cast<int>(prec) + 20)))
        break;
    }
  });

  // tail over p > cutoff: sum_n (1/n)(P(n) - S_n)
  Real tail(prec);
  for (unsigned n = 2; n <= n_max; ++n) {
    Real d = prime_zeta(n, static_cast<int>(prec)) - power_sums[n - 2];
    d /= static_cast<double>(n);
    tail += d;
  }

  Real b1 = euler_gamma(static_cast<int>(prec)) + acc - tail;
  Real out(precision_bits);
  mpfr_set(out.raw(), b1.raw(), MPFR_RNDN);
  return out;
}

Real basel_inverse(int precision_bits) {
  check_bits(precision_bits);
  mpfr_prec_t prec = precision_bits + 16;
  Real pi = Real::pi(prec);
  Real v = Real::from_u64(6, prec) / (pi * pi);
  Real out(precision_bits);
  mpfr_set(out.raw(), v.raw(), MPFR_RNDN);
  return out;
}

AsymptoteCoefficients asymptote_coefficients(int precision_bits) {
  check_bits(precision_bits);
  mpfr_prec_t prec = precision_bits + 16;
  Real eg = exp(Real::euler(prec));
  Real second = eg * (Real::from_u64(6, prec) / (Real::pi(prec) * Real::pi(prec)));
  Real third = eg - second;
  auto round_to = [&](const Real& v) {
    Real out(precision_bits);
    mpfr_set(out.raw(), v.raw(), MPFR_RNDN);
    return out;
  };
  return AsymptoteCoefficients{round_to(eg), round_to(second), round_to(third)};
}

std::vector<NamedConstant> named_constants(int precision_bits,
                                           std::uint64_t mertens_cutoff) {
  auto coeffs = asymptote_coefficients(precision_bits);
  std::vector<NamedConstant> out;
  out.push_back({"gamma", euler_gamma(precision_bits), precision_bits,
                 "binary-splitting limit scheme (MPFR const_euler)"});
  out.push_back({"B1", mertens_constant(precision_bits, mertens_cutoff),
                 precision_bits,
                 "gamma + sum_{p<=" + std::to_string(mertens_cutoff) +
                     "}(log(1-1/p)+1/p), prime-zeta tail"});
  out.push_back({"6/pi^2", basel_inverse(precision_bits), precision_bits,
                 "6 / pi^2, pi by MPFR const_pi"});
  out.push_back({"e^gamma", coeffs.e_gamma, precision_bits, "exp(gamma)"});
  out.push_back({"6e^gamma/pi^2", coeffs.psi_coeff, precision_bits,
                 "e^gamma * 6/pi^2"});
  out.push_back({"(1-6/pi^2)e^gamma", coeffs.nonsq_coeff, precision_bits,
                 "e^gamma - 6e^gamma/pi^2"});
  return out;
}

const WorkingConstants& working_constants() {
  static const WorkingConstants wc = [] {
    const int bits = 160;
    WorkingConstants w;
    Real g = euler_gamma(bits);
    Real eg = exp(g);
    Real bi = basel_inverse(bits);
    w.gamma = g.to_dd();
    w.e_gamma = eg.to_dd();
    w.b1 = mertens_constant(bits, 1000000).to_dd();
    w.basel_inv = bi.to_dd();
    w.psi_coeff = (eg * bi).to_dd();
    w.nonsq_coeff = (eg - eg * bi).to_dd();
    Real pi = Real::pi(bits);
    w.pi_sq_over_6 = (pi * pi / Real::from_u64(6, bits)).to_dd();
    return w;
  }();
  return wc;
}

}  // namespace psix
