#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "psix/constants.hpp"
#include "psix/errors.hpp"
#include "psix/sieve.hpp"

using namespace psix;

namespace {

double abs_diff(const Real& a, const Real& b) { return abs(a - b).to_double(); }

// Independent gamma: Brent-McMillan with the Bessel-function ratio
//   gamma = S0(2n)/I0(2n) - log n + O(e^{-4n}),
// S0(x) = sum H_k (x/2)^{2k} / (k!)^2, I0(x) = sum (x/2)^{2k} / (k!)^2.
Real gamma_brent_mcmillan(int bits) {
  mpfr_prec_t prec = bits + 64;
  unsigned n = static_cast<unsigned>(bits * 0.25 * std::log(2.0)) + 4;  // 4n > bits*ln2
  Real num(prec), den(prec), term(prec), harmonic(prec);
  mpfr_set_ui(term.raw(), 1, MPFR_RNDN);
  Real n2 = Real::from_u64(n, prec) * Real::from_u64(n, prec);
  for (unsigned k = 0;; ++k) {
    if (k > 0) {
      term *= n2;
      term /= static_cast<double>(k) * static_cast<double>(k);
      harmonic += Real::from_u64(1, prec) / Real::from_u64(k, prec);
    }
    den += term;
    num += term * harmonic;
    if (k > 2 * n && term.to_double() < std::ldexp(1.0, -(bits + 32)) * den.to_double())
      break;
  }
  Real g = num / den - log(Real::from_u64(n, prec));
  Real out(bits);
  mpfr_set(out.raw(), g.raw(), MPFR_RNDN);
  return out;
}

}  // namespace

TEST_CASE("euler gamma seed digits") {
  Real g = euler_gamma(53);
  CHECK(std::abs(g.to_double() - 0.577215665) < 1e-9);
}

TEST_CASE("euler gamma cross-checked against an independent algorithm") {
  Real a = euler_gamma(160);
  Real b = gamma_brent_mcmillan(160);
  CHECK(abs_diff(a, b) < 1e-40);
}

TEST_CASE("euler gamma idempotent and monotone under refinement") {
  Real a = euler_gamma(106);
  Real b = euler_gamma(106);
  CHECK(a.cmp(b) == 0);
  Real hi = euler_gamma(212);
  Real rounded(106);
  mpfr_set(rounded.raw(), hi.raw(), MPFR_RNDN);
  CHECK(abs_diff(a, rounded) <= std::ldexp(std::abs(a.to_double()), -105));
}

TEST_CASE("euler gamma precision range enforced") {
  CHECK_THROWS_AS(euler_gamma(8), ArgumentError);
  CHECK_THROWS_AS(euler_gamma(5000), ArgumentError);
}

TEST_CASE("mertens constant matches seed digits") {
  Real b1 = mertens_constant(53, 1000000);
  CHECK(std::abs(b1.to_double() - 0.2614972128) < 1e-10);
  // 30-digit reference computed at higher precision with an independent sweep
  Real b1_hi = mertens_constant(160, 1000000);
  Real ref = Real::from_double(0.0, 200);
  mpfr_set_str(ref.raw(), "0.26149721284764278375542683860870", 10, MPFR_RNDN);
  CHECK(abs_diff(b1_hi, ref) < 1e-30);
}

TEST_CASE("mertens cutoff consistency stays below the certified tail bound") {
  Real a = mertens_constant(106, 10000);
  Real b = mertens_constant(106, 100000);
  Real c = mertens_constant(106, 1000000);
  CHECK(abs_diff(a, c) < mertens_tail_bound(10000));
  CHECK(abs_diff(b, c) < mertens_tail_bound(100000));
  CHECK(abs_diff(a, c) < 2e-4);  // bound evaluated numerically at 10^4
}

TEST_CASE("certified bound validated across cutoff decades") {
  for (std::uint64_t cutoff : {1000ull, 10000ull, 100000ull}) {
    Real lo = mertens_constant(106, cutoff);
    Real hi = mertens_constant(106, 10 * cutoff);
    CHECK(abs_diff(lo, hi) <= mertens_tail_bound(cutoff));
  }
}

TEST_CASE("mertens cutoff guard") {
  CHECK_THROWS_AS(mertens_constant(53, 50), PrecisionInfeasibleError);
  try {
    mertens_constant(53, 50);
  } catch (const PrecisionInfeasibleError& e) {
    CHECK(e.minimal_cutoff == 100);
  }
}

TEST_CASE("basel inverse") {
  Real b = basel_inverse(106);
  CHECK(std::abs(b.to_double() - 0.6079271018) < 1e-9);
  // product with pi^2/6 is 1
  Real pi = Real::pi(160);
  Real prod = b * (pi * pi / Real::from_u64(6, 160));
  CHECK(std::abs(prod.to_double() - 1.0) < 1e-30);
}

TEST_CASE("basel inverse equals truncated Moebius sum") {
  // sum_{n<=10^6} mu(n)/n^2, Moebius by factorization sieve
  const std::uint32_t N = 1000000;
  std::vector<std::int8_t> mu(N + 1, 1);
  std::vector<std::uint32_t> spf(N + 1, 0);
  for (std::uint32_t i = 2; i <= N; ++i) {
    if (spf[i]) continue;
    for (std::uint64_t j = i; j <= N; j += i)
      if (!spf[j]) spf[j] = i;
  }
  for (std::uint32_t i = 2; i <= N; ++i) {
    std::uint32_t n = i;
    int m = 1;
    bool square = false;
    while (n > 1) {
      std::uint32_t p = spf[n];
      n /= p;
      if (n % p == 0) {
        square = true;
        break;
      }
      m = -m;
    }
    mu[i] = square ? 0 : static_cast<std::int8_t>(m);
  }
  Real sum(200);
  for (std::uint32_t n = N; n >= 1; --n) {
    if (!mu[n]) continue;
    Real t = Real::from_u64(1, 200) / Real::from_u64(std::uint64_t(n) * n, 200);
    if (mu[n] > 0)
      sum += t;
    else
      sum -= t;
  }
  CHECK(abs_diff(basel_inverse(106), sum) < 2e-6);
}

TEST_CASE("asymptote coefficients internally consistent") {
  auto c = asymptote_coefficients(160);
  CHECK(std::abs(c.e_gamma.to_double() - 1.7810724179) < 1e-9);
  Real second = c.e_gamma * basel_inverse(160);
  CHECK(abs_diff(c.psi_coeff, second) < 1e-40);
  CHECK(std::abs(c.psi_coeff.to_double() - 1.0827621932) < 1e-9);
  Real residue = c.e_gamma - c.psi_coeff - c.nonsq_coeff;
  CHECK(std::abs(residue.to_double()) < 1e-45);
}

TEST_CASE("prime zeta seed values") {
  // P(2) = 0.4522474200... (sum of inverse squares of primes)
  CHECK(std::abs(prime_zeta(2, 106).to_double() - 0.45224742004) < 1e-10);
  Real direct(200);
  for (auto p : primes_up_to(100000))
    direct += Real::from_u64(1, 200) / Real::from_u64(p * p, 200);
  CHECK(abs_diff(prime_zeta(2, 106), direct) < 1e-5);
}

TEST_CASE("working constants agree with their Real sources") {
  const auto& wc = working_constants();
  CHECK(std::abs(wc.gamma.to_double() - 0.5772156649) < 1e-10);
  CHECK(std::abs(wc.b1.to_double() - 0.2614972128) < 1e-10);
  CHECK(std::abs((wc.e_gamma * wc.basel_inv - wc.psi_coeff).to_double()) < 1e-30);
  CHECK(std::abs((wc.pi_sq_over_6 * wc.basel_inv - DD(1.0)).to_double()) < 1e-30);
}
