#include "psix/arithfun.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "psix/bigfloat.hpp"
#include "psix/constants.hpp"
#include "psix/errors.hpp"
#include "psix/sieve.hpp"

namespace psix {

namespace {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

u64 mulmod(u64 a, u64 b, u64 m) { return static_cast<u64>(u128(a) * b % m); }

u64 powmod(u64 a, u64 e, u64 m) {
  u64 r = 1;
  a %= m;
  while (e) {
    if (e & 1) r = mulmod(r, a, m);
    a = mulmod(a, a, m);
    e >>= 1;
  }
  return r;
}

const std::vector<std::uint32_t>& trial_primes() {
  static const auto primes = small_primes(1000000);
  return primes;
}

u64 pollard_rho(u64 n) {
  if (n % 2 == 0) return 2;
  for (u64 c = 1;; ++c) {
    u64 x = 2, y = 2, d = 1;
    while (d == 1) {
      x = (mulmod(x, x, n) + c) % n;
      y = (mulmod(y, y, n) + c) % n;
      y = (mulmod(y, y, n) + c) % n;
      d = std::gcd(x > y ? x - y : y - x, n);
    }
    if (d != n) return d;
  }
}

void factor_rec(u64 n, std::vector<u64>& out) {
  if (n == 1) return;
  if (is_prime_u64(n)) {
    out.push_back(n);
    return;
  }
  u64 d = pollard_rho(n);
  factor_rec(d, out);
  factor_rec(n / d, out);
}

std::uint32_t valuation(u64 n, u64 p) {
  std::uint32_t v = 0;
  while (n % p == 0) {
    n /= p;
    ++v;
  }
  return v;
}

}  // namespace

bool is_prime_u64(u64 n) {
  if (n < 2) return false;
  for (u64 p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull,
                29ull, 31ull, 37ull}) {
    if (n % p == 0) return n == p;
  }
  u64 d = n - 1;
  int s = 0;
  while (d % 2 == 0) {
    d /= 2;
    ++s;
  }
  // deterministic base set for 64-bit inputs
  for (u64 a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull,
                29ull, 31ull, 37ull}) {
    u64 x = powmod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int i = 1; i < s; ++i) {
      x = mulmod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

FactoredInteger FactoredInteger::from_factors(
    std::vector<std::pair<u64, std::uint32_t>> factors) {
  mpz_class value = 1;
  u64 prev = 0;
  for (auto [p, e] : factors) {
    if (p <= prev) throw ArgumentError("factors must be strictly increasing primes");
    if (e == 0) throw ArgumentError("exponents must be >= 1");
    if (!is_prime_u64(p)) throw ArgumentError("non-prime factor " + std::to_string(p));
    prev = p;
    mpz_class pp;
    mpz_ui_pow_ui(pp.get_mpz_t(), p, e);
    value *= pp;
  }
  mpz_class cap = mpz_class(1) << 127;
  if (value > cap) throw ArgumentError("reconstructed value exceeds 2^127");
  FactoredInteger f;
  f.factors = std::move(factors);
  return f;
}

mpz_class FactoredInteger::value() const {
  mpz_class v = 1;
  for (auto [p, e] : factors) {
    mpz_class pp;
    mpz_ui_pow_ui(pp.get_mpz_t(), p, e);
    v *= pp;
  }
  return v;
}

double FactoredInteger::log_value() const {
  double s = 0;
  for (auto [p, e] : factors) s += e * std::log(static_cast<double>(p));
  return s;
}

std::uint64_t FactoredInteger::divisor_count_capped(u64 cap) const {
  u64 c = 1;
  for (auto [p, e] : factors) {
    (void)p;
    if (c > cap / (e + 1)) return cap + 1;
    c *= (e + 1);
  }
  return c;
}

std::string FactoredInteger::to_string() const {
  if (factors.empty()) return "1";
  std::string s;
  for (auto [p, e] : factors) {
    if (!s.empty()) s += "*";
    s += std::to_string(p);
    if (e > 1) s += "^" + std::to_string(e);
  }
  return s;
}

FactoredInteger factorize(u64 n) {
  if (n == 0) throw ArgumentError("factorize: n must be >= 1");
  if (n > (1ull << 63)) throw ArgumentError("factorize: n exceeds 2^63");
  FactoredInteger f;
  u64 m = n;
  for (std::uint32_t p : trial_primes()) {
    if (u64(p) * p > m) break;
    if (m % p == 0) {
      std::uint32_t e = 0;
      while (m % p == 0) {
        m /= p;
        ++e;
      }
      f.factors.emplace_back(p, e);
    }
  }
  if (m > 1) {
    std::vector<u64> rest;
    factor_rec(m, rest);
    std::sort(rest.begin(), rest.end());
    for (std::size_t i = 0; i < rest.size();) {
      std::size_t j = i;
      while (j < rest.size() && rest[j] == rest[i]) ++j;
      f.factors.emplace_back(rest[i], static_cast<std::uint32_t>(j - i));
      i = j;
    }
  }
  return f;
}

ExactRatio psi_ratio(const FactoredInteger& f) {
  ExactRatio r(1);
  for (auto [p, e] : f.factors) {
    (void)e;  // radical dependence
    r *= ExactRatio(mpz_class(p) + 1, p);
  }
  r.canonicalize();
  return r;
}

ExactRatio sigma_ratio(const FactoredInteger& f) {
  ExactRatio r(1);
  for (auto [p, e] : f.factors) {
    mpz_class pe1;
    mpz_ui_pow_ui(pe1.get_mpz_t(), p, e + 1);
    mpz_class pe = pe1 / p;
    ExactRatio t(pe1 - 1, pe1 - pe);  // (p^{e+1}-1) / (p^e (p-1))
    r *= t;
  }
  r.canonicalize();
  return r;
}

ExactRatio phi_inverse_ratio(const FactoredInteger& f) {
  ExactRatio r(1);
  for (auto [p, e] : f.factors) {
    (void)e;
    r *= ExactRatio(mpz_class(p), mpz_class(p) - 1);
  }
  r.canonicalize();
  return r;
}

int moebius(const FactoredInteger& f) {
  for (auto [p, e] : f.factors) {
    (void)p;
    if (e >= 2) return 0;
  }
  return f.factors.size() % 2 == 0 ? 1 : -1;
}

std::pair<ExactRatio, ExactRatio> divisor_sum_decomposition(
    const FactoredInteger& f) {
  if (f.divisor_count_capped(10000000) > 10000000)
    throw ResourceLimitError("divisor_sum_decomposition: divisor count guard (10^7) exceeded");
  ExactRatio squarefree = psi_ratio(f);  // sum over squarefree d|N of 1/d
  ExactRatio rest = sigma_ratio(f) - squarefree;
  rest.canonicalize();
  return {squarefree, rest};
}

std::int64_t ramanujan_sum(u64 q, u64 n) {
  if (q == 0 || n == 0) throw ArgumentError("ramanujan_sum: q, n must be >= 1");
  if (q > 10000000) throw ArgumentError("ramanujan_sum: q exceeds 10^7");
  FactoredInteger fq = factorize(q);
  // gcd(q, n) through exponents of q's primes in n
  std::vector<std::pair<u64, std::uint32_t>> g;  // factorization of gcd
  for (auto [p, a] : fq.factors) g.emplace_back(p, std::min(a, valuation(n, p)));
  // sum over divisors d of gcd of d * mu(q/d)
  std::int64_t total = 0;
  std::vector<std::uint32_t> expo(g.size(), 0);
  for (;;) {
    u64 d = 1;
    int mu = 1;
    bool nonzero = true;
    for (std::size_t i = 0; i < g.size(); ++i) {
      for (std::uint32_t j = 0; j < expo[i]; ++j) d *= g[i].first;
      std::uint32_t rem = fq.factors[i].second - expo[i];  // exponent in q/d
      if (rem >= 2) {
        nonzero = false;
        break;
      }
      if (rem == 1) mu = -mu;
    }
    if (nonzero) total += static_cast<std::int64_t>(d) * mu;
    // next divisor of gcd
    std::size_t i = 0;
    while (i < g.size() && expo[i] == g[i].second) expo[i++] = 0;
    if (i == g.size()) break;
    ++expo[i];
  }
  return total;
}

DD ramanujan_partial_sigma(u64 n, u64 Q) {
  if (n == 0 || Q == 0) throw ArgumentError("ramanujan_partial_sigma: n, Q must be >= 1");
  DD sum;
  for (u64 q = 1; q <= Q; ++q) {
    std::int64_t c = ramanujan_sum(q, n);
    if (c == 0) continue;
    sum += dd_div(static_cast<double>(c), static_cast<double>(q) * static_cast<double>(q));
  }
  return working_constants().pi_sq_over_6 * sum;
}

DD ratio_to_dd(const ExactRatio& r) {
  Real num = Real::from_mpz(r.get_num().get_mpz_t(), 200);
  Real den = Real::from_mpz(r.get_den().get_mpz_t(), 200);
  return (num / den).to_dd();
}

}  // namespace psix
