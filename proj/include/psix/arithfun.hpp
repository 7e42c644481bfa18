#pragma once

// Exact arithmetic functions on factored integers. Every ratio is an exact
// rational; floating conversion happens only at module boundaries so that
// inequality verdicts never hinge on rounding.

#include <gmpxx.h>

#include <cstdint>
#include <utility>
#include <vector>

#include "psix/dd.hpp"

namespace psix {

using ExactRatio = mpq_class;  // always canonicalized, denominator >= 1

struct FactoredInteger {
  // (prime, exponent), primes strictly increasing, exponents >= 1;
  // empty list is N = 1
  std::vector<std::pair<std::uint64_t, std::uint32_t>> factors;

  // validates primality, ordering and the 2^127 reconstruction bound
  static FactoredInteger from_factors(
      std::vector<std::pair<std::uint64_t, std::uint32_t>> factors);

  mpz_class value() const;
  double log_value() const;  // log N via sum of exponent * log p
  std::uint64_t divisor_count_capped(std::uint64_t cap) const;
  std::string to_string() const;  // "2^3*3^2*5"
};

bool is_prime_u64(std::uint64_t n);  // deterministic Miller-Rabin

FactoredInteger factorize(std::uint64_t n);  // 1 <= n < 2^63

ExactRatio psi_ratio(const FactoredInteger& f);          // prod (1 + 1/p)
ExactRatio sigma_ratio(const FactoredInteger& f);        // sigma(N)/N
ExactRatio phi_inverse_ratio(const FactoredInteger& f);  // N/phi(N)
int moebius(const FactoredInteger& f);

// (squarefree part, nonsquarefree part) of sum_{d|N} 1/d; parts are exact
// and sum to sigma_ratio. Guard: total divisor count <= 10^7.
std::pair<ExactRatio, ExactRatio> divisor_sum_decomposition(
    const FactoredInteger& f);

// c_q(n) = sum_{d | gcd(q,n)} d mu(q/d); q <= 10^7
std::int64_t ramanujan_sum(std::uint64_t q, std::uint64_t n);

// (pi^2/6) sum_{q<=Q} c_q(n)/q^2
DD ramanujan_partial_sigma(std::uint64_t n, std::uint64_t Q);

// exact rational -> double-double, correctly rounded through 160-bit MPFR
DD ratio_to_dd(const ExactRatio& r);

}  // namespace psix
