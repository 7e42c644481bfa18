#pragma once

// Mathematical constants of the asymptotic laws, each computed on demand by a
// convergent procedure at the requested precision. Nothing beyond short seed
// digits is hard-coded (those live in the self-tests).

#include <cstdint>
#include <string>
#include <vector>

#include "psix/bigfloat.hpp"
#include "psix/dd.hpp"

namespace psix {

inline constexpr int kMinPrecisionBits = 24;
inline constexpr int kMaxPrecisionBits = 4096;

struct NamedConstant {
  std::string name;
  Real value;
  int precision_bits;
  std::string method;
};

// Euler-Mascheroni constant gamma.
Real euler_gamma(int precision_bits);

// Mertens constant B1 = gamma + sum_{p <= cutoff} (log(1 - 1/p) + 1/p),
// with the tail over p > cutoff evaluated through the prime zeta function.
// The certified truncation budget reported for the raw prime sum is
// 2/cutoff (the actual error after tail evaluation is far smaller).
Real mertens_constant(int precision_bits, std::uint64_t prime_cutoff);
double mertens_tail_bound(std::uint64_t prime_cutoff);

// 6/pi^2
Real basel_inverse(int precision_bits = 106);

struct AsymptoteCoefficients {
  Real e_gamma;      // e^gamma
  Real psi_coeff;    // 6 e^gamma / pi^2
  Real nonsq_coeff;  // (1 - 6/pi^2) e^gamma
};
AsymptoteCoefficients asymptote_coefficients(int precision_bits = 106);

// prime zeta P(s) = sum over primes p of p^{-s}, via Moebius/zeta series
Real prime_zeta(unsigned s, int precision_bits);

std::vector<NamedConstant> named_constants(int precision_bits,
                                           std::uint64_t mertens_cutoff);

// Constants rounded to working (double-double) precision; computed once at
// 160 bits and cached.
struct WorkingConstants {
  DD gamma;
  DD e_gamma;
  DD b1;           // Mertens constant
  DD basel_inv;    // 6/pi^2
  DD psi_coeff;    // 6 e^gamma / pi^2
  DD nonsq_coeff;  // (1 - 6/pi^2) e^gamma
  DD pi_sq_over_6;
};
const WorkingConstants& working_constants();

}  // namespace psix
