#pragma once

// The three finite prime quantities (harmonic sum, Mertens product, psi
// product), their asymptotes, and residual records. Products are computed in
// log space with compensated summation and exponentiated once; all
// accumulation is double-double with deterministic ordered reduction.

#include <cstdint>
#include <string>
#include <vector>

#include "psix/dd.hpp"

namespace psix {

struct PrecisionSum {
  DD sum;
  std::uint64_t count = 0;

  void add(const DD& term) {
    sum += term;
    ++count;
  }
  // in-order merge of a later partial
  void combine(const PrecisionSum& o) {
    sum += o.sum;
    count += o.count;
  }
};

enum class Quantity { harmonic_sum, mertens_product, psi_product };

const char* quantity_name(Quantity q);
Quantity quantity_from_name(const std::string& name);

struct ResidualRecord {
  std::uint64_t x = 0;
  Quantity quantity = Quantity::harmonic_sum;
  DD computed;
  DD asymptote;
  DD residual;         // computed - asymptote
  DD scaled_residual;  // sqrt(x) * residual
};

// per-prime log-space (or harmonic) term of a quantity
DD quantity_term(Quantity q, std::uint64_t p);
// map the accumulated sum to the quantity value (exp for the products)
DD quantity_value(Quantity q, const PrecisionSum& acc);
// asymptote of the quantity at x (constants-module coefficients)
DD quantity_asymptote(Quantity q, std::uint64_t x);

DD prime_harmonic_sum(std::uint64_t x, int workers = 1);
DD mertens_product(std::uint64_t x, int workers = 1);
DD psi_product(std::uint64_t x, int workers = 1);

// Incremental scanner: advance() accumulates primes in (prev_x, x] and
// emits the record at x. State is exposed for checkpointing.
class ResidualScanner {
 public:
  ResidualScanner(Quantity q, int workers = 1) : quantity_(q), workers_(workers) {}

  ResidualRecord advance(std::uint64_t prev_x, std::uint64_t x);

  PrecisionSum& state() { return acc_; }
  const PrecisionSum& state() const { return acc_; }
  Quantity quantity() const { return quantity_; }

 private:
  Quantity quantity_;
  int workers_;
  PrecisionSum acc_;
};

ResidualRecord residual_record(std::uint64_t x, Quantity q, int workers = 1);

// one record per grid point, single logical sieve pass
std::vector<ResidualRecord> residual_scan(const std::vector<std::uint64_t>& grid,
                                          Quantity q, int workers = 1);

}  // namespace psix
