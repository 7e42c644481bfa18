#include "psix/products.hpp"

#include <algorithm>

#include "psix/constants.hpp"
#include "psix/errors.hpp"
#include "psix/sieve.hpp"

namespace psix {

const char* quantity_name(Quantity q) {
  switch (q) {
    case Quantity::harmonic_sum: return "harmonic_sum";
    case Quantity::mertens_product: return "mertens_product";
    case Quantity::psi_product: return "psi_product";
  }
  return "?";
}

Quantity quantity_from_name(const std::string& name) {
  if (name == "harmonic_sum" || name == "harmonic") return Quantity::harmonic_sum;
  if (name == "mertens_product" || name == "mertens") return Quantity::mertens_product;
  if (name == "psi_product" || name == "psi") return Quantity::psi_product;
  throw ArgumentError("unknown quantity: " + name);
}

DD quantity_term(Quantity q, std::uint64_t p) {
  DD u = dd_div(1.0, static_cast<double>(p));
  switch (q) {
    case Quantity::harmonic_sum: return u;
    case Quantity::mertens_product: return -dd_log1p_small(-u);
    case Quantity::psi_product: return dd_log1p_small(u);
  }
  return DD();
}

DD quantity_value(Quantity q, const PrecisionSum& acc) {
  return q == Quantity::harmonic_sum ? acc.sum : dd_exp(acc.sum);
}

DD quantity_asymptote(Quantity q, std::uint64_t x) {
  const auto& c = working_constants();
  DD logx = dd_log(dd_from_u64(x));
  switch (q) {
    case Quantity::harmonic_sum: return dd_log(logx) + c.b1;
    case Quantity::mertens_product: return c.e_gamma * logx;
    case Quantity::psi_product: return c.psi_coeff * logx;
  }
  return DD();
}

namespace {

// Accumulate quantity terms over primes in [lo, hi) into acc, one dd add per
// prime in ascending order. Term computation may run in parallel per segment;
// the accumulation order is per-prime, so the result is bit-identical for any
// worker count and any splitting of [lo, hi) at intermediate points.
void accumulate_range(PrecisionSum& acc, Quantity q, std::uint64_t lo,
                      std::uint64_t hi, int workers) {
  if (lo >= hi) return;
  if (workers <= 1) {
    for_each_prime(lo, hi, [&](std::uint64_t p) { acc.add(quantity_term(q, p)); });
    return;
  }
  auto chunks = process_segments<std::vector<DD>>(
      lo, hi, workers, [q](const SieveSegment& s) {
        std::vector<DD> terms;
        s.for_each_prime([&](std::uint64_t p) { terms.push_back(quantity_term(q, p)); });
        return terms;
      });
  for (const auto& terms : chunks)
    for (const DD& t : terms) acc.add(t);
}

PrecisionSum accumulate_up_to(Quantity q, std::uint64_t x, int workers) {
  if (x < 2) throw ArgumentError("quantity requires x >= 2");
  if (x > kHardCap) throw ResourceLimitError("x exceeds sieve hard cap 2^40");
  PrecisionSum acc;
  accumulate_range(acc, q, 2, x + 1, workers);
  return acc;
}

}  // namespace

DD prime_harmonic_sum(std::uint64_t x, int workers) {
  return accumulate_up_to(Quantity::harmonic_sum, x, workers).sum;
}

DD mertens_product(std::uint64_t x, int workers) {
  return dd_exp(accumulate_up_to(Quantity::mertens_product, x, workers).sum);
}

DD psi_product(std::uint64_t x, int workers) {
  return dd_exp(accumulate_up_to(Quantity::psi_product, x, workers).sum);
}

ResidualRecord ResidualScanner::advance(std::uint64_t prev_x, std::uint64_t x) {
  if (x < 3) throw ArgumentError("residual record requires x >= 3");
  if (x > kHardCap) throw ResourceLimitError("x exceeds sieve hard cap 2^40");
  if (prev_x >= x) throw ArgumentError("scan positions must be strictly ascending");
  accumulate_range(acc_, quantity_, std::max<std::uint64_t>(prev_x + 1, 2), x + 1,
                   workers_);
  ResidualRecord rec;
  rec.x = x;
  rec.quantity = quantity_;
  rec.computed = quantity_value(quantity_, acc_);
  rec.asymptote = quantity_asymptote(quantity_, x);
  rec.residual = rec.computed - rec.asymptote;
  rec.scaled_residual = dd_sqrt(dd_from_u64(x)) * rec.residual;
  return rec;
}

ResidualRecord residual_record(std::uint64_t x, Quantity q, int workers) {
  ResidualScanner sc(q, workers);
  return sc.advance(0, x);
}

std::vector<ResidualRecord> residual_scan(const std::vector<std::uint64_t>& grid,
                                          Quantity q, int workers) {
  for (std::size_t i = 1; i < grid.size(); ++i)
    if (grid[i] <= grid[i - 1]) throw ArgumentError("grid must be strictly ascending");
  std::vector<ResidualRecord> out;
  out.reserve(grid.size());
  ResidualScanner sc(q, workers);
  std::uint64_t prev = 0;
  for (std::uint64_t x : grid) {
    out.push_back(sc.advance(prev, x));
    prev = x;
  }
  return out;
}

}  // namespace psix
