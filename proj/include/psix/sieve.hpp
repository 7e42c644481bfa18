#pragma once

// Segmented sieve of Eratosthenes. Bitmaps store odd numbers only; 2 is
// special-cased. Segmentation boundaries depend only on (lo, hi, segment
// size), never on worker count, and parallel reductions are performed in
// ascending segment order, so results are bit-identical for any worker count.

#include <atomic>
#include <cstdint>
#include <thread>
#include <utility>
#include <vector>

#include "psix/dd.hpp"
#include "psix/errors.hpp"

namespace psix {

inline constexpr std::uint64_t kHardCap = 1ull << 40;
inline constexpr std::uint64_t kDefaultSegmentSize = 1ull << 22;  // numbers

// Current segment size: PSI_EXTREMA_SEGMENT_SIZE env var overrides the
// default; set_segment_size overrides both (CLI config).
std::uint64_t segment_size();
void set_segment_size(std::uint64_t size);  // 0 restores the default chain

struct SieveSegment {
  std::uint64_t lo = 0;  // inclusive
  std::uint64_t hi = 0;  // exclusive
  std::uint64_t odd_base = 0;       // smallest odd >= max(lo, 3)
  std::vector<std::uint64_t> bits;  // bit i: odd_base + 2i is composite

  bool is_prime_odd(std::uint64_t n) const {
    std::uint64_t i = (n - odd_base) / 2;
    return !(bits[i >> 6] >> (i & 63) & 1);
  }

  template <class F>
  void for_each_prime(F&& f) const {
    if (lo <= 2 && 2 < hi) f(std::uint64_t{2});
    for (std::uint64_t n = odd_base; n < hi; n += 2)
      if (is_prime_odd(n)) f(n);
  }

  std::uint64_t count_primes() const {
    std::uint64_t c = 0;
    for_each_prime([&](std::uint64_t) { ++c; });
    return c;
  }
};

// simple sieve, used for base primes and as a test oracle
std::vector<std::uint32_t> small_primes(std::uint32_t limit);

// sieve one segment [lo, hi); base_primes must cover sqrt(hi - 1)
SieveSegment sieve_segment(std::uint64_t lo, std::uint64_t hi,
                           const std::vector<std::uint32_t>& base_primes);

// tile [lo, hi) with boundaries at absolute multiples of seg
std::vector<std::pair<std::uint64_t, std::uint64_t>> segment_bounds(
    std::uint64_t lo, std::uint64_t hi, std::uint64_t seg);

std::vector<std::uint32_t> base_primes_for(std::uint64_t hi);

// Apply per_segment to each tile of [lo, hi), possibly concurrently, and
// return the results in ascending segment order.
template <class T, class F>
std::vector<T> process_segments(std::uint64_t lo, std::uint64_t hi,
                                int workers, F&& per_segment) {
  if (!(2 <= lo && lo < hi)) throw ArgumentError("invalid sieve range");
  if (hi - 1 > kHardCap) throw ResourceLimitError("sieve hard cap exceeded");
  auto bounds = segment_bounds(lo, hi, segment_size());
  auto base = base_primes_for(hi);
  std::vector<T> results(bounds.size());
  if (workers <= 1 || bounds.size() <= 1) {
    for (std::size_t i = 0; i < bounds.size(); ++i)
      results[i] = per_segment(sieve_segment(bounds[i].first, bounds[i].second, base));
    return results;
  }
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (;;) {
      std::size_t i = next.fetch_add(1);
      if (i >= bounds.size()) return;
      results[i] = per_segment(sieve_segment(bounds[i].first, bounds[i].second, base));
    }
  };
  std::vector<std::thread> pool;
  int n = std::min<std::size_t>(workers, bounds.size());
  pool.reserve(n);
  for (int i = 0; i < n; ++i) pool.emplace_back(work);
  for (auto& t : pool) t.join();
  return results;
}

// Sequential in-order prime stream over [lo, hi); f(uint64_t prime).
template <class F>
void for_each_prime(std::uint64_t lo, std::uint64_t hi, F&& f) {
  if (!(2 <= lo && lo < hi)) throw ArgumentError("invalid sieve range");
  if (hi - 1 > kHardCap) throw ResourceLimitError("sieve hard cap exceeded");
  auto bounds = segment_bounds(lo, hi, segment_size());
  auto base = base_primes_for(hi);
  for (auto [a, b] : bounds) sieve_segment(a, b, base).for_each_prime(f);
}

std::vector<std::uint64_t> primes_up_to(std::uint64_t x);

struct PrimeStats {
  std::uint64_t x = 0;
  std::uint64_t pi = 0;
  DD theta;  // sum of log p over p <= x, natural-log units
};

PrimeStats prime_stats(std::uint64_t x, int workers = 1);

std::uint64_t nth_prime(std::uint64_t k);

}  // namespace psix
