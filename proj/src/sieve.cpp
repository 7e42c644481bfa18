#include "psix/sieve.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <string>

namespace psix {

namespace {

std::uint64_t g_segment_override = 0;

std::uint64_t env_segment_size() {
  if (const char* s = std::getenv("PSI_EXTREMA_SEGMENT_SIZE")) {
    char* end = nullptr;
    unsigned long long v = std::strtoull(s, &end, 10);
    if (end && *end == '\0' && v >= 64) return v;
  }
  return kDefaultSegmentSize;
}

}  // namespace

std::uint64_t segment_size() {
  if (g_segment_override) return g_segment_override;
  static const std::uint64_t env = env_segment_size();
  return env;
}

void set_segment_size(std::uint64_t size) { g_segment_override = size; }

std::vector<std::uint32_t> small_primes(std::uint32_t limit) {
  std::vector<std::uint32_t> out;
  if (limit < 2) return out;
  std::vector<bool> composite(limit + 1, false);
  for (std::uint32_t i = 2; static_cast<std::uint64_t>(i) * i <= limit; ++i)
    if (!composite[i])
      for (std::uint64_t j = static_cast<std::uint64_t>(i) * i; j <= limit; j += i)
        composite[j] = true;
  for (std::uint32_t i = 2; i <= limit; ++i)
    if (!composite[i]) out.push_back(i);
  return out;
}

std::vector<std::uint32_t> base_primes_for(std::uint64_t hi) {
  std::uint64_t root = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(hi - 1))) + 2;
  return small_primes(static_cast<std::uint32_t>(root));
}

std::vector<std::pair<std::uint64_t, std::uint64_t>> segment_bounds(
    std::uint64_t lo, std::uint64_t hi, std::uint64_t seg) {
  std::vector<std::pair<std::uint64_t, std::uint64_t>> out;
  std::uint64_t a = lo;
  while (a < hi) {
    std::uint64_t b = std::min(hi, (a / seg + 1) * seg);
    out.emplace_back(a, b);
    a = b;
  }
  return out;
}

SieveSegment sieve_segment(std::uint64_t lo, std::uint64_t hi,
                           const std::vector<std::uint32_t>& base_primes) {
  SieveSegment seg;
  seg.lo = lo;
  seg.hi = hi;
  std::uint64_t start = std::max<std::uint64_t>(lo, 3);
  seg.odd_base = start | 1;
  std::uint64_t n_odds = seg.odd_base < hi ? (hi - seg.odd_base + 1) / 2 : 0;
  seg.bits.assign((n_odds + 63) / 64, 0);
  for (std::uint32_t p : base_primes) {
    if (p == 2) continue;
    std::uint64_t p2 = static_cast<std::uint64_t>(p) * p;
    if (p2 >= hi) break;
    std::uint64_t m = std::max(p2, ((seg.odd_base + p - 1) / p) * p);
    if (m % 2 == 0) m += p;
    for (; m < hi; m += 2ull * p) {
      std::uint64_t i = (m - seg.odd_base) / 2;
      seg.bits[i >> 6] |= 1ull << (i & 63);
    }
  }
  return seg;
}

std::vector<std::uint64_t> primes_up_to(std::uint64_t x) {
  if (x > kHardCap) throw ResourceLimitError("primes_up_to: hard cap 2^40 exceeded");
  std::vector<std::uint64_t> out;
  if (x < 2) return out;
  for_each_prime(2, x + 1, [&](std::uint64_t p) { out.push_back(p); });
  return out;
}

PrimeStats prime_stats(std::uint64_t x, int workers) {
  if (x > kHardCap) throw ResourceLimitError("prime_stats: hard cap 2^40 exceeded");
  PrimeStats st;
  st.x = x;
  if (x < 2) return st;
  struct Partial {
    std::uint64_t count = 0;
    DD theta;
  };
  auto partials = process_segments<Partial>(2, x + 1, workers, [](const SieveSegment& s) {
    Partial p;
    s.for_each_prime([&](std::uint64_t q) {
      ++p.count;
      p.theta += dd_log(dd_from_u64(q));
    });
    return p;
  });
  for (const auto& p : partials) {
    st.pi += p.count;
    st.theta += p.theta;
  }
  return st;
}

std::uint64_t nth_prime(std::uint64_t k) {
  if (k == 0) throw ArgumentError("nth_prime: k must be >= 1");
  // p_k < k (log k + log log k) for k >= 6
  std::uint64_t bound;
  if (k < 6) {
    bound = 12;
  } else {
    double dk = static_cast<double>(k);
    bound = static_cast<std::uint64_t>(dk * (std::log(dk) + std::log(std::log(dk)))) + 8;
  }
  if (bound > kHardCap) throw ResourceLimitError("nth_prime: hard cap 2^40 exceeded");
  std::uint64_t seen = 0, result = 0;
  auto bounds = segment_bounds(2, bound + 1, segment_size());
  auto base = base_primes_for(bound + 1);
  for (auto [a, b] : bounds) {
    auto seg = sieve_segment(a, b, base);
    seg.for_each_prime([&](std::uint64_t p) {
      if (++seen == k) result = p;
    });
    if (result) return result;
  }
  throw ResourceLimitError("nth_prime: bound estimate fell short");
}

}  // namespace psix
