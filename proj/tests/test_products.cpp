#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "psix/bigfloat.hpp"
#include "psix/constants.hpp"
#include "psix/products.hpp"
#include "psix/sieve.hpp"

using namespace psix;

namespace {

// 256-bit oracle for any of the three quantities
Real oracle(Quantity q, std::uint64_t x) {
  Real acc(256);
  for (auto p : primes_up_to(x)) {
    Real rp = Real::from_u64(p, 256);
    Real one = Real::from_u64(1, 256);
    switch (q) {
      case Quantity::harmonic_sum:
        acc += one / rp;
        break;
      case Quantity::mertens_product:
        acc -= log(one - one / rp);
        break;
      case Quantity::psi_product:
        acc += log(one + one / rp);
        break;
    }
  }
  if (q == Quantity::harmonic_sum) return acc;
  return exp(acc);
}

double rel_err(const DD& got, const Real& want) {
  Real d = abs(Real::from_dd(got, 256) - want);
  return (d / abs(want)).to_double();
}

}  // namespace

TEST_CASE("quantity names round-trip") {
  for (auto q : {Quantity::harmonic_sum, Quantity::mertens_product,
                 Quantity::psi_product}) {
    CHECK(quantity_from_name(quantity_name(q)) == q);
  }
  CHECK_THROWS_AS(quantity_from_name("bogus"), ArgumentError);
}

TEST_CASE("hand values at x=2 and x=10") {
  CHECK(std::abs(prime_harmonic_sum(2).to_double() - 0.5) < 1e-30);
  CHECK(std::abs(mertens_product(2).to_double() - 2.0) < 1e-30);
  CHECK(std::abs(psi_product(2).to_double() - 1.5) < 1e-30);
  // p <= 10: {2,3,5,7}
  CHECK(std::abs(prime_harmonic_sum(10).to_double() - (0.5 + 1.0 / 3 + 0.2 + 1.0 / 7)) <
        1e-15);
  CHECK(std::abs(mertens_product(10).to_double() - 4.375) < 1e-28);
  CHECK(std::abs(psi_product(10).to_double() - 96.0 / 35.0) < 1e-28);
}

TEST_CASE("agreement with 256-bit recomputation") {
  for (std::uint64_t x : {100ull, 1000ull, 100000ull}) {
    CHECK(rel_err(prime_harmonic_sum(x), oracle(Quantity::harmonic_sum, x)) < 1e-25);
    CHECK(rel_err(mertens_product(x), oracle(Quantity::mertens_product, x)) < 1e-25);
    CHECK(rel_err(psi_product(x), oracle(Quantity::psi_product, x)) < 1e-25);
  }
}

TEST_CASE("product identity: psi = mertens x (1 - 1/p^2) product") {
  for (std::uint64_t x : {10ull, 1000ull, 100000ull}) {
    Real sq(256);
    Real one = Real::from_u64(1, 256);
    for (auto p : primes_up_to(x)) sq += log(one - one / Real::from_u64(p * p, 256));
    Real want = Real::from_dd(mertens_product(x), 256) * exp(sq);
    CHECK(rel_err(psi_product(x), want) < 1e-25);
  }
}

TEST_CASE("residual record at x=10 for the mertens product") {
  auto r = residual_record(10, Quantity::mertens_product);
  CHECK(r.x == 10);
  CHECK(std::abs(r.computed.to_double() - 4.375) < 1e-28);
  // frozen: 4.375 - e^gamma log 10
  CHECK(std::abs(r.residual.to_double() - 0.27392920079291016) < 1e-14);
  CHECK(std::abs((r.scaled_residual - dd_sqrt(dd_from_u64(10)) * r.residual).to_double()) ==
        0.0);
  CHECK(std::abs((r.computed - r.asymptote - r.residual).to_double()) == 0.0);
}

TEST_CASE("asymptotes use the constants module") {
  const auto& wc = working_constants();
  std::uint64_t x = 1000;
  DD lx = dd_log(dd_from_u64(x));
  CHECK(quantity_asymptote(Quantity::harmonic_sum, x) ==
        dd_log(lx) + wc.b1);
  CHECK(quantity_asymptote(Quantity::mertens_product, x) == wc.e_gamma * lx);
  CHECK(quantity_asymptote(Quantity::psi_product, x) == wc.psi_coeff * lx);
}

TEST_CASE("scan equals individual records bit-for-bit") {
  std::vector<std::uint64_t> grid{10, 100, 1000, 10000};
  auto rows = residual_scan(grid, Quantity::psi_product);
  REQUIRE(rows.size() == grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    auto one = residual_record(grid[i], Quantity::psi_product);
    CHECK(rows[i].computed == one.computed);
    CHECK(rows[i].residual == one.residual);
    CHECK(rows[i].scaled_residual == one.scaled_residual);
  }
  CHECK_THROWS_AS(residual_scan({100, 100}, Quantity::psi_product), ArgumentError);
  CHECK_THROWS_AS(residual_scan({100, 10}, Quantity::psi_product), ArgumentError);
}

TEST_CASE("results are bit-identical for any worker count") {
  set_segment_size(1 << 12);
  for (auto q : {Quantity::harmonic_sum, Quantity::mertens_product,
                 Quantity::psi_product}) {
    auto r1 = residual_record(300000, q, 1);
    auto r4 = residual_record(300000, q, 4);
    auto r16 = residual_record(300000, q, 16);
    CHECK(r1.computed == r4.computed);
    CHECK(r1.computed == r16.computed);
    CHECK(r1.residual == r4.residual);
  }
  set_segment_size(0);
}

TEST_CASE("scanner state advances incrementally") {
  ResidualScanner sc(Quantity::harmonic_sum);
  auto a = sc.advance(0, 100);
  auto b = sc.advance(100, 1000);
  CHECK(a.computed == prime_harmonic_sum(100));
  CHECK(b.computed == prime_harmonic_sum(1000));
  CHECK(sc.state().count == 168);  // pi(1000)
}

TEST_CASE("quantities are monotone in x") {
  DD prev_h, prev_m, prev_p;
  for (std::uint64_t x : {10ull, 100ull, 1000ull, 10000ull}) {
    DD h = prime_harmonic_sum(x), m = mertens_product(x), p = psi_product(x);
    CHECK(h > prev_h);
    CHECK(m > prev_m);
    CHECK(p > prev_p);
    prev_h = h;
    prev_m = m;
    prev_p = p;
  }
}
