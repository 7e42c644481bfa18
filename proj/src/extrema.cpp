#include "psix/extrema.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "psix/bigfloat.hpp"
#include "psix/constants.hpp"
#include "psix/errors.hpp"
#include "psix/sieve.hpp"

namespace psix {

namespace {

constexpr double kGuardRel = 1e-15;
constexpr double kGuardRelHigh = 1e-25;  // after 256-bit re-evaluation
constexpr std::uint64_t kRobinCap = 100000000;  // n-range scan cap

DD guard_for(const DD& lhs, const DD& rhs, double rel) {
  double m = std::max({std::abs(lhs.hi), std::abs(rhs.hi), 1.0});
  return DD(rel * m);
}

Verdict classify(const DD& margin, const DD& guard) {
  if (margin > guard) return Verdict::holds;
  if (margin < -guard) return Verdict::fails;
  return Verdict::indeterminate;
}

// coefficient of the asymptote rhs for a primorial inequality
DD primorial_coeff(Inequality ineq) {
  const auto& c = working_constants();
  return ineq == Inequality::psi_theorem1 ? c.psi_coeff : c.e_gamma;
}

Real primorial_coeff_256(Inequality ineq) {
  auto ac = asymptote_coefficients(256);
  return ineq == Inequality::psi_theorem1 ? ac.psi_coeff : ac.e_gamma;
}

InequalityReport check_primorial(Inequality ineq, const PrimorialRecord& rec) {
  InequalityReport r;
  r.inequality = ineq;
  r.subject = "primorial k=" + std::to_string(rec.k);
  r.k = rec.k;
  r.p_k = rec.p_k;
  r.log_N = rec.log_N;
  r.lhs = ineq == Inequality::psi_theorem1 ? rec.psi_ratio : rec.phi_inverse_ratio;
  if (rec.log_N <= DD(1.0)) {
    r.rhs = DD(-std::numeric_limits<double>::infinity());
    r.margin = DD(std::numeric_limits<double>::infinity());
    r.verdict = Verdict::holds;
    r.degenerate = true;
    return r;
  }
  DD loglog = dd_log(rec.log_N);
  r.rhs = primorial_coeff(ineq) * loglog;
  r.margin = r.lhs - r.rhs;
  r.verdict = classify(r.margin, guard_for(r.lhs, r.rhs, kGuardRel));
  if (r.verdict == Verdict::indeterminate) {
    // 256-bit re-evaluation; lhs/log_N carry ~1e-31 relative error already
    Real lhs = Real::from_dd(r.lhs, 256);
    Real rhs = primorial_coeff_256(ineq) * log(Real::from_dd(rec.log_N, 256));
    Real margin = lhs - rhs;
    DD m = margin.to_dd();
    r.verdict = classify(m, guard_for(r.lhs, r.rhs, kGuardRelHigh));
  }
  return r;
}

}  // namespace

PrimorialRecord PrimorialStream::push(std::uint64_t p) {
  if (p <= rec_.p_k) throw ArgumentError("primorial stream: primes must ascend");
  rec_.k += 1;
  rec_.p_k = p;
  rec_.log_N += dd_log(dd_from_u64(p));
  double pd = static_cast<double>(p);
  rec_.psi_ratio *= dd_add(dd_div(1.0, pd), 1.0);
  rec_.phi_inverse_ratio *= dd_div(pd, pd - 1.0);
  return rec_;
}

void primorial_stream(std::uint64_t p_max,
                      const std::function<void(const PrimorialRecord&)>& f) {
  if (p_max < 2) throw ArgumentError("primorial_stream: p_max must be >= 2");
  if (p_max > kHardCap) throw ResourceLimitError("primorial_stream: hard cap exceeded");
  PrimorialStream st;
  for_each_prime(2, p_max + 1, [&](std::uint64_t p) { f(st.push(p)); });
}

const char* inequality_name(Inequality i) {
  switch (i) {
    case Inequality::psi_theorem1: return "psi-theorem1";
    case Inequality::nicolas: return "nicolas";
    case Inequality::robin: return "robin";
  }
  return "?";
}

Inequality inequality_from_name(const std::string& name) {
  if (name == "psi-theorem1" || name == "psi_theorem1") return Inequality::psi_theorem1;
  if (name == "nicolas") return Inequality::nicolas;
  if (name == "robin") return Inequality::robin;
  throw ArgumentError("unknown inequality: " + name);
}

const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::holds: return "holds";
    case Verdict::fails: return "fails";
    case Verdict::indeterminate: return "indeterminate";
  }
  return "?";
}

InequalityReport check_psi_theorem1(const PrimorialRecord& rec) {
  return check_primorial(Inequality::psi_theorem1, rec);
}

InequalityReport check_nicolas(const PrimorialRecord& rec) {
  return check_primorial(Inequality::nicolas, rec);
}

namespace {

InequalityReport robin_report(std::uint64_t n, const std::string& subject,
                              const DD& lhs_dd, const ExactRatio& lhs_exact,
                              std::uint64_t p_max, const DD& log_n) {
  InequalityReport r;
  r.inequality = Inequality::robin;
  r.subject = subject;
  r.k = n;
  r.p_k = p_max;
  r.log_N = log_n;
  r.lhs = lhs_dd;
  DD loglog = dd_log(log_n);
  r.rhs = working_constants().e_gamma * loglog;
  r.margin = r.rhs - r.lhs;  // holds means sigma(N)/N < e^gamma log log N
  r.verdict = classify(r.margin, guard_for(r.lhs, r.rhs, kGuardRel));
  if (r.verdict == Verdict::indeterminate) {
    Real lhs = Real::from_mpz(lhs_exact.get_num().get_mpz_t(), 256) /
               Real::from_mpz(lhs_exact.get_den().get_mpz_t(), 256);
    Real rhs = exp(Real::euler(256)) * log(log(Real::from_dd(log_n, 256)));
    DD m = (rhs - lhs).to_dd();
    r.verdict = classify(m, guard_for(r.lhs, r.rhs, kGuardRelHigh));
  }
  return r;
}

}  // namespace

InequalityReport check_robin(const FactoredInteger& f) {
  mpz_class n = f.value();
  if (n < 3) throw ArgumentError("check_robin: N must be >= 3");
  ExactRatio lhs = sigma_ratio(f);
  DD log_n = log(Real::from_mpz(n.get_mpz_t(), 256)).to_dd();
  std::uint64_t nv = mpz_fits_ulong_p(n.get_mpz_t()) ? mpz_get_ui(n.get_mpz_t()) : 0;
  std::uint64_t p_max = f.factors.empty() ? 0 : f.factors.back().first;
  return robin_report(nv, "n=" + n.get_str(), ratio_to_dd(lhs), lhs, p_max, log_n);
}

InequalityReport check_robin_sigma(std::uint64_t n, std::uint64_t sigma) {
  if (n < 3) throw ArgumentError("check_robin: N must be >= 3");
  DD lhs = dd_div(static_cast<double>(sigma), static_cast<double>(n));
  DD log_n = dd_log(dd_from_u64(n));
  ExactRatio exact(mpz_class(static_cast<unsigned long>(sigma)),
                   mpz_class(static_cast<unsigned long>(n)));
  exact.canonicalize();
  return robin_report(n, "n=" + std::to_string(n), lhs, exact, 0, log_n);
}

Corollary5Row corollary5_residuals(const PrimorialRecord& rec) {
  if (!(rec.log_N > DD(std::exp(1.0))))
    throw ArgumentError("corollary5_residuals: requires log N > e");
  const auto& c = working_constants();
  Corollary5Row row;
  row.subject = "primorial k=" + std::to_string(rec.k);
  row.log_N = rec.log_N;
  row.loglog_N = dd_log(rec.log_N);
  row.squarefree = true;
  row.res_sigma = rec.sigma_ratio() - c.e_gamma * row.loglog_N;
  row.res_kernel = rec.psi_ratio - c.psi_coeff * row.loglog_N;
  row.res_nonsq = DD(0.0) - c.nonsq_coeff * row.loglog_N;  // empty kernel
  return row;
}

Corollary5Row corollary5_residuals(const FactoredInteger& f) {
  mpz_class n = f.value();
  DD log_n = log(Real::from_mpz(n.get_mpz_t(), 256)).to_dd();
  if (!(log_n > DD(std::exp(1.0))))
    throw ArgumentError("corollary5_residuals: requires log N > e");
  const auto& c = working_constants();
  auto [kernel, nonsq] = divisor_sum_decomposition(f);
  Corollary5Row row;
  row.subject = "n=" + f.to_string();
  row.log_N = log_n;
  row.loglog_N = dd_log(log_n);
  row.squarefree = moebius(f) != 0;
  row.res_sigma = ratio_to_dd(sigma_ratio(f)) - c.e_gamma * row.loglog_N;
  row.res_kernel = ratio_to_dd(kernel) - c.psi_coeff * row.loglog_N;
  row.res_nonsq = ratio_to_dd(nonsq) - c.nonsq_coeff * row.loglog_N;
  return row;
}

std::vector<FactoredInteger> ca_stream(std::uint64_t count) {
  if (count > 10000) throw ArgumentError("ca_stream: count exceeds 10^4");
  std::vector<FactoredInteger> out;
  out.reserve(count);
  FactoredInteger n;  // running value, exponents non-increasing in p
  std::vector<DD> benefit;  // per existing prime, benefit of bumping it

  auto bump_benefit = [](std::uint64_t p, std::uint32_t v) {
    // log((p^{v+2}-1)/(p^{v+1}-1)) / log p
    mpz_class a, b;
    mpz_ui_pow_ui(a.get_mpz_t(), p, v + 2);
    mpz_ui_pow_ui(b.get_mpz_t(), p, v + 1);
    Real la = log(Real::from_mpz(mpz_class(a - 1).get_mpz_t(), 160));
    Real lb = log(Real::from_mpz(mpz_class(b - 1).get_mpz_t(), 160));
    Real lp = log(Real::from_u64(p, 160));
    return ((la - lb) / lp).to_dd();
  };

  std::uint64_t next_new = 2;
  DD new_benefit = bump_benefit(2, 0);
  for (std::uint64_t step = 0; step < count; ++step) {
    // candidate maximizing benefit; ties to the smaller prime
    std::size_t best = benefit.size();  // sentinel = new prime
    DD best_b = new_benefit;
    for (std::size_t i = 0; i < benefit.size(); ++i) {
      if (benefit[i] > best_b) {
        best_b = benefit[i];
        best = i;
      }
    }
    if (best == benefit.size()) {
      n.factors.emplace_back(next_new, 1);
      benefit.push_back(bump_benefit(next_new, 1));
      next_new += 1;
      while (!is_prime_u64(next_new)) ++next_new;
      new_benefit = bump_benefit(next_new, 0);
    } else {
      n.factors[best].second += 1;
      benefit[best] = bump_benefit(n.factors[best].first, n.factors[best].second);
    }
    for (std::size_t i = 1; i < n.factors.size(); ++i)
      if (n.factors[i].second > n.factors[i - 1].second)
        throw std::logic_error("ca_stream: exponent monotonicity violated");
    out.push_back(n);
  }
  return out;
}

void summarize(ScanSummary& s, const InequalityReport& r) {
  ++s.checked;
  if (r.degenerate) {
    ++s.degenerate;
    return;
  }
  if (r.verdict == Verdict::indeterminate) ++s.indeterminate;
  if (r.verdict == Verdict::fails) s.failures.push_back(r);
  if (r.verdict == Verdict::holds && s.first_hold_k == 0) s.first_hold_k = r.k;
  if (s.min_margin_k == 0 || dd_abs(r.margin) < dd_abs(s.min_margin)) {
    s.min_margin = r.margin;
    s.min_margin_k = r.k;
  }
}

ScanSummary scan_primorial(Inequality ineq, std::uint64_t p_max,
                           const ReportCallback& row) {
  if (ineq == Inequality::robin)
    throw ArgumentError("scan_primorial: use scan_robin for the robin inequality");
  ScanSummary s;
  primorial_stream(p_max, [&](const PrimorialRecord& rec) {
    InequalityReport r = check_primorial(ineq, rec);
    summarize(s, r);
    if (row) row(r);
  });
  return s;
}

std::vector<std::uint64_t> sigma_block(std::uint64_t lo, std::uint64_t hi) {
  if (lo < 1 || lo >= hi) throw ArgumentError("sigma_block: invalid range");
  std::size_t len = hi - lo;
  std::vector<std::uint64_t> rem(len), sigma(len, 1);
  for (std::size_t i = 0; i < len; ++i) rem[i] = lo + i;
  auto base = base_primes_for(hi);
  for (std::uint32_t p : base) {
    std::uint64_t first = ((lo + p - 1) / p) * p;
    for (std::uint64_t m = first; m < hi; m += p) {
      std::size_t i = m - lo;
      std::uint64_t pe = 1;
      while (rem[i] % p == 0) {
        rem[i] /= p;
        pe *= p;
      }
      // sigma(p^e) = (p^{e+1} - 1) / (p - 1)
      sigma[i] *= (pe * p - 1) / (p - 1);
    }
  }
  for (std::size_t i = 0; i < len; ++i)
    if (rem[i] > 1) sigma[i] *= rem[i] + 1;
  return sigma;
}

ScanSummary scan_robin(std::uint64_t n_max, const ReportCallback& row) {
  if (n_max < 3) throw ArgumentError("scan_robin: n_max must be >= 3");
  if (n_max > kRobinCap) throw ResourceLimitError("scan_robin: n_max cap 10^8 exceeded");
  ScanSummary s;
  const std::uint64_t block = 1 << 18;
  for (std::uint64_t lo = 3; lo <= n_max; lo += block) {
    std::uint64_t hi = std::min(n_max + 1, lo + block);
    auto sig = sigma_block(lo, hi);
    for (std::uint64_t n = lo; n < hi; ++n) {
      InequalityReport r = check_robin_sigma(n, sig[n - lo]);
      summarize(s, r);
      if (row) row(r);
    }
  }
  return s;
}

}  // namespace psix
