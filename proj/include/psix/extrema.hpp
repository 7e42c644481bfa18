#pragma once

// Primorial streaming and the inequality checks: the psi lower bound on
// primorials, the Nicolas inequality, and the Robin inequality, plus the
// divisor-sum residual rows and a greedy colossally-abundant-style chain.

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "psix/arithfun.hpp"
#include "psix/dd.hpp"

namespace psix {

struct PrimorialRecord {
  std::uint64_t k = 0;    // index, p_1 = 2
  std::uint64_t p_k = 0;  // k-th prime
  DD log_N;               // theta(p_k); N itself is never formed
  DD psi_ratio;           // prod_{p<=p_k} (1 + 1/p)
  DD phi_inverse_ratio;   // prod_{p<=p_k} p/(p-1)
  DD sigma_ratio() const { return psi_ratio; }  // primorials are squarefree
};

// Incremental primorial state; push the next prime to get the next record.
// State is exposed for bit-exact checkpointing.
class PrimorialStream {
 public:
  PrimorialRecord push(std::uint64_t p);
  const PrimorialRecord& current() const { return rec_; }
  void restore(const PrimorialRecord& rec) { rec_ = rec; }

 private:
  PrimorialRecord rec_{0, 0, DD(0.0), DD(1.0), DD(1.0)};
};

// one record per prime <= p_max, ascending
void primorial_stream(std::uint64_t p_max,
                      const std::function<void(const PrimorialRecord&)>& f);

enum class Inequality { psi_theorem1, nicolas, robin };
enum class Verdict { holds, fails, indeterminate };

const char* inequality_name(Inequality i);
Inequality inequality_from_name(const std::string& name);
const char* verdict_name(Verdict v);

struct InequalityReport {
  Inequality inequality = Inequality::psi_theorem1;
  std::string subject;     // "primorial k=3" or "n=5040"
  std::uint64_t k = 0;     // primorial index, or n for integer subjects
  std::uint64_t p_k = 0;   // largest prime of the subject
  DD log_N;
  DD lhs;
  DD rhs;     // -inf sentinel when degenerate (log log N undefined)
  DD margin;  // lhs - rhs; +inf when degenerate
  Verdict verdict = Verdict::indeterminate;
  bool degenerate = false;
};

// Verdict guard band: 10^{-15} x max(|lhs|, |rhs|, 1). A margin inside the
// band triggers an automatic 256-bit re-evaluation before the verdict is
// declared indeterminate.
InequalityReport check_psi_theorem1(const PrimorialRecord& rec);
InequalityReport check_nicolas(const PrimorialRecord& rec);
InequalityReport check_robin(const FactoredInteger& f);  // N >= 3
// Robin check from a precomputed exact divisor sum (used by the n-range scan)
InequalityReport check_robin_sigma(std::uint64_t n, std::uint64_t sigma);

struct Corollary5Row {
  std::string subject;
  DD log_N;
  DD loglog_N;
  DD res_sigma;    // sigma(N)/N - e^gamma log log N
  DD res_kernel;   // squarefree kernel - (6e^gamma/pi^2) log log N
  DD res_nonsq;    // nonsquarefree part - (1-6/pi^2)e^gamma log log N
  bool squarefree = false;
};

Corollary5Row corollary5_residuals(const PrimorialRecord& rec);  // log_N > e
Corollary5Row corollary5_residuals(const FactoredInteger& f);

// Greedy superabundant-style chain: repeatedly multiply by the prime
// maximizing log(sigma(N p)/sigma(N)) / log p. count <= 10^4.
std::vector<FactoredInteger> ca_stream(std::uint64_t count);

struct ScanSummary {
  std::uint64_t checked = 0;
  std::uint64_t degenerate = 0;
  std::vector<InequalityReport> failures;
  std::uint64_t first_hold_k = 0;  // smallest non-degenerate subject that holds
  DD min_margin;                   // over non-degenerate holds/fails
  std::uint64_t min_margin_k = 0;
  std::uint64_t indeterminate = 0;
};

using ReportCallback = std::function<void(const InequalityReport&)>;

void summarize(ScanSummary& s, const InequalityReport& r);

// exhaustive primorial scan (psi_theorem1 or nicolas) over p_k <= p_max
ScanSummary scan_primorial(Inequality ineq, std::uint64_t p_max,
                           const ReportCallback& row = nullptr);

// exhaustive Robin scan over 3 <= n <= n_max with exact divisor sums
ScanSummary scan_robin(std::uint64_t n_max, const ReportCallback& row = nullptr);

// exact sigma(n) for every n in [lo, hi) by block sieving (lo >= 1)
std::vector<std::uint64_t> sigma_block(std::uint64_t lo, std::uint64_t hi);

}  // namespace psix
