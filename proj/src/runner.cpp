#include "psix/runner.hpp"

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <string>

#include "psix/arithfun.hpp"
#include "psix/bigfloat.hpp"
#include "psix/constants.hpp"
#include "psix/errors.hpp"
#include "psix/extrema.hpp"
#include "psix/products.hpp"
#include "psix/runner.hpp"
#include "psix/sieve.hpp"

namespace psix {

namespace {

constexpr std::uint64_t kPrimesPerUnit = 8192;
constexpr std::uint64_t kRobinBlock = 1 << 18;

struct StopRun {};  // unwinds when the interrupt test hook fires

std::string fingerprint_of(const RunConfig& cfg) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016" PRIx64, fnv1a64(cfg.canonical_task()));
  return buf;
}

const std::vector<std::string> kReportColumns = {
    "k", "p_k", "log_N", "lhs", "rhs", "margin", "verdict", "precision_bits"};
const std::vector<std::string> kResidualColumns = {
    "x", "quantity", "computed", "asymptote", "residual", "scaled_residual"};

std::vector<Cell> report_cells(const InequalityReport& r, int precision_bits) {
  return {num_cell(r.k),      num_cell(r.p_k),    num_cell(r.log_N),
          num_cell(r.lhs),    num_cell(r.rhs),    num_cell(r.margin),
          str_cell(verdict_name(r.verdict)),      num_cell(static_cast<std::uint64_t>(precision_bits))};
}

std::vector<Cell> residual_cells(const ResidualRecord& r) {
  return {num_cell(r.x),        str_cell(quantity_name(r.quantity)),
          num_cell(r.computed), num_cell(r.asymptote),
          num_cell(r.residual), num_cell(r.scaled_residual)};
}

std::vector<std::string> header_comments(const RunConfig& cfg) {
  return {"psi-extrema " + cfg.echo()};
}

void print_summary(const ScanSummary& s) {
  std::string fail_ks;
  for (const auto& f : s.failures) {
    if (!fail_ks.empty()) fail_ks += ' ';
    fail_ks += std::to_string(f.k);
  }
  std::fprintf(stderr,
               "# summary checked=%" PRIu64 " degenerate=%" PRIu64
               " indeterminate=%" PRIu64 " failures=%zu first_hold_k=%" PRIu64
               " min_margin=%s min_margin_k=%" PRIu64 "%s%s\n",
               s.checked, s.degenerate, s.indeterminate, s.failures.size(),
               s.first_hold_k, dd_to_string(s.min_margin).c_str(), s.min_margin_k,
               fail_ks.empty() ? "" : " failure_subjects=", fail_ks.c_str());
}

// shared checkpoint bookkeeping for resumable commands
class Units {
 public:
  Units(const RunConfig& cfg) : cfg_(cfg), fingerprint_(fingerprint_of(cfg)) {
    if (!cfg.checkpoint_path.empty() && cfg.out_path.empty())
      throw ArgumentError("--checkpoint requires --out (cannot truncate stdout)");
  }

  const std::string& fingerprint() const { return fingerprint_; }

  // nullopt: fresh start
  std::optional<Checkpoint> load_resume() {
    if (!cfg_.resume) return std::nullopt;
    if (cfg_.checkpoint_path.empty())
      throw ArgumentError("--resume requires --checkpoint");
    if (!std::filesystem::exists(cfg_.checkpoint_path)) {
      std::fprintf(stderr, "# no checkpoint at %s, starting fresh\n",
                   cfg_.checkpoint_path.c_str());
      return std::nullopt;
    }
    return checkpoint_load(cfg_.checkpoint_path, fingerprint_);
  }

  // call after each completed unit; throws StopRun when the hook fires
  void complete(RowWriter& writer, Checkpoint cp) {
    ++units_done_;
    if (!cfg_.checkpoint_path.empty()) {
      writer.flush();
      cp.fingerprint = fingerprint_;
      cp.rows = writer.rows_written();
      cp.out_bytes = writer.bytes_written();
      checkpoint_save(cfg_.checkpoint_path, cp);
    }
    if (cfg_.stop_after_units && units_done_ >= cfg_.stop_after_units) throw StopRun{};
  }

 private:
  const RunConfig& cfg_;
  std::string fingerprint_;
  std::uint64_t units_done_ = 0;
};

int run_constants(const RunConfig& cfg) {
  RowWriter w(cfg.out_path, cfg.format, header_comments(cfg),
              {"name", "value", "precision_bits", "method"});
  for (const auto& c : named_constants(cfg.precision_bits, 1000000)) {
    w.write_row({str_cell(c.name), Cell{c.value.to_string(25), false},
                 num_cell(static_cast<std::uint64_t>(c.precision_bits)),
                 str_cell(c.method)});
  }
  return kExitOk;
}

int run_residuals(const RunConfig& cfg) {
  if (!cfg.quantity) throw ArgumentError("residuals: --quantity required");
  auto grid = parse_grid(cfg.grid_spec);
  Units units(cfg);
  auto resume = units.load_resume();

  ResidualScanner scanner(*cfg.quantity, cfg.workers);
  std::size_t start = 0;
  std::uint64_t prev_x = 0;
  long long resume_bytes = -1;
  if (resume) {
    scanner.state().sum = dd_from_hex(resume->state_at("acc"));
    scanner.state().count = resume->counter_at("acc_count");
    prev_x = resume->counter_at("prev_x");
    start = resume->unit;  // units completed == rows emitted
    resume_bytes = static_cast<long long>(resume->out_bytes);
  }
  RowWriter w(cfg.out_path, cfg.format, header_comments(cfg), kResidualColumns,
              resume_bytes);
  try {
    for (std::size_t i = start; i < grid.size(); ++i) {
      ResidualRecord rec = scanner.advance(prev_x, grid[i]);
      prev_x = grid[i];
      w.write_row(residual_cells(rec));
      Checkpoint cp;
      cp.unit = i + 1;
      cp.state = {{"acc", dd_to_hex(scanner.state().sum)}};
      cp.counters = {{"acc_count", scanner.state().count}, {"prev_x", prev_x}};
      units.complete(w, cp);
    }
  } catch (const StopRun&) {
    return kExitInterrupted;
  }
  return kExitOk;
}

Checkpoint primorial_checkpoint(const PrimorialRecord& rec, const ScanSummary& s,
                                std::uint64_t unit) {
  Checkpoint cp;
  cp.unit = unit;
  std::string fail_ks;
  for (const auto& f : s.failures) {
    if (!fail_ks.empty()) fail_ks += ',';
    fail_ks += std::to_string(f.k);
  }
  cp.state = {{"log_N", dd_to_hex(rec.log_N)},
              {"psi", dd_to_hex(rec.psi_ratio)},
              {"phi_inv", dd_to_hex(rec.phi_inverse_ratio)},
              {"min_margin", dd_to_hex(s.min_margin)},
              {"failures", fail_ks}};
  cp.counters = {{"k", rec.k},
                 {"p_k", rec.p_k},
                 {"checked", s.checked},
                 {"degenerate", s.degenerate},
                 {"indeterminate", s.indeterminate},
                 {"first_hold_k", s.first_hold_k},
                 {"min_margin_k", s.min_margin_k}};
  return cp;
}

void restore_summary(const Checkpoint& cp, ScanSummary& s) {
  s.checked = cp.counter_at("checked");
  s.degenerate = cp.counter_at("degenerate");
  s.indeterminate = cp.counter_at("indeterminate");
  s.first_hold_k = cp.counter_at("first_hold_k");
  s.min_margin = dd_from_hex(cp.state_at("min_margin"));
  s.min_margin_k = cp.counter_at("min_margin_k");
  std::string ks = cp.state_at("failures");
  std::size_t pos = 0;
  while (pos < ks.size()) {
    auto next = ks.find(',', pos);
    InequalityReport r;
    r.k = std::stoull(ks.substr(pos, next - pos));
    r.verdict = Verdict::fails;
    s.failures.push_back(r);
    if (next == std::string::npos) break;
    pos = next + 1;
  }
}

int run_scan_primorial(const RunConfig& cfg) {
  Units units(cfg);
  auto resume = units.load_resume();
  PrimorialStream stream;
  ScanSummary summary;
  std::uint64_t start = 2;
  std::uint64_t unit = 0;
  long long resume_bytes = -1;
  if (resume) {
    PrimorialRecord rec;
    rec.k = resume->counter_at("k");
    rec.p_k = resume->counter_at("p_k");
    rec.log_N = dd_from_hex(resume->state_at("log_N"));
    rec.psi_ratio = dd_from_hex(resume->state_at("psi"));
    rec.phi_inverse_ratio = dd_from_hex(resume->state_at("phi_inv"));
    stream.restore(rec);
    restore_summary(*resume, summary);
    start = rec.p_k + 1;
    unit = resume->unit;
    resume_bytes = static_cast<long long>(resume->out_bytes);
  }
  RowWriter w(cfg.out_path, cfg.format, header_comments(cfg), kReportColumns,
              resume_bytes);
  bool interrupted = false;
  std::uint64_t in_unit = 0;
  try {
    if (start <= cfg.pmax) {
      for_each_prime(start, cfg.pmax + 1, [&](std::uint64_t p) {
        const PrimorialRecord& rec = stream.push(p);
        InequalityReport r = *cfg.inequality == Inequality::psi_theorem1
                                 ? check_psi_theorem1(rec)
                                 : check_nicolas(rec);
        summarize(summary, r);
        w.write_row(report_cells(r, cfg.precision_bits));
        if (++in_unit == kPrimesPerUnit) {
          in_unit = 0;
          units.complete(w, primorial_checkpoint(rec, summary, ++unit));
        }
      });
    }
  } catch (const StopRun&) {
    interrupted = true;
  }
  if (!interrupted) print_summary(summary);
  if (interrupted) return kExitInterrupted;
  return summary.failures.empty() ? kExitOk : kExitCounterexample;
}

int run_scan_robin_range(const RunConfig& cfg) {
  Units units(cfg);
  auto resume = units.load_resume();
  ScanSummary summary;
  std::uint64_t next_lo = 3;
  std::uint64_t unit = 0;
  long long resume_bytes = -1;
  if (resume) {
    restore_summary(*resume, summary);
    next_lo = resume->counter_at("next_lo");
    unit = resume->unit;
    resume_bytes = static_cast<long long>(resume->out_bytes);
  }
  RowWriter w(cfg.out_path, cfg.format, header_comments(cfg), kReportColumns,
              resume_bytes);
  bool interrupted = false;
  try {
    for (std::uint64_t lo = next_lo; lo <= cfg.nmax; lo += kRobinBlock) {
      std::uint64_t hi = std::min(cfg.nmax + 1, lo + kRobinBlock);
      auto sig = sigma_block(lo, hi);
      for (std::uint64_t n = lo; n < hi; ++n) {
        InequalityReport r = check_robin_sigma(n, sig[n - lo]);
        summarize(summary, r);
        w.write_row(report_cells(r, cfg.precision_bits));
      }
      Checkpoint cp;
      cp.unit = ++unit;
      std::string fail_ks;
      for (const auto& f : summary.failures) {
        if (!fail_ks.empty()) fail_ks += ',';
        fail_ks += std::to_string(f.k);
      }
      cp.state = {{"min_margin", dd_to_hex(summary.min_margin)}, {"failures", fail_ks}};
      cp.counters = {{"checked", summary.checked},
                     {"degenerate", summary.degenerate},
                     {"indeterminate", summary.indeterminate},
                     {"first_hold_k", summary.first_hold_k},
                     {"min_margin_k", summary.min_margin_k},
                     {"next_lo", hi}};
      units.complete(w, cp);
    }
  } catch (const StopRun&) {
    interrupted = true;
  }
  if (!interrupted) print_summary(summary);
  if (interrupted) return kExitInterrupted;
  return summary.failures.empty() ? kExitOk : kExitCounterexample;
}

int run_scan_robin_ca(const RunConfig& cfg) {
  // robin verdicts over the first --count members of the CA chain
  RowWriter w(cfg.out_path, cfg.format, header_comments(cfg), kReportColumns);
  ScanSummary summary;
  for (const auto& f : ca_stream(cfg.ca_count)) {
    if (f.value() < 3) continue;  // log log N undefined at N = 2
    InequalityReport r = check_robin(f);
    summarize(summary, r);
    w.write_row(report_cells(r, cfg.precision_bits));
  }
  print_summary(summary);
  return summary.failures.empty() ? kExitOk : kExitCounterexample;
}

int run_scan(const RunConfig& cfg) {
  if (!cfg.inequality) throw ArgumentError("scan: --inequality required");
  if (*cfg.inequality == Inequality::robin) {
    if (cfg.ca_count) return run_scan_robin_ca(cfg);
    if (!cfg.nmax) throw ArgumentError("scan --inequality robin requires --nmax or --count");
    return run_scan_robin_range(cfg);
  }
  if (!cfg.pmax) throw ArgumentError("scan: --pmax required");
  return run_scan_primorial(cfg);
}

int run_check(const RunConfig& cfg) {
  if (!cfg.inequality) throw ArgumentError("check: --inequality required");
  InequalityReport r;
  if (*cfg.inequality == Inequality::robin) {
    if (!cfg.n) throw ArgumentError("check --inequality robin requires --n");
    r = check_robin(factorize(cfg.n));
  } else {
    if (!cfg.primorial_k) throw ArgumentError("check: --primorial-k required");
    std::uint64_t p_k = nth_prime(cfg.primorial_k);
    PrimorialStream stream;
    PrimorialRecord rec;
    for_each_prime(2, p_k + 1, [&](std::uint64_t p) { rec = stream.push(p); });
    r = *cfg.inequality == Inequality::psi_theorem1 ? check_psi_theorem1(rec)
                                                    : check_nicolas(rec);
  }
  RowWriter w(cfg.out_path, cfg.format, header_comments(cfg), kReportColumns);
  w.write_row(report_cells(r, cfg.precision_bits));
  return r.verdict == Verdict::fails ? kExitCounterexample : kExitOk;
}

int run_ramanujan(const RunConfig& cfg) {
  if (!cfg.n || !cfg.ramanujan_q)
    throw ArgumentError("ramanujan: --n and --Q required");
  DD exact = ratio_to_dd(sigma_ratio(factorize(cfg.n)));
  RowWriter w(cfg.out_path, cfg.format, header_comments(cfg),
              {"n", "q", "c_q", "partial_sigma", "exact_sigma", "abs_error"});
  DD sum;
  const DD pi2_6 = working_constants().pi_sq_over_6;
  for (std::uint64_t q = 1; q <= cfg.ramanujan_q; ++q) {
    std::int64_t c = ramanujan_sum(q, cfg.n);
    if (c != 0)
      sum += dd_div(static_cast<double>(c),
                    static_cast<double>(q) * static_cast<double>(q));
    DD partial = pi2_6 * sum;
    DD err = dd_abs(partial - exact);
    w.write_row({num_cell(cfg.n), num_cell(q),
                 Cell{std::to_string(c), false}, num_cell(partial),
                 num_cell(exact), num_cell(err)});
  }
  return kExitOk;
}

int run_ca(const RunConfig& cfg) {
  if (!cfg.ca_count) throw ArgumentError("ca: --count required");
  RowWriter w(cfg.out_path, cfg.format, header_comments(cfg),
              {"index", "factorization", "value", "log10_N", "sigma_ratio"});
  std::uint64_t i = 0;
  for (const auto& f : ca_stream(cfg.ca_count)) {
    mpz_class v = f.value();
    std::string value = mpz_sizeinbase(v.get_mpz_t(), 10) <= 60 ? v.get_str() : "";
    DD log10_n = (log(Real::from_mpz(v.get_mpz_t(), 200)) /
                  log(Real::from_u64(10, 200)))
                     .to_dd();
    w.write_row({num_cell(++i), str_cell(f.to_string()), str_cell(value),
                 num_cell(log10_n), num_cell(ratio_to_dd(sigma_ratio(f)))});
  }
  return kExitOk;
}

}  // namespace

int run(const RunConfig& cfg) {
  try {
    set_segment_size(cfg.segment_size);
    switch (cfg.command) {
      case Command::constants: return run_constants(cfg);
      case Command::residuals: return run_residuals(cfg);
      case Command::scan: return run_scan(cfg);
      case Command::check: return run_check(cfg);
      case Command::ramanujan: return run_ramanujan(cfg);
      case Command::ca: return run_ca(cfg);
    }
    return kExitError;
  } catch (const CheckpointError& e) {
    std::fprintf(stderr, "checkpoint refused: %s\n", e.what());
    return kExitError;
  } catch (const ResourceLimitError& e) {
    std::fprintf(stderr, "resource limit: %s\n", e.what());
    return kExitError;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitError;
  }
}

}  // namespace psix
