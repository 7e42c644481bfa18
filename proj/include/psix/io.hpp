#pragma once

// Run configuration, structured output writers (CSV / JSONL), and resumable
// checkpointing. Output is deterministic byte-for-byte for a given config and
// input, which is what makes interrupt/resume and worker-count invariance
// testable at the file level.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "psix/dd.hpp"
#include "psix/extrema.hpp"
#include "psix/products.hpp"

namespace psix {

enum class Command { constants, residuals, scan, check, ramanujan, ca };
enum class OutFormat { csv, jsonl };

const char* command_name(Command c);
const char* format_name(OutFormat f);

struct RunConfig {
  Command command = Command::constants;
  std::optional<Inequality> inequality;
  std::optional<Quantity> quantity;
  std::uint64_t pmax = 0;
  std::uint64_t nmax = 0;
  std::string grid_spec;  // "<lin|log>:<lo>:<hi>:<points>"
  int precision_bits = 106;
  int workers = 1;
  std::string out_path;  // empty -> stdout
  OutFormat format = OutFormat::csv;
  std::string checkpoint_path;
  bool resume = false;
  std::uint64_t primorial_k = 0;
  std::uint64_t n = 0;
  std::uint64_t ramanujan_q = 0;     // --Q
  std::uint64_t ca_count = 0;        // --count
  std::uint64_t segment_size = 0;    // 0 -> default/env
  std::uint64_t stop_after_units = 0;  // test hook: simulate an interrupt

  // canonical flag string; parse_command_line(echo_args()) round-trips
  std::vector<std::string> echo_args() const;
  std::string echo() const;
  // fingerprint input: the mathematical task only (no paths, no workers)
  std::string canonical_task() const;

  bool operator==(const RunConfig&) const = default;
};

// CLI11-based parser; throws ArgumentError on usage errors
RunConfig parse_command_line(const std::vector<std::string>& args);

std::vector<std::uint64_t> parse_grid(const std::string& spec);

std::uint64_t fnv1a64(const std::string& s);

struct Cell {
  std::string text;
  bool quoted = false;  // JSONL: quote (non-numeric) values
};

Cell num_cell(const DD& v);
Cell num_cell(std::uint64_t v);
Cell str_cell(std::string s);

// Writes rows to a file or stdout. For files the byte count is tracked so a
// checkpoint can record the resume offset; resume_bytes >= 0 truncates the
// existing file to that offset and appends.
class RowWriter {
 public:
  RowWriter(const std::string& path, OutFormat format,
            const std::vector<std::string>& header_comments,
            const std::vector<std::string>& columns,
            long long resume_bytes = -1);
  ~RowWriter();

  RowWriter(const RowWriter&) = delete;
  RowWriter& operator=(const RowWriter&) = delete;

  void write_row(const std::vector<Cell>& cells);
  void flush();
  std::uint64_t bytes_written() const { return bytes_; }
  std::uint64_t rows_written() const { return rows_; }

 private:
  void emit(const std::string& s);
  OutFormat format_;
  std::vector<std::string> columns_;
  void* file_ = nullptr;  // FILE*, nullptr -> stdout
  std::uint64_t bytes_ = 0;
  std::uint64_t rows_ = 0;
};

struct Checkpoint {
  int schema_version = 1;
  std::string fingerprint;       // hex fnv1a64 of canonical task
  std::uint64_t unit = 0;        // last completed unit (grid index, block, ...)
  std::uint64_t rows = 0;        // rows emitted so far
  std::uint64_t out_bytes = 0;   // output file offset to resume at
  // accumulator state as exact hex component pairs, keyed by name
  std::vector<std::pair<std::string, std::string>> state;
  std::vector<std::pair<std::string, std::uint64_t>> counters;

  std::string state_at(const std::string& key) const;
  std::uint64_t counter_at(const std::string& key) const;
};

void checkpoint_save(const std::string& path, const Checkpoint& cp);
// throws CheckpointError on corrupt file or fingerprint mismatch
Checkpoint checkpoint_load(const std::string& path, const std::string& expected_fingerprint);

}  // namespace psix
