#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace psix {

// Bad arguments (invalid range, unsorted grid, n out of domain, ...).
struct ArgumentError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// A configured cap (sieve hard cap, divisor-count guard, ...) was exceeded.
struct ResourceLimitError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A precision request cannot be met with the given parameters.
struct PrecisionInfeasibleError : std::runtime_error {
  PrecisionInfeasibleError(const std::string& msg, std::uint64_t minimal_cutoff)
      : std::runtime_error(msg), minimal_cutoff(minimal_cutoff) {}
  std::uint64_t minimal_cutoff;
};

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Checkpoint refused (fingerprint mismatch or corrupt file).
struct CheckpointError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace psix
