#pragma once

#include "psix/io.hpp"

namespace psix {

// Exit codes: 0 success; 1 error; 2 an inequality check/scan found failures
// (the counterexample channel, not a program failure); 3 stopped early by the
// interrupt test hook with a resumable checkpoint saved.
inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitCounterexample = 2;
inline constexpr int kExitInterrupted = 3;
inline constexpr int kExitUsage = 64;

int run(const RunConfig& config);

}  // namespace psix
