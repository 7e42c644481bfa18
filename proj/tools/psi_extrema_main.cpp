#include <cstdio>
#include <string>
#include <vector>

#include "psix/errors.hpp"
#include "psix/io.hpp"
#include "psix/runner.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  psix::RunConfig cfg;
  try {
    cfg = psix::parse_command_line(args);
  } catch (const psix::ArgumentError& e) {
    std::fprintf(stderr, "%s\n", e.what());
    return psix::kExitUsage;
  }
  return psix::run(cfg);
}
