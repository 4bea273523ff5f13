#pragma once

// Quick self-test of the simulator's invariants, used by `fockbench check`.

#include <cstdint>
#include <string>
#include <vector>

namespace fockbench {

struct CheckResult {
  std::string name;
  bool pass = false;
  std::string detail;
};

std::vector<CheckResult> run_invariant_suite(std::uint64_t seed = 20240917);

}  // namespace fockbench
