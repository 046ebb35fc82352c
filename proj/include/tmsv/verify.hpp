#pragma once

// Cross-module invariant suite backing the `verify` CLI subcommand: every
// check reports its measured error against the tolerance it must beat.

#include <cstdint>
#include <string>
#include <vector>

namespace tmsv {

struct CheckResult {
  std::string name;
  double measured = 0.0;
  double tolerance = 0.0;
  bool passed = false;
};

struct VerifyOptions {
  double tail_tolerance = 1e-10;
  std::uint64_t seed = 12345;
  // Test-harness hook: corrupt the sign of one K_x term to confirm the
  // suite actually detects a wrong generator.
  bool inject_kx_sign_flip = false;
};

std::vector<CheckResult> run_verification(const VerifyOptions& opts);

}  // namespace tmsv
