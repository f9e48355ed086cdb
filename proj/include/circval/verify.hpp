#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "circval/kernel.hpp"

namespace circval {

struct CheckResult {
  std::string name;
  bool pass = false;
  double observed = 0;
  double threshold = 0;
  std::string detail;
  double seconds = 0;
};

struct VerifyConfig {
  uint64_t seed = 20260809;
  double quad_tol = 1e-10;
  // Replaces the slope-type kernel in the flat-invisibility check; its flags
  // are asserted by the caller, so a flat kernel here makes the check fail.
  std::optional<KernelSpec> invisibility_kernel;
};

/// Runs every acceptance check with its pinned threshold.
std::vector<CheckResult> run_verification(const VerifyConfig& config);

bool all_passed(const std::vector<CheckResult>& results);

}  // namespace circval
