#pragma once

#include <optional>
#include <string>
#include <vector>

#include "aoibandit/experiment.hpp"

namespace aoib {

enum class ValidationLevel { Fast, Full };

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

// Verifies a cold-start trace against the slot dynamics: age transitions,
// the reward recursion, update presence, and the reward range. Returns the
// first violation found, or nothing.
std::optional<std::string> check_trace_consistency(const std::vector<SlotOutcome>& trace,
                                                   double d);

// Runs the invariant suite against the given instance. Fast covers the
// analytic and short-simulation checks; Full adds the long-horizon oracle
// mean convergence.
std::vector<CheckResult> run_validation(const SystemConfig& system, ValidationLevel level,
                                        int threads = 0);

}  // namespace aoib
