#pragma once

#include <optional>
#include <vector>

#include "aoibandit/model.hpp"

namespace aoib {

struct ArmQuality {
  std::vector<double> mu;     // steady-state expected reward per source
  int best_index = 0;         // lowest index attaining the maximum
  std::optional<double> gap;  // mu* minus the best of the rest; engaged when K >= 2
};

// Steady-state expected reward of always scheduling a (p, q) source:
// p*q / (1 - d*(1-p)). The denominator is at least 1-d, so always finite.
double mu(double p, double q, double d);

ArmQuality optimal_source(const SystemConfig& config);

// Schedules the best source every slot, starting cold. An optional warm-up of
// `warmup` slots is simulated and discarded before the recorded trace, as a
// stand-in for a system that has been running for a long time.
std::vector<SlotOutcome> run_oracle(const SystemConfig& config, Rng& env,
                                    std::int64_t warmup = 0);

}  // namespace aoib
