#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "aoibandit/rng.hpp"

namespace aoib {

// Per-source parameters: transmission success and measurement accuracy.
struct SourceParams {
  double p = 0.0;
  double q = 0.0;

  SourceParams() = default;
  SourceParams(double p, double q);  // throws std::invalid_argument outside [0,1]
};

struct SystemConfig {
  std::vector<SourceParams> sources;
  double d = 0.5;             // depreciating factor, strictly inside (0,1)
  std::int64_t horizon = 1;   // number of scheduled slots
  std::uint64_t seed = 1;

  int num_sources() const { return static_cast<int>(sources.size()); }
  void validate() const;  // throws std::invalid_argument
};

// Monitor-side state: age of the freshest delivered update and its value.
// age == 0 only before the first slot.
struct MonitorState {
  std::int64_t age = 0;
  bool last_update = false;
  double reward = 0.0;
};

struct SlotOutcome {
  int arm = 0;
  bool transmitted = false;
  std::optional<bool> update;  // engaged iff transmitted
  std::int64_t age_after = 0;
  double reward_after = 0.0;
};

// Age resets to 1 on a successful transmission, grows by one otherwise.
std::int64_t step_age(std::int64_t prev_age, bool transmitted);

// Value of the last delivered update depreciated by its age: last * d^(age-1).
// Requires age >= 1.
double step_reward(bool last_update, std::int64_t age, double d);

// Advances the monitor through one slot given both uniforms. Success is
// u < p, accuracy is v < q; v is ignored on a failed transmission. Coupled
// runs feed both trajectories the same (u, v) pair.
SlotOutcome step_with_draws(MonitorState& state, int arm, const SourceParams& src,
                            double d, double u, double v);

// Draw discipline: exactly one uniform for the channel, a second only on
// success. Coupled runs bypass this and advance both streams every slot.
SlotOutcome simulate_slot(MonitorState& state, int arm, const SourceParams& src,
                          double d, Rng& env);

}  // namespace aoib
