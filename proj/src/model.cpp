#include "aoibandit/model.hpp"

#include <cmath>
#include <stdexcept>

namespace aoib {

SourceParams::SourceParams(double p_in, double q_in) : p(p_in), q(q_in) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw std::invalid_argument("transmission probability p must lie in [0,1]");
  }
  if (!(q >= 0.0 && q <= 1.0)) {
    throw std::invalid_argument("accuracy probability q must lie in [0,1]");
  }
}

void SystemConfig::validate() const {
  if (sources.empty()) {
    throw std::invalid_argument("at least one source is required");
  }
  for (const auto& s : sources) {
    if (!(s.p >= 0.0 && s.p <= 1.0) || !(s.q >= 0.0 && s.q <= 1.0)) {
      throw std::invalid_argument("source probabilities must lie in [0,1]");
    }
  }
  if (!(d > 0.0 && d < 1.0)) {
    throw std::invalid_argument("depreciating factor must lie strictly inside (0,1)");
  }
  if (horizon < 1) {
    throw std::invalid_argument("horizon must be at least 1 slot");
  }
}

std::int64_t step_age(std::int64_t prev_age, bool transmitted) {
  return transmitted ? 1 : prev_age + 1;
}

double step_reward(bool last_update, std::int64_t age, double d) {
  if (!last_update) return 0.0;
  return std::pow(d, static_cast<double>(age - 1));
}

SlotOutcome step_with_draws(MonitorState& state, int arm, const SourceParams& src,
                            double d, double u, double v) {
  SlotOutcome out;
  out.arm = arm;
  out.transmitted = u < src.p;
  if (out.transmitted) {
    const bool update = v < src.q;
    out.update = update;
    state.age = 1;
    state.last_update = update;
    state.reward = update ? 1.0 : 0.0;
  } else {
    state.age += 1;
    state.reward = step_reward(state.last_update, state.age, d);
  }
  out.age_after = state.age;
  out.reward_after = state.reward;
  return out;
}

SlotOutcome simulate_slot(MonitorState& state, int arm, const SourceParams& src,
                          double d, Rng& env) {
  const double u = env.next_u01();
  if (u < src.p) {
    return step_with_draws(state, arm, src, d, u, env.next_u01());
  }
  return step_with_draws(state, arm, src, d, u, 1.0);  // v unused on failure
}

}  // namespace aoib
