#include "aoibandit/oracle.hpp"

#include <limits>

namespace aoib {

double mu(double p, double q, double d) {
  return p * q / (1.0 - d * (1.0 - p));
}

ArmQuality optimal_source(const SystemConfig& config) {
  config.validate();
  ArmQuality out;
  out.mu.reserve(config.sources.size());
  for (const auto& s : config.sources) {
    out.mu.push_back(mu(s.p, s.q, config.d));
  }
  out.best_index = 0;
  for (int k = 1; k < config.num_sources(); ++k) {
    if (out.mu[k] > out.mu[out.best_index]) out.best_index = k;
  }
  if (config.num_sources() >= 2) {
    double runner_up = -std::numeric_limits<double>::infinity();
    for (int k = 0; k < config.num_sources(); ++k) {
      if (k != out.best_index && out.mu[k] > runner_up) runner_up = out.mu[k];
    }
    out.gap = out.mu[out.best_index] - runner_up;
  }
  return out;
}

std::vector<SlotOutcome> run_oracle(const SystemConfig& config, Rng& env,
                                    std::int64_t warmup) {
  const auto quality = optimal_source(config);
  const int best = quality.best_index;
  const SourceParams& src = config.sources[best];

  MonitorState state;
  for (std::int64_t t = 0; t < warmup; ++t) {
    simulate_slot(state, best, src, config.d, env);
  }

  std::vector<SlotOutcome> trace;
  trace.reserve(config.horizon);
  for (std::int64_t t = 1; t <= config.horizon; ++t) {
    trace.push_back(simulate_slot(state, best, src, config.d, env));
  }
  return trace;
}

}  // namespace aoib
