#include "aoibandit/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace aoib {

namespace {

int default_threads() {
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

// Binary-counter pairwise summation over equally-shaped vectors. The merge
// tree depends only on the push order, so totals are bit-identical for any
// thread count, and a power-of-two run splits exactly into the totals of its
// halves.
class PairwiseAccumulator {
 public:
  explicit PairwiseAccumulator(std::size_t size) : size_(size) {}

  void push(std::vector<double> values) {
    levels_.push_back(Node{0, std::move(values)});
    while (levels_.size() >= 2 &&
           levels_[levels_.size() - 1].level == levels_[levels_.size() - 2].level) {
      Node top = std::move(levels_.back());
      levels_.pop_back();
      Node& dst = levels_.back();
      for (std::size_t i = 0; i < size_; ++i) dst.values[i] += top.values[i];
      dst.level += 1;
    }
  }

  std::vector<double> total() const {
    std::vector<double> out(size_, 0.0);
    for (const auto& node : levels_) {
      for (std::size_t i = 0; i < size_; ++i) out[i] += node.values[i];
    }
    return out;
  }

 private:
  struct Node {
    int level;
    std::vector<double> values;
  };
  std::size_t size_;
  std::vector<Node> levels_;
};

std::vector<double> kahan_prefix(const std::vector<double>& values) {
  std::vector<double> out(values.size());
  double sum = 0.0;
  double comp = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double y = values[i] - comp;
    const double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
    out[i] = sum;
  }
  return out;
}

double kahan_sum(const double* values, std::size_t n) {
  double sum = 0.0;
  double comp = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double y = values[i] - comp;
    const double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
  }
  return sum;
}

// Runs fn(trial_index) for every trial, delivering results to consume() in
// trial order regardless of how many worker threads ran them.
template <typename Fn, typename Consume>
void for_each_trial_ordered(std::int64_t n_trials, int threads, Fn&& fn, Consume&& consume) {
  if (threads <= 1 || n_trials <= 1) {
    for (std::int64_t i = 0; i < n_trials; ++i) consume(fn(i));
    return;
  }
  const std::int64_t batch = static_cast<std::int64_t>(threads) * 2;
  std::vector<std::future<std::invoke_result_t<Fn, std::int64_t>>> futures;
  for (std::int64_t start = 0; start < n_trials; start += batch) {
    const std::int64_t end = std::min(n_trials, start + batch);
    futures.clear();
    for (std::int64_t i = start; i < end; ++i) {
      futures.push_back(std::async(std::launch::async, fn, i));
    }
    for (auto& f : futures) consume(f.get());
  }
}

}  // namespace

TeSchedule etc_te_schedule(std::int64_t horizon, const InstanceConstants& consts) {
  if (horizon < 2) throw std::invalid_argument("horizon too short for an explore phase");
  TeSchedule out;
  const std::int64_t lo = std::max<std::int64_t>(1, consts.num_sources);
  const std::int64_t hi = horizon - 1;
  if (lo > hi) throw std::invalid_argument("horizon too short for an explore phase");
  if (consts.c) {
    out.raw = *consts.c * std::log(static_cast<double>(horizon));
    out.t_explore = static_cast<std::int64_t>(std::llround(out.raw));
  } else {
    // Single source: nothing to separate, use the minimal explore phase.
    out.raw = static_cast<double>(lo);
    out.t_explore = lo;
  }
  if (out.t_explore < lo) {
    out.t_explore = lo;
    out.clamped = true;
  } else if (out.t_explore > hi) {
    out.t_explore = hi;
    out.clamped = true;
  }
  return out;
}

PolicyConfig resolve_policy(PolicyConfig cfg, const SystemConfig& system) {
  if (cfg.kind != PolicyKind::Etc) return cfg;
  if (cfg.t_explore == 0) {
    cfg.t_explore = etc_te_schedule(system.horizon, instance_constants(system)).t_explore;
  }
  if (cfg.t_explore < system.num_sources()) {
    throw std::invalid_argument("explore phase must cover every source at least once");
  }
  if (cfg.t_explore >= system.horizon) {
    throw std::invalid_argument("explore phase must end before the horizon");
  }
  return cfg;
}

TrialResult run_trial(const SystemConfig& system, const PolicyConfig& policy_cfg,
                      std::uint64_t trial_seed, bool coupled, bool keep_traces,
                      std::int64_t oracle_warmup) {
  system.validate();
  const auto cfg = resolve_policy(policy_cfg, system);
  const auto quality = optimal_source(system);
  const int best = quality.best_index;
  const std::int64_t horizon = system.horizon;
  const double d = system.d;

  auto policy = make_policy(cfg, system);
  Rng policy_rng(derive_stream_seed(trial_seed, StreamRole::PolicyInternal));

  MonitorState policy_state;
  MonitorState oracle_state;
  if (oracle_warmup > 0) {
    Rng warmup_rng(derive_stream_seed(trial_seed, StreamRole::Warmup));
    for (std::int64_t t = 0; t < oracle_warmup; ++t) {
      simulate_slot(oracle_state, best, system.sources[best], d, warmup_rng);
    }
  }

  TrialResult out;
  out.regret.resize(horizon);
  out.pulls.assign(system.num_sources(), 0);
  if (keep_traces) {
    out.policy_trace.reserve(horizon);
    out.oracle_trace.reserve(horizon);
  }

  if (coupled) {
    Rng u_rng(derive_stream_seed(trial_seed, StreamRole::EnvChannel));
    Rng v_rng(derive_stream_seed(trial_seed, StreamRole::EnvAccuracy));
    for (std::int64_t t = 1; t <= horizon; ++t) {
      const int arm = policy->select(t, policy_rng);
      const double u = u_rng.next_u01();
      const double v = v_rng.next_u01();
      const auto policy_out = step_with_draws(policy_state, arm, system.sources[arm], d, u, v);
      const auto oracle_out = step_with_draws(oracle_state, best, system.sources[best], d, u, v);
      policy->observe(policy_out);
      out.pulls[arm] += 1;
      out.regret[t - 1] = oracle_out.reward_after - policy_out.reward_after;
      if (keep_traces) {
        out.policy_trace.push_back(policy_out);
        out.oracle_trace.push_back(oracle_out);
      }
    }
  } else {
    Rng policy_env(derive_stream_seed(trial_seed, StreamRole::PolicyEnv));
    Rng oracle_env(derive_stream_seed(trial_seed, StreamRole::OracleEnv));
    for (std::int64_t t = 1; t <= horizon; ++t) {
      const int arm = policy->select(t, policy_rng);
      const auto policy_out = simulate_slot(policy_state, arm, system.sources[arm], d, policy_env);
      const auto oracle_out = simulate_slot(oracle_state, best, system.sources[best], d, oracle_env);
      policy->observe(policy_out);
      out.pulls[arm] += 1;
      out.regret[t - 1] = oracle_out.reward_after - policy_out.reward_after;
      if (keep_traces) {
        out.policy_trace.push_back(policy_out);
        out.oracle_trace.push_back(oracle_out);
      }
    }
  }

  if (cfg.kind == PolicyKind::Etc) {
    out.committed_arm = static_cast<const EtcPolicy&>(*policy).committed();
  }
  return out;
}

MonteCarloResult monte_carlo(const SystemConfig& system, const PolicyConfig& policy_cfg,
                             std::int64_t n_trials, std::uint64_t base_seed,
                             const McOptions& opts) {
  system.validate();
  if (n_trials < 1) throw std::invalid_argument("n_trials must be at least 1");
  const auto cfg = resolve_policy(policy_cfg, system);
  const std::size_t horizon = static_cast<std::size_t>(system.horizon);
  const int threads = opts.threads > 0 ? opts.threads : default_threads();

  PairwiseAccumulator sum(horizon);
  PairwiseAccumulator sum_sq(horizon);
  MonteCarloResult out;
  out.total_pulls.assign(system.num_sources(), 0);
  if (cfg.kind == PolicyKind::Etc) out.commit_counts.assign(system.num_sources(), 0);

  auto run_one = [&](std::int64_t i) {
    return run_trial(system, cfg, derive_trial_seed(base_seed, opts.trial_offset + i),
                     opts.coupled, false, opts.oracle_warmup);
  };
  auto consume = [&](TrialResult&& trial) {
    std::vector<double> squared = trial.regret;
    for (auto& x : squared) x *= x;
    sum.push(std::move(trial.regret));
    sum_sq.push(std::move(squared));
    for (std::size_t k = 0; k < trial.pulls.size(); ++k) out.total_pulls[k] += trial.pulls[k];
    if (trial.committed_arm && !out.commit_counts.empty()) {
      out.commit_counts[*trial.committed_arm] += 1;
    }
  };
  for_each_trial_ordered(n_trials, threads, run_one, consume);

  const auto totals = sum.total();
  const auto totals_sq = sum_sq.total();
  const double n = static_cast<double>(n_trials);

  RegretSeries& series = out.series;
  series.n_trials = n_trials;
  series.instantaneous.resize(horizon);
  series.std_error.resize(horizon);
  for (std::size_t i = 0; i < horizon; ++i) {
    const double mean = totals[i] / n;
    series.instantaneous[i] = mean;
    if (n_trials > 1) {
      const double var = std::max(0.0, (totals_sq[i] - n * mean * mean) / (n - 1.0));
      series.std_error[i] = std::sqrt(var / n);
    } else {
      series.std_error[i] = 0.0;
    }
  }
  series.cumulative = kahan_prefix(series.instantaneous);
  return out;
}

std::string_view sweep_axis_name(SweepAxis axis) {
  switch (axis) {
    case SweepAxis::DeltaCases: return "delta_cases";
    case SweepAxis::PCases: return "p_cases";
    case SweepAxis::QCases: return "q_cases";
    case SweepAxis::DGrid: return "d_grid";
  }
  return "unknown";
}

std::optional<SweepAxis> sweep_axis_from_name(std::string_view name) {
  if (name == "delta_cases") return SweepAxis::DeltaCases;
  if (name == "p_cases") return SweepAxis::PCases;
  if (name == "q_cases") return SweepAxis::QCases;
  if (name == "d_grid") return SweepAxis::DGrid;
  return std::nullopt;
}

SystemConfig apply_sweep_case(const SystemConfig& base, SweepAxis axis,
                              const std::vector<double>& payload) {
  SystemConfig cfg = base;
  switch (axis) {
    case SweepAxis::PCases:
      if (payload.size() != base.sources.size()) {
        throw std::invalid_argument("sweep case length must match the source count");
      }
      for (std::size_t k = 0; k < payload.size(); ++k) {
        cfg.sources[k] = SourceParams(payload[k], base.sources[k].q);
      }
      break;
    case SweepAxis::QCases:
    case SweepAxis::DeltaCases:
      if (payload.size() != base.sources.size()) {
        throw std::invalid_argument("sweep case length must match the source count");
      }
      for (std::size_t k = 0; k < payload.size(); ++k) {
        cfg.sources[k] = SourceParams(base.sources[k].p, payload[k]);
      }
      break;
    case SweepAxis::DGrid:
      if (payload.size() != 1) {
        throw std::invalid_argument("d_grid cases hold exactly one value");
      }
      cfg.d = payload[0];
      break;
  }
  cfg.validate();
  return cfg;
}

namespace {

std::string sweep_case_label(SweepAxis axis, const std::vector<double>& payload) {
  std::ostringstream label;
  switch (axis) {
    case SweepAxis::PCases: label << "p="; break;
    case SweepAxis::QCases: label << "q="; break;
    case SweepAxis::DeltaCases: label << "q="; break;
    case SweepAxis::DGrid: label << "d="; break;
  }
  if (payload.size() == 1) {
    label << payload[0];
  } else {
    label << "[";
    for (std::size_t i = 0; i < payload.size(); ++i) {
      if (i > 0) label << ",";
      label << payload[i];
    }
    label << "]";
  }
  return label.str();
}

}  // namespace

std::vector<SweepRow> sweep(const SystemConfig& base, const SweepSpec& spec,
                            const std::vector<PolicyConfig>& policies,
                            std::int64_t n_trials, std::uint64_t base_seed,
                            const McOptions& opts) {
  base.validate();
  if (spec.cases.empty()) throw std::invalid_argument("sweep needs at least one case");
  if (n_trials < 1) throw std::invalid_argument("n_trials must be at least 1");
  const std::int64_t checkpoint = spec.checkpoint == 0 ? base.horizon : spec.checkpoint;
  if (checkpoint < 1 || checkpoint > base.horizon) {
    throw std::invalid_argument("checkpoint must lie within the horizon");
  }
  const int threads = opts.threads > 0 ? opts.threads : default_threads();

  std::vector<SweepRow> rows;
  for (std::size_t case_index = 0; case_index < spec.cases.size(); ++case_index) {
    const SystemConfig cfg = apply_sweep_case(base, spec.axis, spec.cases[case_index]);
    const auto quality = optimal_source(cfg);
    for (const auto& policy_cfg : policies) {
      const auto resolved = resolve_policy(policy_cfg, cfg);
      double total = 0.0;
      double total_sq = 0.0;
      auto run_one = [&](std::int64_t i) {
        auto trial = run_trial(cfg, resolved, derive_trial_seed(base_seed, opts.trial_offset + i),
                               opts.coupled, false, opts.oracle_warmup);
        return kahan_sum(trial.regret.data(), static_cast<std::size_t>(checkpoint));
      };
      auto consume = [&](double value) {
        total += value;
        total_sq += value * value;
      };
      for_each_trial_ordered(n_trials, threads, run_one, consume);

      const double n = static_cast<double>(n_trials);
      const double mean = total / n;
      double se = 0.0;
      if (n_trials > 1) {
        const double var = std::max(0.0, (total_sq - n * mean * mean) / (n - 1.0));
        se = std::sqrt(var / n);
      }
      rows.push_back(SweepRow{static_cast<int>(case_index),
                              sweep_case_label(spec.axis, spec.cases[case_index]),
                              quality.gap.value_or(0.0), resolved.kind, checkpoint, mean, se});
    }
  }
  return rows;
}

}  // namespace aoib
