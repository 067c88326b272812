#include "aoibandit/validation.hpp"

#include <cmath>
#include <sstream>

namespace aoib {

std::optional<std::string> check_trace_consistency(const std::vector<SlotOutcome>& trace,
                                                   double d) {
  std::int64_t age = 0;
  bool last_update = false;
  for (std::size_t i = 0; i < trace.size(); ++i) {
    const auto& slot = trace[i];
    std::ostringstream msg;
    if (slot.transmitted != slot.update.has_value()) {
      msg << "slot " << i + 1 << ": update bit present iff transmitted";
      return msg.str();
    }
    const std::int64_t expected_age = slot.transmitted ? 1 : age + 1;
    if (slot.age_after != expected_age) {
      msg << "slot " << i + 1 << ": age " << slot.age_after << ", expected " << expected_age;
      return msg.str();
    }
    if (slot.transmitted) last_update = *slot.update;
    age = slot.age_after;
    const double expected_reward = step_reward(last_update, age, d);
    if (slot.reward_after != expected_reward) {
      msg << "slot " << i + 1 << ": reward " << slot.reward_after << ", expected "
          << expected_reward;
      return msg.str();
    }
    if (!(slot.reward_after >= 0.0 && slot.reward_after <= 1.0) ||
        slot.reward_after > std::pow(d, static_cast<double>(age - 1))) {
      msg << "slot " << i + 1 << ": reward " << slot.reward_after << " outside [0, d^(age-1)]";
      return msg.str();
    }
  }
  return std::nullopt;
}

namespace {

struct Suite {
  std::vector<CheckResult> results;

  void record(const std::string& name, bool passed, const std::string& detail) {
    results.push_back(CheckResult{name, passed, detail});
  }

  void record(const std::string& name, const std::optional<std::string>& failure) {
    results.push_back(CheckResult{name, !failure.has_value(), failure.value_or("ok")});
  }
};

std::string fmt(double value) {
  std::ostringstream out;
  out << value;
  return out.str();
}

void check_model(Suite& suite, const SystemConfig& system) {
  {
    const bool ok = step_age(5, false) == 6 && step_age(5, true) == 1 && step_age(0, false) == 1;
    suite.record("model.age-transitions", ok, ok ? "ok" : "age recursion broken");
  }
  {
    const bool ok = step_reward(true, 1, 0.3) == 1.0 && step_reward(false, 7, 0.3) == 0.0 &&
                    std::abs(step_reward(true, 3, 0.8) - 0.64) < 1e-12;
    suite.record("model.reward-values", ok, ok ? "ok" : "depreciation formula broken");
  }
  {
    // Simulated trajectories must satisfy the reward recursion exactly.
    std::optional<std::string> failure;
    Rng env(20240817);
    for (int rep = 0; rep < 3 && !failure; ++rep) {
      MonitorState state;
      std::vector<SlotOutcome> trace;
      const SourceParams& src = system.sources[rep % system.sources.size()];
      for (int t = 0; t < 2000; ++t) {
        trace.push_back(simulate_slot(state, 0, src, system.d, env));
      }
      failure = check_trace_consistency(trace, system.d);
    }
    suite.record("model.reward-recursion", failure);
  }
  {
    const int n = 10000;
    const double p = system.sources[0].p;
    Rng env(777001);
    MonitorState state;
    std::int64_t hits = 0;
    for (int t = 0; t < n; ++t) {
      hits += simulate_slot(state, 0, system.sources[0], system.d, env).transmitted ? 1 : 0;
    }
    const double freq = static_cast<double>(hits) / n;
    const double tol = 4.0 * std::sqrt(std::max(p * (1.0 - p), 1e-12) / n);
    const bool ok = std::abs(freq - p) <= std::max(tol, 1e-9);
    std::ostringstream detail;
    detail << "freq " << freq << " vs p " << p << " (tol " << tol << ")";
    suite.record("model.transmission-frequency", ok, detail.str());
  }
}

void check_oracle(Suite& suite, const SystemConfig& system) {
  {
    const auto quality = optimal_source(system);
    bool ok = true;
    for (int k = 0; k < system.num_sources(); ++k) {
      const auto& s = system.sources[k];
      if (!(quality.mu[k] >= 0.0 && quality.mu[k] <= 1.0)) ok = false;
      if (!(1.0 - system.d * (1.0 - s.p) >= 1.0 - system.d)) ok = false;
    }
    suite.record("oracle.mu-range", ok, ok ? "ok" : "mu outside [0,1] or denominator too small");
  }
  {
    // The argmax is invariant under any strictly increasing transform.
    const auto quality = optimal_source(system);
    std::vector<double> transformed(quality.mu.size());
    for (std::size_t k = 0; k < quality.mu.size(); ++k) {
      const double x = quality.mu[k];
      transformed[k] = x * x * x + 2.0 * x;
    }
    int best = 0;
    for (int k = 1; k < static_cast<int>(transformed.size()); ++k) {
      if (transformed[k] > transformed[best]) best = k;
    }
    const bool ok = best == quality.best_index;
    suite.record("oracle.argmax-invariance", ok, ok ? "ok" : "argmax moved under transform");
  }
}

void check_policies(Suite& suite, const SystemConfig& base, int threads) {
  SystemConfig system = base;
  system.horizon = std::max<std::int64_t>(500, system.num_sources() + 10);

  const PolicyKind kinds[] = {PolicyKind::Etc, PolicyKind::EpsGreedy, PolicyKind::Ucb,
                              PolicyKind::Ts};
  for (const auto kind : kinds) {
    PolicyConfig cfg;
    cfg.kind = kind;
    if (kind == PolicyKind::Etc) {
      cfg.t_explore = std::min<std::int64_t>(system.horizon - 1,
                                             std::max<std::int64_t>(system.num_sources(), 100));
    }
    auto policy = make_policy(resolve_policy(cfg, system), system);
    Rng policy_rng(derive_stream_seed(42, StreamRole::PolicyInternal));
    Rng env(derive_stream_seed(42, StreamRole::PolicyEnv));
    std::vector<std::int64_t> scheduled(system.num_sources(), 0);
    MonitorState state;
    for (std::int64_t t = 1; t <= system.horizon; ++t) {
      const int arm = policy->select(t, policy_rng);
      const auto outcome = simulate_slot(state, arm, system.sources[arm], system.d, env);
      policy->observe(outcome);
      scheduled[arm] += 1;
    }
    std::optional<std::string> failure;
    if (kind == PolicyKind::Ts) {
      const auto& ts = static_cast<const TsPolicy&>(*policy).state();
      for (int k = 0; k < system.num_sources(); ++k) {
        const auto& a = ts.arms[k];
        if (a.s_pq + a.f_pq != scheduled[k] || a.s_p + a.f_p != scheduled[k] ||
            a.s_pq > a.s_p) {
          failure = "posterior counts disagree with the schedule counts";
        }
      }
    } else {
      const EstimatorState* est = nullptr;
      std::int64_t expected_total = 0;
      if (kind == PolicyKind::Etc) {
        const auto& etc = static_cast<const EtcPolicy&>(*policy);
        est = &etc.estimator();
        expected_total = etc.t_explore();
      } else if (kind == PolicyKind::EpsGreedy) {
        const auto& eg = static_cast<const EpsGreedyPolicy&>(*policy);
        est = &eg.estimator();
        expected_total = eg.explore_slots();
      } else {
        est = &static_cast<const UcbPolicy&>(*policy).estimator();
        expected_total = system.horizon;
      }
      std::int64_t total = 0;
      for (const auto& a : est->arms) {
        if (!(0 <= a.pq_successes && a.pq_successes <= a.p_successes &&
              a.p_successes <= a.n_scheduled)) {
          failure = "count ordering 0 <= pq <= p <= n violated";
        }
        total += a.n_scheduled;
      }
      if (total != expected_total) {
        std::ostringstream msg;
        msg << "estimator absorbed " << total << " outcomes, expected " << expected_total;
        failure = msg.str();
      }
    }
    suite.record(std::string("policies.counts-") + std::string(policy_name(kind)), failure);
  }

  {
    // Exact moments plus any positive bonus must inflate the index.
    bool ok = true;
    const double grid[] = {0.05, 0.3, 0.65, 0.9};
    for (const double p : grid) {
      for (const double q : grid) {
        const double exact = mu(p, q, base.d);
        for (const std::int64_t n : {1, 10, 1000}) {
          if (!(ucb_index(p * q, p, n, 100, base.d) > exact)) ok = false;
        }
      }
    }
    suite.record("policies.ucb-optimism", ok, ok ? "ok" : "index not optimistic");
  }

  {
    // Identical seeds must replay identical arm sequences.
    bool ok = true;
    SystemConfig small = base;
    small.horizon = 300;
    for (const auto kind : kinds) {
      PolicyConfig cfg;
      cfg.kind = kind;
      if (kind == PolicyKind::Etc) cfg.t_explore = std::max(small.num_sources(), 50);
      const auto a = run_trial(small, cfg, 987654321, true, true);
      const auto b = run_trial(small, cfg, 987654321, true, true);
      for (std::size_t i = 0; i < a.policy_trace.size(); ++i) {
        if (a.policy_trace[i].arm != b.policy_trace[i].arm ||
            a.regret[i] != b.regret[i]) {
          ok = false;
          break;
        }
      }
    }
    suite.record("policies.deterministic-replay", ok, ok ? "ok" : "replay diverged");
  }
  (void)threads;
}

void check_experiment(Suite& suite, const SystemConfig& base, int threads) {
  {
    // The oracle run against itself under coupling earns exactly zero regret.
    SystemConfig system = base;
    system.horizon = 2000;
    PolicyConfig cfg;
    cfg.kind = PolicyKind::Oracle;
    const auto trial = run_trial(system, cfg, 13579, true);
    bool ok = true;
    for (const double r : trial.regret) {
      if (r != 0.0) ok = false;
    }
    suite.record("experiment.coupled-self-regret", ok, ok ? "ok" : "nonzero self-regret");
  }
  {
    SystemConfig system = base;
    system.horizon = 400;
    PolicyConfig cfg;
    cfg.kind = PolicyKind::Ts;
    McOptions opts;
    opts.threads = threads;
    const auto mc = monte_carlo(system, cfg, 8, 2468, opts);
    bool ok = static_cast<std::int64_t>(mc.series.cumulative.size()) == system.horizon;
    double sum = 0.0;
    double comp = 0.0;
    for (std::size_t i = 0; i < mc.series.instantaneous.size() && ok; ++i) {
      const double y = mc.series.instantaneous[i] - comp;
      const double t = sum + y;
      comp = (t - sum) - y;
      sum = t;
      if (mc.series.cumulative[i] != sum) ok = false;
    }
    suite.record("experiment.series-consistency", ok,
                 ok ? "ok" : "cumulative differs from compensated prefix sum");
  }
}

void check_oracle_mean(Suite& suite, const SystemConfig& base, std::int64_t horizon) {
  SystemConfig system = base;
  system.horizon = horizon;
  Rng env(derive_stream_seed(base.seed, StreamRole::OracleEnv));
  const auto trace = run_oracle(system, env);
  // Rewards are autocorrelated through the age, so the standard error comes
  // from batch means rather than per-slot samples.
  const std::int64_t batch_len = std::max<std::int64_t>(500, horizon / 1000);
  const std::int64_t n_batches = horizon / batch_len;
  double sum = 0.0;
  double sum_sq = 0.0;
  for (std::int64_t b = 0; b < n_batches; ++b) {
    double batch = 0.0;
    for (std::int64_t i = b * batch_len; i < (b + 1) * batch_len; ++i) {
      batch += trace[i].reward_after;
    }
    batch /= static_cast<double>(batch_len);
    sum += batch;
    sum_sq += batch * batch;
  }
  const double n = static_cast<double>(n_batches);
  const double mean = sum / n;
  const double var = std::max(0.0, (sum_sq - n * mean * mean) / (n - 1.0));
  const double se = std::sqrt(var / n);
  const auto quality = optimal_source(system);
  const double target = quality.mu[quality.best_index];
  const bool ok = std::abs(mean - target) <= std::max(3.0 * se, 1e-9);
  std::ostringstream detail;
  detail << "mean " << fmt(mean) << " vs mu* " << fmt(target) << " (3se "
         << fmt(3.0 * se) << ")";
  suite.record("oracle.long-run-mean", ok, detail.str());
}

}  // namespace

std::vector<CheckResult> run_validation(const SystemConfig& system, ValidationLevel level,
                                        int threads) {
  system.validate();
  Suite suite;
  check_model(suite, system);
  check_oracle(suite, system);
  check_policies(suite, system, threads);
  check_experiment(suite, system, threads);
  if (level == ValidationLevel::Full) {
    check_oracle_mean(suite, system, 1000000);
  } else {
    check_oracle_mean(suite, system, 100000);
  }
  return suite.results;
}

}  // namespace aoib
