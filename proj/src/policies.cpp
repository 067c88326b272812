#include "aoibandit/policies.hpp"

#include <cmath>
#include <stdexcept>

#include "aoibandit/oracle.hpp"

namespace aoib {

std::string_view policy_name(PolicyKind kind) {
  switch (kind) {
    case PolicyKind::Etc: return "etc";
    case PolicyKind::EpsGreedy: return "eps_greedy";
    case PolicyKind::Ucb: return "ucb";
    case PolicyKind::Ts: return "ts";
    case PolicyKind::Oracle: return "oracle";
  }
  return "unknown";
}

std::optional<PolicyKind> policy_from_name(std::string_view name) {
  if (name == "etc") return PolicyKind::Etc;
  if (name == "eps_greedy" || name == "epsilon_greedy") return PolicyKind::EpsGreedy;
  if (name == "ucb") return PolicyKind::Ucb;
  if (name == "ts" || name == "thompson") return PolicyKind::Ts;
  if (name == "oracle") return PolicyKind::Oracle;
  return std::nullopt;
}

double empirical_mu(double pq_hat, double p_hat, double d) {
  return pq_hat / (1.0 - d * (1.0 - p_hat));
}

double epsilon_schedule(std::int64_t t, int num_sources) {
  const double lt = std::log(static_cast<double>(t));
  return std::min(1.0, 3.0 * num_sources * lt * lt / static_cast<double>(t));
}

double ucb_index(double pq_hat, double p_hat, std::int64_t n, std::int64_t t, double d) {
  const double bonus = std::sqrt(2.0 * std::log(static_cast<double>(t)) / static_cast<double>(n));
  const double p_lcb = std::max(0.0, p_hat - bonus);
  return (pq_hat + bonus) / (1.0 - d * (1.0 - p_lcb));
}

int argmax_lowest(std::span<const double> values) {
  int best = 0;
  for (int k = 1; k < static_cast<int>(values.size()); ++k) {
    if (values[k] > values[best]) best = k;
  }
  return best;
}

void EstimatorState::observe(const SlotOutcome& outcome) {
  auto& a = arms.at(outcome.arm);
  a.n_scheduled += 1;
  if (outcome.transmitted) {
    a.p_successes += 1;
    if (outcome.update.value_or(false)) a.pq_successes += 1;
  }
}

double EstimatorState::pq_hat(int arm) const {
  const auto& a = arms.at(arm);
  if (a.n_scheduled == 0) return 0.0;
  return static_cast<double>(a.pq_successes) / static_cast<double>(a.n_scheduled);
}

double EstimatorState::p_hat(int arm) const {
  const auto& a = arms.at(arm);
  if (a.n_scheduled == 0) return 0.0;
  return static_cast<double>(a.p_successes) / static_cast<double>(a.n_scheduled);
}

void TsState::observe(const SlotOutcome& outcome) {
  auto& a = arms.at(outcome.arm);
  if (!outcome.transmitted) {
    // A failed transmission is a failure of both processes.
    a.f_pq += 1;
    a.f_p += 1;
    return;
  }
  a.s_p += 1;
  if (outcome.update.value_or(false)) {
    a.s_pq += 1;
  } else {
    a.f_pq += 1;
  }
}

namespace {

std::vector<double> estimate_mus(const EstimatorState& est, double d) {
  std::vector<double> mus(est.arms.size());
  for (int k = 0; k < static_cast<int>(est.arms.size()); ++k) {
    mus[k] = empirical_mu(est.pq_hat(k), est.p_hat(k), d);
  }
  return mus;
}

}  // namespace

EtcPolicy::EtcPolicy(int num_sources, double d, std::int64_t t_explore)
    : k_(num_sources), d_(d), t_explore_(t_explore), est_(num_sources) {
  if (t_explore_ < k_) {
    throw std::invalid_argument("explore phase must cover every source at least once");
  }
}

int EtcPolicy::select(std::int64_t t, Rng&) {
  if (t <= t_explore_) {
    exploring_ = true;
    return static_cast<int>((t - 1) % k_);
  }
  exploring_ = false;
  if (!committed_) {
    const auto mus = estimate_mus(est_, d_);
    committed_ = argmax_lowest(mus);
  }
  return *committed_;
}

void EtcPolicy::observe(const SlotOutcome& outcome) {
  if (exploring_) est_.observe(outcome);
}

EpsGreedyPolicy::EpsGreedyPolicy(int num_sources, double d, std::optional<double> epsilon_fixed)
    : k_(num_sources), d_(d), epsilon_fixed_(epsilon_fixed), est_(num_sources) {
  if (epsilon_fixed_ && !(*epsilon_fixed_ >= 0.0 && *epsilon_fixed_ <= 1.0)) {
    throw std::invalid_argument("fixed exploration probability must lie in [0,1]");
  }
}

EgSelection EpsGreedyPolicy::select_tagged(std::int64_t t, Rng& rng) {
  const double eps = epsilon_fixed_ ? *epsilon_fixed_ : epsilon_schedule(t, k_);
  if (rng.next_u01() < eps) {
    last_explore_ = true;
    explore_slots_ += 1;
    return {rng.next_index(k_), true};
  }
  last_explore_ = false;
  const auto mus = estimate_mus(est_, d_);
  return {argmax_lowest(mus), false};
}

void EpsGreedyPolicy::observe(const SlotOutcome& outcome) {
  if (last_explore_) est_.observe(outcome);
}

UcbPolicy::UcbPolicy(int num_sources, double d) : k_(num_sources), d_(d), est_(num_sources) {}

int UcbPolicy::select(std::int64_t t, Rng&) {
  if (t <= k_) return static_cast<int>(t - 1);
  // Any still-unseen source goes first; unreachable after the init round.
  for (int k = 0; k < k_; ++k) {
    if (est_.arms[k].n_scheduled == 0) return k;
  }
  std::vector<double> indices(k_);
  for (int k = 0; k < k_; ++k) {
    indices[k] = ucb_index(est_.pq_hat(k), est_.p_hat(k), est_.arms[k].n_scheduled, t, d_);
  }
  return argmax_lowest(indices);
}

void UcbPolicy::observe(const SlotOutcome& outcome) { est_.observe(outcome); }

TsPolicy::TsPolicy(int num_sources, double d) : k_(num_sources), d_(d), ts_(num_sources) {}

int TsPolicy::select(std::int64_t, Rng& rng) {
  std::vector<double> score(k_);
  // Draw order (per arm: x before y) is part of the replay contract.
  for (int k = 0; k < k_; ++k) {
    const auto& a = ts_.arms[k];
    const double x = sample_beta(a.s_pq + 1, a.f_pq + 1, rng);
    const double y = sample_beta(a.s_p + 1, a.f_p + 1, rng);
    score[k] = x / (1.0 - d_ * (1.0 - y));
  }
  return argmax_lowest(score);
}

void TsPolicy::observe(const SlotOutcome& outcome) { ts_.observe(outcome); }

std::unique_ptr<Policy> make_policy(const PolicyConfig& cfg, const SystemConfig& system) {
  const int k = system.num_sources();
  switch (cfg.kind) {
    case PolicyKind::Etc:
      return std::make_unique<EtcPolicy>(k, system.d, cfg.t_explore);
    case PolicyKind::EpsGreedy:
      return std::make_unique<EpsGreedyPolicy>(k, system.d, cfg.epsilon_fixed);
    case PolicyKind::Ucb:
      return std::make_unique<UcbPolicy>(k, system.d);
    case PolicyKind::Ts:
      return std::make_unique<TsPolicy>(k, system.d);
    case PolicyKind::Oracle:
      return std::make_unique<OraclePolicy>(optimal_source(system).best_index);
  }
  throw std::invalid_argument("unknown policy kind");
}

}  // namespace aoib
