#pragma once

#include <memory>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "aoibandit/model.hpp"
#include "aoibandit/rng.hpp"

namespace aoib {

enum class PolicyKind { Etc, EpsGreedy, Ucb, Ts, Oracle };

std::string_view policy_name(PolicyKind kind);
std::optional<PolicyKind> policy_from_name(std::string_view name);

struct PolicyConfig {
  PolicyKind kind = PolicyKind::Ts;
  std::int64_t t_explore = 0;           // ETC; 0 means "derive from the c*ln(T) schedule"
  std::optional<double> epsilon_fixed;  // eps-greedy: constant override of the decaying schedule
};

// mu estimate from empirical moments: pq_hat / (1 - d*(1 - p_hat)).
// Reproduces the exact per-source quality when fed exact moments.
double empirical_mu(double pq_hat, double p_hat, double d);

// Exploration probability min{1, 3K ln^2(t) / t}; zero at t = 1.
double epsilon_schedule(std::int64_t t, int num_sources);

// Optimistic index: inflated pq estimate over a deflated transmission
// estimate. The numerator is left unclipped (indices may exceed 1); the lower
// confidence bound on p is clamped at zero.
double ucb_index(double pq_hat, double p_hat, std::int64_t n, std::int64_t t, double d);

// Lowest index wins ties so traces replay identically everywhere.
int argmax_lowest(std::span<const double> values);

// Shared success counters for ETC, eps-greedy and UCB. Per source:
// slots scheduled, successful transmissions, and transmissions that also
// carried an accurate measurement.
struct EstimatorState {
  struct Counts {
    std::int64_t pq_successes = 0;
    std::int64_t p_successes = 0;
    std::int64_t n_scheduled = 0;
  };
  std::vector<Counts> arms;

  explicit EstimatorState(int num_sources) : arms(num_sources) {}
  void observe(const SlotOutcome& outcome);
  double pq_hat(int arm) const;
  double p_hat(int arm) const;
};

// Beta posterior counters for Thompson sampling. A failed transmission counts
// as a failure of both processes.
struct TsState {
  struct Counts {
    std::int64_t s_pq = 0;
    std::int64_t f_pq = 0;
    std::int64_t s_p = 0;
    std::int64_t f_p = 0;
  };
  std::vector<Counts> arms;

  explicit TsState(int num_sources) : arms(num_sources) {}
  void observe(const SlotOutcome& outcome);
};

class Policy {
 public:
  virtual ~Policy() = default;
  // Slot indices are 1-based and must be fed in increasing order.
  virtual int select(std::int64_t t, Rng& rng) = 0;
  virtual void observe(const SlotOutcome& outcome) = 0;
  virtual PolicyKind kind() const = 0;
};

// Round-robin for t_explore slots, then permanent commitment to the
// empirically best source. Estimates absorb explore-phase outcomes only.
class EtcPolicy final : public Policy {
 public:
  EtcPolicy(int num_sources, double d, std::int64_t t_explore);

  int select(std::int64_t t, Rng& rng) override;
  void observe(const SlotOutcome& outcome) override;
  PolicyKind kind() const override { return PolicyKind::Etc; }

  std::int64_t t_explore() const { return t_explore_; }
  std::optional<int> committed() const { return committed_; }
  const EstimatorState& estimator() const { return est_; }

 private:
  int k_;
  double d_;
  std::int64_t t_explore_;
  EstimatorState est_;
  std::optional<int> committed_;
  bool exploring_ = true;
};

struct EgSelection {
  int arm = 0;
  bool explore = false;
};

// Explores a uniformly random source with probability eps_t, exploits the
// empirically best one otherwise. Estimates absorb explore-slot outcomes
// only; exploit observations are deliberately discarded.
class EpsGreedyPolicy final : public Policy {
 public:
  EpsGreedyPolicy(int num_sources, double d, std::optional<double> epsilon_fixed = {});

  EgSelection select_tagged(std::int64_t t, Rng& rng);
  int select(std::int64_t t, Rng& rng) override { return select_tagged(t, rng).arm; }
  void observe(const SlotOutcome& outcome) override;
  PolicyKind kind() const override { return PolicyKind::EpsGreedy; }

  std::int64_t explore_slots() const { return explore_slots_; }
  const EstimatorState& estimator() const { return est_; }

 private:
  int k_;
  double d_;
  std::optional<double> epsilon_fixed_;
  EstimatorState est_;
  std::int64_t explore_slots_ = 0;
  bool last_explore_ = false;
};

class UcbPolicy final : public Policy {
 public:
  UcbPolicy(int num_sources, double d);

  int select(std::int64_t t, Rng& rng) override;
  void observe(const SlotOutcome& outcome) override;
  PolicyKind kind() const override { return PolicyKind::Ucb; }

  const EstimatorState& estimator() const { return est_; }

 private:
  int k_;
  double d_;
  EstimatorState est_;
};

class TsPolicy final : public Policy {
 public:
  TsPolicy(int num_sources, double d);

  int select(std::int64_t t, Rng& rng) override;
  void observe(const SlotOutcome& outcome) override;
  PolicyKind kind() const override { return PolicyKind::Ts; }

  const TsState& state() const { return ts_; }

 private:
  int k_;
  double d_;
  TsState ts_;
};

// Schedules a fixed source every slot; the baseline and self-test policy.
class OraclePolicy final : public Policy {
 public:
  explicit OraclePolicy(int best_index) : best_(best_index) {}

  int select(std::int64_t, Rng&) override { return best_; }
  void observe(const SlotOutcome&) override {}
  PolicyKind kind() const override { return PolicyKind::Oracle; }

 private:
  int best_;
};

// ETC configs must carry a resolved t_explore (>= K); see resolve_policy in
// experiment.hpp for the schedule-derived default.
std::unique_ptr<Policy> make_policy(const PolicyConfig& cfg, const SystemConfig& system);

}  // namespace aoib
