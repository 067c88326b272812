#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "aoibandit/bounds.hpp"
#include "aoibandit/model.hpp"
#include "aoibandit/oracle.hpp"
#include "aoibandit/policies.hpp"

namespace aoib {

struct TrialResult {
  std::vector<double> regret;        // r*(t) - r^P(t), index t-1
  std::vector<std::int64_t> pulls;   // policy-side pulls per source
  std::optional<int> committed_arm;  // ETC only, once the commit happened
  std::vector<SlotOutcome> policy_trace;  // filled when keep_traces is set
  std::vector<SlotOutcome> oracle_trace;
};

struct RegretSeries {
  std::vector<double> instantaneous;  // per-slot mean over trials
  std::vector<double> cumulative;     // compensated running sum of the mean
  std::vector<double> std_error;      // per-slot standard error of the mean
  std::int64_t n_trials = 0;
};

struct MonteCarloResult {
  RegretSeries series;
  std::vector<std::int64_t> total_pulls;    // summed over trials
  std::vector<std::int64_t> commit_counts;  // ETC: committed-arm histogram
};

struct McOptions {
  bool coupled = true;
  int threads = 0;  // 0 = hardware concurrency; results identical either way
  std::uint64_t trial_offset = 0;
  std::int64_t oracle_warmup = 0;
};

struct TeSchedule {
  std::int64_t t_explore = 0;
  bool clamped = false;
  double raw = 0.0;  // c * ln(T) before rounding and clamping
};

// round(c * ln(T)) clamped to [K, T-1]. Single-source instances have no c and
// get the minimal explore phase of one slot.
TeSchedule etc_te_schedule(std::int64_t horizon, const InstanceConstants& consts);

// Fills the schedule-derived explore duration for ETC configs that carry
// none, then checks the K <= t_explore < horizon invariant.
PolicyConfig resolve_policy(PolicyConfig cfg, const SystemConfig& system);

// Simulates the policy and the oracle over the same horizon. When coupled,
// both trajectories consume the shared uniform streams (channel success iff
// U(t) < p of the scheduled source, accuracy iff V(t) < q), and V(t) advances
// every slot so the two stay aligned on the same stream index. When
// uncoupled, each side owns an independent stream with the lazy draw
// discipline.
TrialResult run_trial(const SystemConfig& system, const PolicyConfig& policy_cfg,
                      std::uint64_t trial_seed, bool coupled,
                      bool keep_traces = false, std::int64_t oracle_warmup = 0);

// Trial seeds derive deterministically from (base_seed, trial_offset + i).
// Per-slot means reduce over trials through a fixed pairwise tree, so results
// are bit-identical for any thread count and pooled runs merge exactly.
MonteCarloResult monte_carlo(const SystemConfig& system, const PolicyConfig& policy_cfg,
                             std::int64_t n_trials, std::uint64_t base_seed,
                             const McOptions& opts = {});

enum class SweepAxis { DeltaCases, PCases, QCases, DGrid };

std::string_view sweep_axis_name(SweepAxis axis);
std::optional<SweepAxis> sweep_axis_from_name(std::string_view name);

struct SweepSpec {
  SweepAxis axis = SweepAxis::QCases;
  // Per-case payload: a replacement p or q vector, or a single d value.
  // delta_cases replaces q; rows are labeled with the resulting gap.
  std::vector<std::vector<double>> cases;
  std::int64_t checkpoint = 0;  // 0 = horizon
};

struct SweepRow {
  int case_index = 0;
  std::string case_label;
  double delta = 0.0;  // top-two quality gap of the case instance
  PolicyKind policy = PolicyKind::Ts;
  std::int64_t checkpoint = 0;
  double cum_regret = 0.0;  // mean cumulative regret at the checkpoint
  double std_error = 0.0;   // standard error of that mean over trials
};

// One row per (case, policy); deterministic given base_seed. All cases share
// the base seed so the axis is compared under common random numbers.
std::vector<SweepRow> sweep(const SystemConfig& base, const SweepSpec& spec,
                            const std::vector<PolicyConfig>& policies,
                            std::int64_t n_trials, std::uint64_t base_seed,
                            const McOptions& opts = {});

// Builds the per-case system configuration for a sweep axis.
SystemConfig apply_sweep_case(const SystemConfig& base, SweepAxis axis,
                              const std::vector<double>& payload);

}  // namespace aoib
