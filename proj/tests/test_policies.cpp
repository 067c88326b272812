#include <doctest.h>

#include <cmath>
#include <numeric>

#include "aoibandit/experiment.hpp"
#include "aoibandit/oracle.hpp"
#include "aoibandit/policies.hpp"

using namespace aoib;

namespace {

SlotOutcome outcome(int arm, bool transmitted, bool update) {
  SlotOutcome o;
  o.arm = arm;
  o.transmitted = transmitted;
  if (transmitted) o.update = update;
  o.age_after = transmitted ? 1 : 2;
  o.reward_after = 0.0;
  return o;
}

SystemConfig four_source_instance(std::int64_t horizon = 30000) {
  SystemConfig cfg;
  cfg.sources = {SourceParams(0.65, 0.8), SourceParams(0.7, 0.75), SourceParams(0.75, 0.7),
                 SourceParams(0.8, 0.65)};
  cfg.d = 0.8;
  cfg.horizon = horizon;
  return cfg;
}

}  // namespace

TEST_CASE("empirical quality formula matches the oracle on exact moments") {
  CHECK(empirical_mu(0.0, 0.0, 0.8) == 0.0);
  CHECK(empirical_mu(1.0, 1.0, 0.3) == 1.0);
  CHECK(empirical_mu(0.52, 0.65, 0.8) == doctest::Approx(0.7222222222222223).epsilon(1e-15));
  CHECK(empirical_mu(0.65 * 0.8, 0.65, 0.8) == doctest::Approx(mu(0.65, 0.8, 0.8)).epsilon(1e-15));
}

TEST_CASE("exploration schedule") {
  CHECK(epsilon_schedule(1, 4) == 0.0);
  CHECK(epsilon_schedule(1, 100) == 0.0);
  CHECK(epsilon_schedule(2, 4) == 1.0);  // 12 ln^2(2) / 2 = 2.88 caps at 1
  CHECK(epsilon_schedule(10000, 4) == doctest::Approx(0.10179644372118526).epsilon(1e-12));
}

TEST_CASE("estimator counters follow the observation rules") {
  EstimatorState est(2);
  est.observe(outcome(0, false, false));
  CHECK(est.arms[0].n_scheduled == 1);
  CHECK(est.arms[0].p_successes == 0);
  CHECK(est.arms[0].pq_successes == 0);

  est.observe(outcome(0, true, true));
  CHECK(est.arms[0].n_scheduled == 2);
  CHECK(est.arms[0].p_successes == 1);
  CHECK(est.arms[0].pq_successes == 1);

  est.observe(outcome(0, true, false));
  CHECK(est.arms[0].n_scheduled == 3);
  CHECK(est.arms[0].p_successes == 2);
  CHECK(est.arms[0].pq_successes == 1);

  CHECK(est.p_hat(0) == doctest::Approx(2.0 / 3.0));
  CHECK(est.pq_hat(0) == doctest::Approx(1.0 / 3.0));
  CHECK(est.p_hat(1) == 0.0);
}

TEST_CASE("round-robin explore phase, then a frozen commit") {
  Rng rng(1);
  EtcPolicy etc(4, 0.8, 8);
  for (std::int64_t t = 1; t <= 8; ++t) {
    const int arm = etc.select(t, rng);
    CHECK(arm == static_cast<int>((t - 1) % 4));
    // Make source 1 look clearly best during the explore phase.
    etc.observe(outcome(arm, arm == 1, arm == 1));
  }
  CHECK_FALSE(etc.committed().has_value());
  for (std::int64_t t = 9; t <= 20; ++t) {
    CHECK(etc.select(t, rng) == 1);
    etc.observe(outcome(1, false, false));  // post-commit outcomes are ignored
  }
  REQUIRE(etc.committed().has_value());
  CHECK(*etc.committed() == 1);
  CHECK(etc.estimator().arms[1].n_scheduled == 2);  // explore phase only
}

TEST_CASE("all-zero estimates commit to the lowest index") {
  Rng rng(1);
  EtcPolicy etc(3, 0.5, 3);
  for (std::int64_t t = 1; t <= 3; ++t) {
    etc.observe(outcome(etc.select(t, rng), false, false));
  }
  CHECK(etc.select(4, rng) == 0);
}

TEST_CASE("explore phase shorter than the source count is rejected") {
  CHECK_THROWS_AS(EtcPolicy(4, 0.5, 3), std::invalid_argument);
}

TEST_CASE("eps-greedy exploits over zero estimates at t=1") {
  Rng rng(7);
  EpsGreedyPolicy eg(4, 0.8);
  const auto first = eg.select_tagged(1, rng);
  CHECK_FALSE(first.explore);
  CHECK(first.arm == 0);
}

TEST_CASE("eps-greedy explore fraction tracks a fixed epsilon") {
  Rng rng(123);
  EpsGreedyPolicy eg(4, 0.8, 0.5);
  const int n = 100000;
  std::int64_t explored = 0;
  for (std::int64_t t = 1; t <= n; ++t) {
    const auto pick = eg.select_tagged(t, rng);
    explored += pick.explore ? 1 : 0;
    eg.observe(outcome(pick.arm, true, true));
  }
  CHECK(std::abs(static_cast<double>(explored) / n - 0.5) < 0.01);
  CHECK(eg.explore_slots() == explored);
}

TEST_CASE("eps-greedy folds observations in on explore slots only") {
  Rng rng(99);
  EpsGreedyPolicy eg(3, 0.7, 0.3);
  for (std::int64_t t = 1; t <= 5000; ++t) {
    const auto pick = eg.select_tagged(t, rng);
    eg.observe(outcome(pick.arm, true, true));
  }
  std::int64_t absorbed = 0;
  for (const auto& arm : eg.estimator().arms) absorbed += arm.n_scheduled;
  CHECK(absorbed == eg.explore_slots());
  CHECK(absorbed < 5000);  // exploit slots outnumber explore ones here
}

TEST_CASE("uniform exploration reaches every source") {
  Rng rng(2024);
  EpsGreedyPolicy eg(5, 0.5, 1.0);  // always explore
  std::vector<std::int64_t> hits(5, 0);
  const int n = 100000;
  for (std::int64_t t = 1; t <= n; ++t) {
    hits[eg.select_tagged(t, rng).arm] += 1;
  }
  for (const auto h : hits) {
    CHECK(std::abs(static_cast<double>(h) / n - 0.2) < 0.01);
  }
}

TEST_CASE("optimistic index value and clamping") {
  // sqrt(2 ln 1000 / 100) = 0.3716922..., evaluated against the formula.
  const double bonus = std::sqrt(2.0 * std::log(1000.0) / 100.0);
  const double expected = (0.5 + bonus) / (1.0 - 0.8 * (1.0 - (0.65 - bonus)));
  CHECK(ucb_index(0.5, 0.65, 100, 1000, 0.8) == doctest::Approx(expected).epsilon(1e-15));
  CHECK(ucb_index(0.5, 0.65, 100, 1000, 0.8) ==
        doctest::Approx(2.062463042483588).epsilon(1e-12));

  // When the bonus swamps p_hat the lower bound clamps at zero and the
  // denominator degenerates to 1-d.
  const double d = 0.6;
  const double small_p = 0.1;
  const double big_bonus = std::sqrt(2.0 * std::log(3.0) / 8.0);
  REQUIRE(big_bonus > small_p);
  CHECK(ucb_index(0.2, small_p, 8, 3, d) ==
        doctest::Approx((0.2 + big_bonus) / (1.0 - d)).epsilon(1e-15));

  // Indices may exceed 1; the numerator is deliberately unclipped.
  CHECK(ucb_index(0.9, 0.9, 2, 1000, 0.8) > 1.0);
}

TEST_CASE("index is optimistic for any positive bonus") {
  Rng seeds(555);
  for (int rep = 0; rep < 2000; ++rep) {
    const double p = seeds.next_u01();
    const double q = seeds.next_u01();
    const double d = 0.05 + 0.9 * seeds.next_u01();
    const std::int64_t n = 1 + static_cast<std::int64_t>(seeds.next_u01() * 1000);
    const std::int64_t t = 2 + static_cast<std::int64_t>(seeds.next_u01() * 100000);
    CHECK(ucb_index(p * q, p, n, t, d) > mu(p, q, d));
  }
}

TEST_CASE("ucb runs one initialization round then the argmax") {
  const auto cfg = four_source_instance();
  Rng rng(1);
  UcbPolicy ucb(4, cfg.d);
  for (std::int64_t t = 1; t <= 4; ++t) {
    const int arm = ucb.select(t, rng);
    CHECK(arm == static_cast<int>(t - 1));
    ucb.observe(outcome(arm, true, arm == 2));  // only source 2 delivers
  }
  CHECK(ucb.select(5, rng) == 2);

  // Exact ties resolve to the lowest index.
  UcbPolicy tied(3, 0.5);
  Rng rng2(1);
  for (std::int64_t t = 1; t <= 3; ++t) {
    tied.observe(outcome(tied.select(t, rng2), true, true));
  }
  CHECK(tied.select(4, rng2) == 0);
}

TEST_CASE("fresh thompson posteriors select uniformly") {
  Rng rng(31415);
  TsPolicy ts(4, 0.8);
  std::vector<double> counts(4, 0.0);
  const int n = 100000;
  for (int t = 1; t <= n; ++t) {
    counts[ts.select(t, rng)] += 1.0;
  }
  // Chi-squared against the uniform law; 21.1 is the df=3 tail point at 1e-4.
  double chi2 = 0.0;
  const double expected = n / 4.0;
  for (const double c : counts) chi2 += (c - expected) * (c - expected) / expected;
  CHECK(chi2 < 21.1);
}

TEST_CASE("a saturated posterior wins exactly as often as fresh optimism allows") {
  // Fresh arms draw x uniform and a denominator as low as 1-d, so each one
  // still beats a score pinned at 1 with probability d/2. The saturated arm
  // therefore wins with probability (1 - d/2)^(K-1), not almost surely.
  const double d = 0.8;
  Rng rng(2718);
  TsPolicy ts(4, d);
  for (int rep = 0; rep < 1000000; ++rep) {
    ts.observe(outcome(2, true, true));
  }
  std::int64_t wins = 0;
  const int n = 10000;
  for (int t = 1; t <= n; ++t) {
    wins += ts.select(t, rng) == 2 ? 1 : 0;
  }
  const double expected = std::pow(1.0 - d / 2.0, 3);  // 0.216
  const double tol = 4.0 * std::sqrt(expected * (1.0 - expected) / n);
  CHECK(std::abs(static_cast<double>(wins) / n - expected) < tol);
}

TEST_CASE("concentrated posteriors dominate once every arm is informative") {
  Rng rng(2719);
  TsPolicy ts(4, 0.8);
  for (int rep = 0; rep < 1000000; ++rep) {
    ts.observe(outcome(2, true, true));   // arm 2: always delivers, always right
    for (const int bad : {0, 1, 3}) {
      ts.observe(outcome(bad, false, false));  // the rest never get through
    }
  }
  std::int64_t wins = 0;
  const int n = 10000;
  for (int t = 1; t <= n; ++t) {
    wins += ts.select(t, rng) == 2 ? 1 : 0;
  }
  CHECK(static_cast<double>(wins) / n > 0.99);
}

TEST_CASE("thompson posterior updates") {
  TsState ts(2);
  ts.observe(outcome(0, false, false));
  CHECK(ts.arms[0].s_pq == 0);
  CHECK(ts.arms[0].f_pq == 1);
  CHECK(ts.arms[0].s_p == 0);
  CHECK(ts.arms[0].f_p == 1);

  ts.observe(outcome(0, true, true));
  CHECK(ts.arms[0].s_pq == 1);
  CHECK(ts.arms[0].f_pq == 1);
  CHECK(ts.arms[0].s_p == 1);
  CHECK(ts.arms[0].f_p == 1);

  ts.observe(outcome(0, true, false));
  CHECK(ts.arms[0].s_pq == 1);
  CHECK(ts.arms[0].f_pq == 2);
  CHECK(ts.arms[0].s_p == 2);
  CHECK(ts.arms[0].f_p == 1);

  // Posterior mass equals the slots scheduled, per process.
  CHECK(ts.arms[0].s_pq + ts.arms[0].f_pq == 3);
  CHECK(ts.arms[0].s_p + ts.arms[0].f_p == 3);
  CHECK(ts.arms[0].s_pq <= ts.arms[0].s_p);
}

TEST_CASE("estimator concentrates on the true moments") {
  const double p = 0.65;
  const double q = 0.8;
  const int n = 10000;
  Rng env(13);
  EstimatorState est(1);
  MonitorState state;
  for (int t = 0; t < n; ++t) {
    est.observe(simulate_slot(state, 0, SourceParams(p, q), 0.8, env));
  }
  const double tol = 4.0 * std::sqrt(std::log(static_cast<double>(n)) / n);
  CHECK(std::abs(est.p_hat(0) - p) <= tol);
  CHECK(std::abs(est.pq_hat(0) - p * q) <= tol);
}

TEST_CASE("explore-and-commit finds the best source almost always") {
  auto cfg = four_source_instance(9001);
  PolicyConfig pc;
  pc.kind = PolicyKind::Etc;
  pc.t_explore = 9000;
  int correct = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const auto result = run_trial(cfg, pc, derive_trial_seed(606, trial), true);
    REQUIRE(result.committed_arm.has_value());
    correct += *result.committed_arm == 0 ? 1 : 0;
  }
  CHECK(correct >= 190);
}
