#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "aoibandit/bounds.hpp"
#include "aoibandit/experiment.hpp"
#include "aoibandit/model.hpp"
#include "aoibandit/oracle.hpp"
#include "aoibandit/policies.hpp"
#include "aoibandit/validation.hpp"

namespace py = pybind11;

namespace {

aoib::SystemConfig make_system(const std::vector<double>& p, const std::vector<double>& q,
                               double d, std::int64_t horizon, std::uint64_t seed) {
  if (p.size() != q.size()) {
    throw std::invalid_argument("p and q must have the same length");
  }
  aoib::SystemConfig cfg;
  for (std::size_t k = 0; k < p.size(); ++k) cfg.sources.emplace_back(p[k], q[k]);
  cfg.d = d;
  cfg.horizon = horizon;
  cfg.seed = seed;
  cfg.validate();
  return cfg;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Scheduling of inaccurate sources over an unreliable channel: "
            "slot dynamics, bandit policies, regret experiments and bounds.";

  py::register_exception<aoib::DegenerateGapError>(m, "DegenerateGapError",
                                                   PyExc_ArithmeticError);

  py::enum_<aoib::PolicyKind>(m, "PolicyKind")
      .value("ETC", aoib::PolicyKind::Etc)
      .value("EPS_GREEDY", aoib::PolicyKind::EpsGreedy)
      .value("UCB", aoib::PolicyKind::Ucb)
      .value("TS", aoib::PolicyKind::Ts)
      .value("ORACLE", aoib::PolicyKind::Oracle);

  py::class_<aoib::SourceParams>(m, "SourceParams")
      .def(py::init<double, double>(), py::arg("p"), py::arg("q"))
      .def_readonly("p", &aoib::SourceParams::p)
      .def_readonly("q", &aoib::SourceParams::q);

  py::class_<aoib::SystemConfig>(m, "SystemConfig")
      .def(py::init(&make_system), py::arg("p"), py::arg("q"), py::arg("d"),
           py::arg("horizon"), py::arg("seed") = 1)
      .def_readonly("sources", &aoib::SystemConfig::sources)
      .def_readonly("d", &aoib::SystemConfig::d)
      .def_readonly("horizon", &aoib::SystemConfig::horizon)
      .def_readonly("seed", &aoib::SystemConfig::seed)
      .def_property_readonly("num_sources", &aoib::SystemConfig::num_sources);

  py::class_<aoib::PolicyConfig>(m, "PolicyConfig")
      .def(py::init([](aoib::PolicyKind kind, std::int64_t te, std::optional<double> epsilon) {
             aoib::PolicyConfig cfg;
             cfg.kind = kind;
             cfg.t_explore = te;
             cfg.epsilon_fixed = epsilon;
             return cfg;
           }),
           py::arg("kind"), py::arg("te") = 0, py::arg("epsilon") = std::nullopt)
      .def_readonly("kind", &aoib::PolicyConfig::kind)
      .def_readonly("te", &aoib::PolicyConfig::t_explore)
      .def_readonly("epsilon", &aoib::PolicyConfig::epsilon_fixed);

  py::class_<aoib::ArmQuality>(m, "ArmQuality")
      .def_readonly("mu", &aoib::ArmQuality::mu)
      .def_readonly("best_index", &aoib::ArmQuality::best_index)
      .def_readonly("gap", &aoib::ArmQuality::gap);

  py::class_<aoib::SlotOutcome>(m, "SlotOutcome")
      .def_readonly("arm", &aoib::SlotOutcome::arm)
      .def_readonly("transmitted", &aoib::SlotOutcome::transmitted)
      .def_readonly("update", &aoib::SlotOutcome::update)
      .def_readonly("age_after", &aoib::SlotOutcome::age_after)
      .def_readonly("reward_after", &aoib::SlotOutcome::reward_after);

  m.def(
      "run_oracle",
      [](const aoib::SystemConfig& config, std::uint64_t seed, std::int64_t warmup) {
        aoib::Rng env(aoib::derive_stream_seed(seed, aoib::StreamRole::OracleEnv));
        return aoib::run_oracle(config, env, warmup);
      },
      py::arg("config"), py::arg("seed"), py::arg("warmup") = 0,
      "Trace of the always-schedule-the-best baseline.");

  m.def("mu", &aoib::mu, py::arg("p"), py::arg("q"), py::arg("d"),
        "Steady-state expected reward of always scheduling one source.");
  m.def("optimal_source", &aoib::optimal_source, py::arg("config"));
  m.def("empirical_mu", &aoib::empirical_mu, py::arg("pq_hat"), py::arg("p_hat"), py::arg("d"));
  m.def("epsilon_schedule", &aoib::epsilon_schedule, py::arg("t"), py::arg("num_sources"));
  m.def("ucb_index", &aoib::ucb_index, py::arg("pq_hat"), py::arg("p_hat"), py::arg("n"),
        py::arg("t"), py::arg("d"));
  m.def("bernoulli_kl", &aoib::bernoulli_kl, py::arg("a"), py::arg("b"));

  py::class_<aoib::InstanceConstants>(m, "InstanceConstants")
      .def_readonly("num_sources", &aoib::InstanceConstants::num_sources)
      .def_readonly("best_index", &aoib::InstanceConstants::best_index)
      .def_readonly("mu_star", &aoib::InstanceConstants::mu_star)
      .def_readonly("mu_min", &aoib::InstanceConstants::mu_min)
      .def_readonly("p_min", &aoib::InstanceConstants::p_min)
      .def_readonly("q_min", &aoib::InstanceConstants::q_min)
      .def_readonly("delta", &aoib::InstanceConstants::delta)
      .def_readonly("delta_p", &aoib::InstanceConstants::delta_p)
      .def_readonly("c", &aoib::InstanceConstants::c);

  m.def("instance_constants", &aoib::instance_constants, py::arg("config"));
  m.def("etc_upper_bound", &aoib::etc_upper_bound, py::arg("horizon"), py::arg("alpha"),
        py::arg("constants"));

  py::class_<aoib::EgBound>(m, "EgBound")
      .def_readonly("value", &aoib::EgBound::value)
      .def_readonly("terms", &aoib::EgBound::terms)
      .def_readonly("diagnostics", &aoib::EgBound::diagnostics);

  m.def("eg_upper_bound", &aoib::eg_upper_bound, py::arg("horizon"), py::arg("alpha"),
        py::arg("constants"));

  py::class_<aoib::LowerBoundResult>(m, "LowerBoundResult")
      .def_readonly("learning_term", &aoib::LowerBoundResult::learning_term)
      .def_readonly("linear_term", &aoib::LowerBoundResult::linear_term)
      .def_readonly("value", &aoib::LowerBoundResult::value)
      .def_readonly("diagnostics", &aoib::LowerBoundResult::diagnostics);

  m.def("lower_bound", &aoib::lower_bound, py::arg("horizon"), py::arg("gamma"), py::arg("C"),
        py::arg("constants"));

  py::class_<aoib::TeSchedule>(m, "TeSchedule")
      .def_readonly("t_explore", &aoib::TeSchedule::t_explore)
      .def_readonly("clamped", &aoib::TeSchedule::clamped)
      .def_readonly("raw", &aoib::TeSchedule::raw);

  m.def("etc_te_schedule", &aoib::etc_te_schedule, py::arg("horizon"), py::arg("constants"));

  py::class_<aoib::TrialResult>(m, "TrialResult")
      .def_readonly("regret", &aoib::TrialResult::regret)
      .def_readonly("pulls", &aoib::TrialResult::pulls)
      .def_readonly("committed_arm", &aoib::TrialResult::committed_arm);

  m.def(
      "run_trial",
      [](const aoib::SystemConfig& system, const aoib::PolicyConfig& policy,
         std::uint64_t trial_seed, bool coupled, std::int64_t oracle_warmup) {
        return aoib::run_trial(system, policy, trial_seed, coupled, false, oracle_warmup);
      },
      py::arg("system"), py::arg("policy"), py::arg("trial_seed"), py::arg("coupled") = true,
      py::arg("oracle_warmup") = 0);

  py::class_<aoib::RegretSeries>(m, "RegretSeries")
      .def_readonly("instantaneous", &aoib::RegretSeries::instantaneous)
      .def_readonly("cumulative", &aoib::RegretSeries::cumulative)
      .def_readonly("stderr", &aoib::RegretSeries::std_error)
      .def_readonly("n_trials", &aoib::RegretSeries::n_trials);

  py::class_<aoib::MonteCarloResult>(m, "MonteCarloResult")
      .def_readonly("series", &aoib::MonteCarloResult::series)
      .def_readonly("total_pulls", &aoib::MonteCarloResult::total_pulls)
      .def_readonly("commit_counts", &aoib::MonteCarloResult::commit_counts);

  m.def(
      "monte_carlo",
      [](const aoib::SystemConfig& system, const aoib::PolicyConfig& policy,
         std::int64_t n_trials, std::uint64_t base_seed, bool coupled, int threads,
         std::int64_t oracle_warmup) {
        aoib::McOptions opts;
        opts.coupled = coupled;
        opts.threads = threads;
        opts.oracle_warmup = oracle_warmup;
        return aoib::monte_carlo(system, policy, n_trials, base_seed, opts);
      },
      py::arg("system"), py::arg("policy"), py::arg("n_trials"), py::arg("base_seed"),
      py::arg("coupled") = true, py::arg("threads") = 0, py::arg("oracle_warmup") = 0);

  py::enum_<aoib::SweepAxis>(m, "SweepAxis")
      .value("DELTA_CASES", aoib::SweepAxis::DeltaCases)
      .value("P_CASES", aoib::SweepAxis::PCases)
      .value("Q_CASES", aoib::SweepAxis::QCases)
      .value("D_GRID", aoib::SweepAxis::DGrid);

  py::class_<aoib::SweepRow>(m, "SweepRow")
      .def_readonly("case_index", &aoib::SweepRow::case_index)
      .def_readonly("case_label", &aoib::SweepRow::case_label)
      .def_readonly("delta", &aoib::SweepRow::delta)
      .def_readonly("policy", &aoib::SweepRow::policy)
      .def_readonly("checkpoint", &aoib::SweepRow::checkpoint)
      .def_readonly("cum_regret", &aoib::SweepRow::cum_regret)
      .def_readonly("stderr", &aoib::SweepRow::std_error);

  m.def(
      "sweep",
      [](const aoib::SystemConfig& base, aoib::SweepAxis axis,
         const std::vector<std::vector<double>>& cases, std::int64_t checkpoint,
         const std::vector<aoib::PolicyConfig>& policies, std::int64_t n_trials,
         std::uint64_t base_seed, bool coupled, int threads) {
        aoib::SweepSpec spec;
        spec.axis = axis;
        spec.cases = cases;
        spec.checkpoint = checkpoint;
        aoib::McOptions opts;
        opts.coupled = coupled;
        opts.threads = threads;
        return aoib::sweep(base, spec, policies, n_trials, base_seed, opts);
      },
      py::arg("base"), py::arg("axis"), py::arg("cases"), py::arg("checkpoint"),
      py::arg("policies"), py::arg("n_trials"), py::arg("base_seed"), py::arg("coupled") = true,
      py::arg("threads") = 0);

  m.def(
      "validate",
      [](const aoib::SystemConfig& system, const std::string& level, int threads) {
        const auto lvl =
            level == "full" ? aoib::ValidationLevel::Full : aoib::ValidationLevel::Fast;
        const auto results = aoib::run_validation(system, lvl, threads);
        std::vector<std::tuple<std::string, bool, std::string>> out;
        out.reserve(results.size());
        for (const auto& r : results) out.emplace_back(r.name, r.passed, r.detail);
        return out;
      },
      py::arg("system"), py::arg("level") = "fast", py::arg("threads") = 0);
}
