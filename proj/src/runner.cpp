#include "aoibandit/runner.hpp"

#include <charconv>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <ostream>

#include <json.hpp>

#include "aoibandit/bounds.hpp"

namespace aoib {

namespace {

using json = nlohmann::ordered_json;

}  // namespace

std::string format_double(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value, std::chars_format::general, 17);
  std::string out(buf, res.ptr);
  // Plain integers gain a trailing ".0" so reward/regret columns always read
  // as floating point.
  if (out.find_first_of(".eEnN") == std::string::npos) out += ".0";
  return out;
}

namespace {

void ensure_parent_dir(const std::string& prefix) {
  const std::filesystem::path parent = std::filesystem::path(prefix).parent_path();
  if (!parent.empty()) std::filesystem::create_directories(parent);
}

std::ofstream open_artifact(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  return out;
}

json config_json(const ExperimentFile& file) {
  json cfg;
  json p = json::array();
  json q = json::array();
  for (const auto& s : file.system.sources) {
    p.push_back(s.p);
    q.push_back(s.q);
  }
  cfg["p"] = p;
  cfg["q"] = q;
  cfg["d"] = file.system.d;
  cfg["horizon"] = file.system.horizon;
  cfg["seed"] = file.system.seed;
  cfg["trials"] = file.trials;
  cfg["coupled"] = file.coupled;
  cfg["warmup"] = file.oracle_warmup;
  cfg["output"] = file.output_prefix;
  json policies = json::array();
  for (const auto& pc : file.policies) {
    json entry;
    entry["kind"] = std::string(policy_name(pc.kind));
    if (pc.kind == PolicyKind::Etc) {
      entry["te"] = pc.t_explore == 0 ? json(nullptr) : json(pc.t_explore);
    }
    if (pc.kind == PolicyKind::EpsGreedy && pc.epsilon_fixed) {
      entry["epsilon"] = *pc.epsilon_fixed;
    }
    policies.push_back(entry);
  }
  cfg["policies"] = policies;
  if (file.sweep) {
    json sweep;
    sweep["axis"] = std::string(sweep_axis_name(file.sweep->axis));
    sweep["cases"] = file.sweep->cases;
    sweep["checkpoint"] =
        file.sweep->checkpoint == 0 ? file.system.horizon : file.sweep->checkpoint;
    cfg["sweep"] = sweep;
  }
  return cfg;
}

std::string series_csv_path(const ExperimentFile& file, PolicyKind kind) {
  return file.output_prefix + "_" + std::string(policy_name(kind)) + ".csv";
}

void write_series_csv(const std::string& path, const RegretSeries& series) {
  auto out = open_artifact(path);
  out << "t,instantaneous_regret,cumulative_regret,stderr\n";
  for (std::size_t i = 0; i < series.instantaneous.size(); ++i) {
    out << (i + 1) << ',' << format_double(series.instantaneous[i]) << ','
        << format_double(series.cumulative[i]) << ',' << format_double(series.std_error[i])
        << '\n';
  }
}

}  // namespace

int cmd_simulate(const ExperimentFile& file, std::ostream& log, const RunnerOptions& opts) {
  ensure_parent_dir(file.output_prefix);

  json summary;
  summary["config"] = config_json(file);
  json results;

  McOptions mc_opts;
  mc_opts.coupled = file.coupled;
  mc_opts.threads = opts.threads;
  mc_opts.oracle_warmup = file.oracle_warmup;

  for (const auto& policy_cfg : file.policies) {
    const auto resolved = resolve_policy(policy_cfg, file.system);
    const auto start = std::chrono::steady_clock::now();
    const auto mc = monte_carlo(file.system, resolved, file.trials, file.system.seed, mc_opts);
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    const std::string csv_path = series_csv_path(file, resolved.kind);
    write_series_csv(csv_path, mc.series);

    json entry;
    entry["final_cumulative_regret"] = mc.series.cumulative.back();
    entry["arm_pull_counts"] = mc.total_pulls;
    if (resolved.kind == PolicyKind::Etc) {
      entry["te"] = resolved.t_explore;
      entry["commit_counts"] = mc.commit_counts;
      int modal = 0;
      for (int k = 1; k < static_cast<int>(mc.commit_counts.size()); ++k) {
        if (mc.commit_counts[k] > mc.commit_counts[modal]) modal = k;
      }
      entry["committed_arm"] = modal;
    } else {
      entry["committed_arm"] = nullptr;
    }
    entry["wall_time_seconds"] = elapsed;
    results[std::string(policy_name(resolved.kind))] = entry;

    log << policy_name(resolved.kind) << ": cumulative regret "
        << format_double(mc.series.cumulative.back()) << " at t=" << file.system.horizon
        << " (" << file.trials << " trials, " << csv_path << ")\n";
  }

  summary["results"] = results;
  const std::string summary_path = file.output_prefix + "_summary.json";
  auto out = open_artifact(summary_path);
  out << summary.dump(2) << '\n';
  log << "summary: " << summary_path << "\n";
  return 0;
}

int cmd_sweep(const ExperimentFile& file, std::ostream& log, const RunnerOptions& opts) {
  if (!file.sweep) {
    throw ConfigError(ConfigErrorCode::BadSweep, 0, "config has no sweep block");
  }
  ensure_parent_dir(file.output_prefix);

  McOptions mc_opts;
  mc_opts.coupled = file.coupled;
  mc_opts.threads = opts.threads;
  mc_opts.oracle_warmup = file.oracle_warmup;

  const auto rows =
      sweep(file.system, *file.sweep, file.policies, file.trials, file.system.seed, mc_opts);

  const std::string csv_path = file.output_prefix + "_sweep.csv";
  auto out = open_artifact(csv_path);
  out << "case,label,delta,policy,checkpoint,cumulative_regret,stderr\n";
  for (const auto& row : rows) {
    out << row.case_index << ',' << row.case_label << ',' << format_double(row.delta) << ','
        << policy_name(row.policy) << ',' << row.checkpoint << ','
        << format_double(row.cum_regret) << ',' << format_double(row.std_error) << '\n';
    log << "case " << row.case_index << " (" << row.case_label << ", delta "
        << format_double(row.delta) << ") " << policy_name(row.policy) << ": "
        << format_double(row.cum_regret) << " +/- " << format_double(row.std_error) << "\n";
  }
  log << "table: " << csv_path << "\n";
  return 0;
}

int cmd_bounds(const ExperimentFile& file, double alpha, double gamma, double C,
               std::ostream& log) {
  if (!(alpha > 1.0)) {
    throw ConfigError(ConfigErrorCode::ValueOutOfRange, 0, "alpha must exceed 1");
  }
  if (!(gamma > 0.0 && gamma < 1.0)) {
    throw ConfigError(ConfigErrorCode::ValueOutOfRange, 0, "gamma must lie in (0,1)");
  }
  if (!(C > 0.0)) {
    throw ConfigError(ConfigErrorCode::ValueOutOfRange, 0, "C must be positive");
  }
  ensure_parent_dir(file.output_prefix);

  const auto consts = instance_constants(file.system);
  const auto quality = optimal_source(file.system);

  json report;
  json inputs;
  inputs["alpha"] = alpha;
  inputs["gamma"] = gamma;
  inputs["C"] = C;
  report["config"] = config_json(file);
  report["inputs"] = inputs;

  json constants;
  constants["mu"] = quality.mu;
  constants["best_index"] = consts.best_index;
  constants["mu_star"] = consts.mu_star;
  constants["mu_min"] = consts.mu_min;
  constants["p_min"] = consts.p_min;
  constants["q_min"] = consts.q_min;
  if (consts.delta) {
    constants["delta"] = *consts.delta;
    constants["delta_p"] = *consts.delta_p;
    constants["delta_p_negative"] = *consts.delta_p < 0.0;
    constants["c"] = *consts.c;
  }
  report["constants"] = constants;

  if (consts.c) {
    const auto te = etc_te_schedule(file.system.horizon, consts);
    json schedule;
    schedule["raw"] = te.raw;
    schedule["t_explore"] = te.t_explore;
    schedule["clamped"] = te.clamped;
    report["te_schedule"] = schedule;

    report["etc_upper_bound"] = etc_upper_bound(file.system.horizon, alpha, consts);

    try {
      const auto eg = eg_upper_bound(file.system.horizon, alpha, consts);
      json eg_json;
      eg_json["value"] = eg.value;
      eg_json["terms"] = eg.terms;
      eg_json["diagnostics"] = eg.diagnostics;
      report["eps_greedy_upper_bound"] = eg_json;
    } catch (const std::domain_error& err) {
      json eg_json;
      eg_json["domain_error"] = err.what();
      report["eps_greedy_upper_bound"] = eg_json;
    }
  }

  const auto lb = lower_bound(file.system.horizon, gamma, C, consts);
  json lb_json;
  lb_json["learning_term"] = lb.learning_term;
  lb_json["linear_term"] = lb.linear_term;
  lb_json["value"] = lb.value;
  lb_json["diagnostics"] = lb.diagnostics;
  report["lower_bound"] = lb_json;

  const std::string path = file.output_prefix + "_bounds.json";
  auto out = open_artifact(path);
  out << report.dump(2) << '\n';
  log << report.dump(2) << "\n";
  log << "report: " << path << "\n";
  return 0;
}

int cmd_validate(const ExperimentFile& file, ValidationLevel level, std::ostream& log,
                 const RunnerOptions& opts) {
  const auto results = run_validation(file.system, level, opts.threads);
  bool all_passed = true;
  for (const auto& check : results) {
    log << (check.passed ? "[ok]   " : "[FAIL] ") << check.name;
    if (!check.passed || check.detail != "ok") log << ": " << check.detail;
    log << "\n";
    all_passed = all_passed && check.passed;
  }
  log << (all_passed ? "all checks passed" : "validation failed") << "\n";
  return all_passed ? 0 : 1;
}

}  // namespace aoib
