#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "aoibandit/runner.hpp"

namespace {

struct Overrides {
  std::optional<std::int64_t> trials;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> coupled;
  std::optional<std::int64_t> te;
  std::optional<std::string> output;
};

void apply_overrides(aoib::ExperimentFile& file, const Overrides& ov) {
  using aoib::ConfigError;
  using aoib::ConfigErrorCode;
  if (ov.trials) {
    if (*ov.trials < 1) throw ConfigError(ConfigErrorCode::ValueOutOfRange, 0, "trials must be at least 1");
    file.trials = *ov.trials;
  }
  if (ov.seed) file.system.seed = *ov.seed;
  if (ov.coupled) {
    if (*ov.coupled == "on") {
      file.coupled = true;
    } else if (*ov.coupled == "off") {
      file.coupled = false;
    } else {
      throw ConfigError(ConfigErrorCode::BadValue, 0, "--coupled takes on|off");
    }
  }
  if (ov.te) {
    if (*ov.te >= file.system.horizon) {
      throw ConfigError(ConfigErrorCode::ExploreTooLong, 0,
                        "explore phase must end before the horizon");
    }
    if (*ov.te < file.system.num_sources()) {
      throw ConfigError(ConfigErrorCode::ValueOutOfRange, 0,
                        "explore phase must cover every source at least once");
    }
    for (auto& pc : file.policies) {
      if (pc.kind == aoib::PolicyKind::Etc) pc.t_explore = *ov.te;
    }
  }
  if (ov.output) file.output_prefix = *ov.output;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Simulator and policy library for scheduling inaccurate sources "
               "over an unreliable channel"};
  app.require_subcommand(1);

  std::string config_path;
  Overrides overrides;
  int threads = 0;
  double alpha = 1.1;
  double gamma = 0.5;
  double big_c = 1.0;
  std::string level = "fast";

  const auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("config", config_path, "experiment config file")->required();
    cmd->add_option("--trials", overrides.trials, "override trial count");
    cmd->add_option("--seed", overrides.seed, "override base RNG seed");
    cmd->add_option("--coupled", overrides.coupled, "share environment draws: on|off");
    cmd->add_option("--te", overrides.te, "override the ETC explore duration");
    cmd->add_option("--output", overrides.output, "override the artifact path prefix");
    cmd->add_option("--threads", threads, "worker threads (0 = all cores)");
  };

  CLI::App* simulate = app.add_subcommand("simulate", "run the configured policies and "
                                                      "write per-slot regret CSVs");
  add_common(simulate);

  CLI::App* sweep = app.add_subcommand("sweep", "run the configured sweep and write the "
                                                "checkpoint-regret table");
  add_common(sweep);

  CLI::App* bounds = app.add_subcommand("bounds", "evaluate the regret bounds for the "
                                                  "configured instance");
  bounds->add_option("config", config_path, "experiment config file")->required();
  bounds->add_option("--alpha", alpha, "bound hyperparameter, must exceed 1");
  bounds->add_option("--gamma", gamma, "consistency exponent in (0,1)");
  bounds->add_option("--C", big_c, "consistency constant, positive");
  bounds->add_option("--output", overrides.output, "override the artifact path prefix");

  CLI::App* validate = app.add_subcommand("validate", "run the invariant suite");
  validate->add_option("config", config_path, "experiment config file")->required();
  validate->add_option("--level", level, "fast|full")->check(CLI::IsMember({"fast", "full"}));
  validate->add_option("--threads", threads, "worker threads (0 = all cores)");

  CLI11_PARSE(app, argc, argv);

  try {
    aoib::ExperimentFile file = aoib::parse_config(config_path);
    apply_overrides(file, overrides);
    aoib::RunnerOptions opts;
    opts.threads = threads;

    if (simulate->parsed()) return aoib::cmd_simulate(file, std::cout, opts);
    if (sweep->parsed()) return aoib::cmd_sweep(file, std::cout, opts);
    if (bounds->parsed()) return aoib::cmd_bounds(file, alpha, gamma, big_c, std::cout);
    if (validate->parsed()) {
      const auto lvl = level == "full" ? aoib::ValidationLevel::Full : aoib::ValidationLevel::Fast;
      return aoib::cmd_validate(file, lvl, std::cout, opts);
    }
  } catch (const aoib::ConfigError& err) {
    std::cerr << "config error [" << aoib::config_error_name(err.code()) << "]: " << err.what()
              << "\n";
    return 2;
  } catch (const aoib::DegenerateGapError& err) {
    std::cerr << "config error [degenerate-gap]: " << err.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& err) {
    std::cerr << "config error: " << err.what() << "\n";
    return 2;
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << "\n";
    return 1;
  }
  return 0;
}
