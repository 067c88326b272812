#pragma once

#include <iosfwd>
#include <string>

#include "aoibandit/config.hpp"
#include "aoibandit/validation.hpp"

namespace aoib {

// 17-significant-digit round-trip formatting, locale independent. Values
// without an exponent always carry a decimal point ("0.0", not "0").
std::string format_double(double value);

struct RunnerOptions {
  int threads = 0;
};

// Each returns a process exit code: 0 success, 1 failed validation or I/O.
// Config problems are reported by throwing ConfigError before any work runs.

// Writes <prefix>_<policy>.csv per policy (t,instantaneous_regret,
// cumulative_regret,stderr) and <prefix>_summary.json with the resolved
// config and per-policy results. CSVs are byte-identical across reruns.
int cmd_simulate(const ExperimentFile& file, std::ostream& log, const RunnerOptions& opts = {});

// Writes <prefix>_sweep.csv with one row per (case, policy).
int cmd_sweep(const ExperimentFile& file, std::ostream& log, const RunnerOptions& opts = {});

// Writes <prefix>_bounds.json: instance constants, the explore schedule, and
// all three bound evaluations with their diagnostics.
int cmd_bounds(const ExperimentFile& file, double alpha, double gamma, double C,
               std::ostream& log);

// Prints one line per invariant check; nonzero when any fails.
int cmd_validate(const ExperimentFile& file, ValidationLevel level, std::ostream& log,
                 const RunnerOptions& opts = {});

}  // namespace aoib
