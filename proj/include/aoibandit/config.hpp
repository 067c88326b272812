#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "aoibandit/experiment.hpp"

namespace aoib {

enum class ConfigErrorCode {
  Io,
  Syntax,
  UnknownKey,
  MissingField,
  BadValue,
  ValueOutOfRange,
  LengthMismatch,
  ExploreTooLong,
  BadSweep,
};

std::string_view config_error_name(ConfigErrorCode code);

class ConfigError : public std::runtime_error {
 public:
  ConfigError(ConfigErrorCode code, int line, const std::string& message);

  ConfigErrorCode code() const { return code_; }
  int line() const { return line_; }  // 0 when no line applies

 private:
  ConfigErrorCode code_;
  int line_;
};

// One experiment description: the system instance, the policies to run, and
// the run/output options, plus an optional sweep block.
struct ExperimentFile {
  SystemConfig system;
  std::vector<PolicyConfig> policies;
  std::int64_t trials = 1;
  bool coupled = true;
  std::int64_t oracle_warmup = 0;
  std::string output_prefix = "out";
  std::optional<SweepSpec> sweep;
};

// Flat key/value format with '#' comments and bracketed lists, e.g.
//   p = [0.65, 0.7, 0.75, 0.8]
//   d = 0.8
// Every violated invariant raises a ConfigError with its line number.
ExperimentFile parse_config_text(std::string_view text, std::string_view origin = "<memory>");
ExperimentFile parse_config(const std::string& path);

}  // namespace aoib
