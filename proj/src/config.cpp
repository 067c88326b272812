#include "aoibandit/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace aoib {

std::string_view config_error_name(ConfigErrorCode code) {
  switch (code) {
    case ConfigErrorCode::Io: return "io";
    case ConfigErrorCode::Syntax: return "syntax";
    case ConfigErrorCode::UnknownKey: return "unknown-key";
    case ConfigErrorCode::MissingField: return "missing-field";
    case ConfigErrorCode::BadValue: return "bad-value";
    case ConfigErrorCode::ValueOutOfRange: return "value-out-of-range";
    case ConfigErrorCode::LengthMismatch: return "length-mismatch";
    case ConfigErrorCode::ExploreTooLong: return "explore-too-long";
    case ConfigErrorCode::BadSweep: return "bad-sweep";
  }
  return "unknown";
}

namespace {

std::string error_text(std::string_view origin, int line, const std::string& message) {
  std::ostringstream out;
  out << origin;
  if (line > 0) out << ":" << line;
  out << ": " << message;
  return out.str();
}

}  // namespace

ConfigError::ConfigError(ConfigErrorCode code, int line, const std::string& message)
    : std::runtime_error(message), code_(code), line_(line) {}

namespace {

struct RawEntry {
  std::string key;
  std::string value;
  int line = 0;
};

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) {
    s.remove_prefix(1);
  }
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

class Parser {
 public:
  Parser(std::string_view text, std::string_view origin) : origin_(origin) {
    int line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
      const std::size_t nl = text.find('\n', pos);
      std::string_view line = text.substr(pos, nl == std::string_view::npos ? text.size() - pos
                                                                            : nl - pos);
      line_no += 1;
      if (const std::size_t hash = line.find('#'); hash != std::string_view::npos) {
        line = line.substr(0, hash);
      }
      line = trim(line);
      if (!line.empty()) {
        const std::size_t eq = line.find('=');
        if (eq == std::string_view::npos) {
          fail(ConfigErrorCode::Syntax, line_no, "expected 'key = value'");
        }
        RawEntry entry;
        entry.key = std::string(trim(line.substr(0, eq)));
        entry.value = std::string(trim(line.substr(eq + 1)));
        entry.line = line_no;
        if (entry.key.empty()) fail(ConfigErrorCode::Syntax, line_no, "empty key");
        if (entry.value.empty()) fail(ConfigErrorCode::Syntax, line_no, "empty value");
        entries_.push_back(std::move(entry));
      }
      if (nl == std::string_view::npos) break;
      pos = nl + 1;
    }
  }

  [[noreturn]] void fail(ConfigErrorCode code, int line, const std::string& message) const {
    throw ConfigError(code, line, error_text(origin_, line, message));
  }

  const RawEntry* find(std::string_view key) const {
    const RawEntry* found = nullptr;
    for (const auto& e : entries_) {
      if (e.key == key) found = &e;  // last assignment wins
    }
    return found;
  }

  std::vector<const RawEntry*> find_all(std::string_view key) const {
    std::vector<const RawEntry*> out;
    for (const auto& e : entries_) {
      if (e.key == key) out.push_back(&e);
    }
    return out;
  }

  const RawEntry& require(std::string_view key) const {
    const RawEntry* e = find(key);
    if (!e) {
      fail(ConfigErrorCode::MissingField, 0, "missing required field '" + std::string(key) + "'");
    }
    return *e;
  }

  double as_double(const RawEntry& e) const {
    double out = 0.0;
    const char* first = e.value.data();
    const char* last = first + e.value.size();
    const auto res = std::from_chars(first, last, out);
    if (res.ec != std::errc{} || res.ptr != last) {
      fail(ConfigErrorCode::BadValue, e.line, "'" + e.value + "' is not a number");
    }
    return out;
  }

  std::int64_t as_int(const RawEntry& e) const {
    std::int64_t out = 0;
    const char* first = e.value.data();
    const char* last = first + e.value.size();
    const auto res = std::from_chars(first, last, out);
    if (res.ec != std::errc{} || res.ptr != last) {
      fail(ConfigErrorCode::BadValue, e.line, "'" + e.value + "' is not an integer");
    }
    return out;
  }

  std::uint64_t as_uint(const RawEntry& e) const {
    std::uint64_t out = 0;
    const char* first = e.value.data();
    const char* last = first + e.value.size();
    const auto res = std::from_chars(first, last, out);
    if (res.ec != std::errc{} || res.ptr != last) {
      fail(ConfigErrorCode::BadValue, e.line, "'" + e.value + "' is not a nonnegative integer");
    }
    return out;
  }

  bool as_bool(const RawEntry& e) const {
    if (e.value == "on" || e.value == "true" || e.value == "1") return true;
    if (e.value == "off" || e.value == "false" || e.value == "0") return false;
    fail(ConfigErrorCode::BadValue, e.line, "'" + e.value + "' is not on/off");
  }

  std::vector<std::string> as_tokens(const RawEntry& e) const {
    std::string_view v = trim(e.value);
    if (v.size() < 2 || v.front() != '[' || v.back() != ']') {
      fail(ConfigErrorCode::Syntax, e.line, "expected a bracketed list like [a, b, c]");
    }
    v = v.substr(1, v.size() - 2);
    std::vector<std::string> tokens;
    std::size_t pos = 0;
    while (pos <= v.size()) {
      const std::size_t comma = v.find(',', pos);
      std::string_view token =
          trim(v.substr(pos, comma == std::string_view::npos ? v.size() - pos : comma - pos));
      if (token.empty()) {
        fail(ConfigErrorCode::Syntax, e.line, "empty list element");
      }
      tokens.emplace_back(token);
      if (comma == std::string_view::npos) break;
      pos = comma + 1;
    }
    return tokens;
  }

  std::vector<double> as_double_list(const RawEntry& e) const {
    std::vector<double> out;
    for (const auto& token : as_tokens(e)) {
      double value = 0.0;
      const char* first = token.data();
      const char* last = first + token.size();
      const auto res = std::from_chars(first, last, value);
      if (res.ec != std::errc{} || res.ptr != last) {
        fail(ConfigErrorCode::BadValue, e.line, "'" + token + "' is not a number");
      }
      out.push_back(value);
    }
    return out;
  }

  const std::vector<RawEntry>& entries() const { return entries_; }

 private:
  std::string origin_;
  std::vector<RawEntry> entries_;
};

constexpr std::string_view kKnownKeys[] = {
    "p",       "q",          "d",          "horizon", "seed",      "trials",
    "coupled", "policies",   "te",         "epsilon", "warmup",    "output",
    "sweep_axis", "sweep_case", "checkpoint",
};

}  // namespace

ExperimentFile parse_config_text(std::string_view text, std::string_view origin) {
  Parser parser(text, origin);

  for (const auto& entry : parser.entries()) {
    bool known = false;
    for (const auto& key : kKnownKeys) {
      if (entry.key == key) {
        known = true;
        break;
      }
    }
    if (!known) {
      parser.fail(ConfigErrorCode::UnknownKey, entry.line, "unknown key '" + entry.key + "'");
    }
  }

  ExperimentFile out;

  const RawEntry& p_entry = parser.require("p");
  const RawEntry& q_entry = parser.require("q");
  const auto p_list = parser.as_double_list(p_entry);
  const auto q_list = parser.as_double_list(q_entry);
  if (p_list.size() != q_list.size()) {
    std::ostringstream msg;
    msg << "p and q must have the same length (got " << p_list.size() << " and "
        << q_list.size() << ")";
    parser.fail(ConfigErrorCode::LengthMismatch, q_entry.line, msg.str());
  }
  if (p_list.empty()) {
    parser.fail(ConfigErrorCode::ValueOutOfRange, p_entry.line, "at least one source is required");
  }
  for (std::size_t k = 0; k < p_list.size(); ++k) {
    try {
      out.system.sources.emplace_back(p_list[k], q_list[k]);
    } catch (const std::invalid_argument& err) {
      parser.fail(ConfigErrorCode::ValueOutOfRange, p_entry.line, err.what());
    }
  }

  const RawEntry& d_entry = parser.require("d");
  out.system.d = parser.as_double(d_entry);
  if (!(out.system.d > 0.0 && out.system.d < 1.0)) {
    parser.fail(ConfigErrorCode::ValueOutOfRange, d_entry.line,
                "depreciating factor must lie strictly inside (0,1)");
  }

  const RawEntry& horizon_entry = parser.require("horizon");
  out.system.horizon = parser.as_int(horizon_entry);
  if (out.system.horizon < 1) {
    parser.fail(ConfigErrorCode::ValueOutOfRange, horizon_entry.line,
                "horizon must be at least 1 slot");
  }

  if (const RawEntry* e = parser.find("seed")) out.system.seed = parser.as_uint(*e);

  if (const RawEntry* e = parser.find("trials")) {
    out.trials = parser.as_int(*e);
    if (out.trials < 1) {
      parser.fail(ConfigErrorCode::ValueOutOfRange, e->line, "trials must be at least 1");
    }
  }

  if (const RawEntry* e = parser.find("coupled")) out.coupled = parser.as_bool(*e);

  if (const RawEntry* e = parser.find("warmup")) {
    out.oracle_warmup = parser.as_int(*e);
    if (out.oracle_warmup < 0) {
      parser.fail(ConfigErrorCode::ValueOutOfRange, e->line, "warmup must be nonnegative");
    }
  }

  if (const RawEntry* e = parser.find("output")) out.output_prefix = e->value;

  std::optional<std::int64_t> te;
  if (const RawEntry* e = parser.find("te")) {
    te = parser.as_int(*e);
    if (*te >= out.system.horizon) {
      parser.fail(ConfigErrorCode::ExploreTooLong, e->line,
                  "explore phase must end before the horizon");
    }
    if (*te < out.system.num_sources()) {
      parser.fail(ConfigErrorCode::ValueOutOfRange, e->line,
                  "explore phase must cover every source at least once");
    }
  }

  std::optional<double> epsilon;
  if (const RawEntry* e = parser.find("epsilon")) {
    epsilon = parser.as_double(*e);
    if (!(*epsilon >= 0.0 && *epsilon <= 1.0)) {
      parser.fail(ConfigErrorCode::ValueOutOfRange, e->line, "epsilon must lie in [0,1]");
    }
  }

  std::vector<std::string> policy_tokens = {"etc", "eps_greedy", "ucb", "ts"};
  if (const RawEntry* e = parser.find("policies")) policy_tokens = parser.as_tokens(*e);
  const RawEntry* policies_entry = parser.find("policies");
  for (const auto& token : policy_tokens) {
    const auto kind = policy_from_name(token);
    if (!kind) {
      parser.fail(ConfigErrorCode::BadValue, policies_entry ? policies_entry->line : 0,
                  "unknown policy '" + token + "'");
    }
    PolicyConfig pc;
    pc.kind = *kind;
    if (pc.kind == PolicyKind::Etc && te) pc.t_explore = *te;
    if (pc.kind == PolicyKind::EpsGreedy) pc.epsilon_fixed = epsilon;
    out.policies.push_back(pc);
  }

  const RawEntry* axis_entry = parser.find("sweep_axis");
  const auto case_entries = parser.find_all("sweep_case");
  if (!axis_entry && !case_entries.empty()) {
    parser.fail(ConfigErrorCode::BadSweep, case_entries.front()->line,
                "sweep_case given without sweep_axis");
  }
  if (axis_entry) {
    SweepSpec spec;
    const auto axis = sweep_axis_from_name(axis_entry->value);
    if (!axis) {
      parser.fail(ConfigErrorCode::BadSweep, axis_entry->line,
                  "unknown sweep axis '" + axis_entry->value + "'");
    }
    spec.axis = *axis;
    if (case_entries.empty()) {
      parser.fail(ConfigErrorCode::BadSweep, axis_entry->line,
                  "a sweep needs at least one sweep_case");
    }
    for (const RawEntry* e : case_entries) {
      auto values = parser.as_double_list(*e);
      const std::size_t expected =
          spec.axis == SweepAxis::DGrid ? 1 : out.system.sources.size();
      if (values.size() != expected) {
        std::ostringstream msg;
        msg << "sweep case needs " << expected << " value(s), got " << values.size();
        parser.fail(ConfigErrorCode::BadSweep, e->line, msg.str());
      }
      spec.cases.push_back(std::move(values));
    }
    if (const RawEntry* e = parser.find("checkpoint")) {
      spec.checkpoint = parser.as_int(*e);
      if (spec.checkpoint < 1 || spec.checkpoint > out.system.horizon) {
        parser.fail(ConfigErrorCode::ValueOutOfRange, e->line,
                    "checkpoint must lie within the horizon");
      }
    }
    out.sweep = std::move(spec);
  } else if (const RawEntry* e = parser.find("checkpoint")) {
    parser.fail(ConfigErrorCode::BadSweep, e->line, "checkpoint given without sweep_axis");
  }

  try {
    out.system.validate();
    if (out.sweep) {
      for (const auto& payload : out.sweep->cases) {
        apply_sweep_case(out.system, out.sweep->axis, payload);
      }
    }
  } catch (const std::invalid_argument& err) {
    parser.fail(ConfigErrorCode::ValueOutOfRange, 0, err.what());
  }

  return out;
}

ExperimentFile parse_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw ConfigError(ConfigErrorCode::Io, 0, "cannot open config file '" + path + "'");
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config_text(buffer.str(), path);
}

}  // namespace aoib
