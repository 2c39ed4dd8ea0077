#include "run_config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>

#include <fmt/format.h>

namespace ksphoton::cli {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> parts;
  std::size_t pos = 0;
  while (true) {
    const auto next = s.find(sep, pos);
    parts.push_back(trim(s.substr(pos, next == std::string_view::npos ? std::string_view::npos : next - pos)));
    if (next == std::string_view::npos) break;
    pos = next + 1;
  }
  return parts;
}

double parse_double(const std::string& key, std::string_view text) {
  double v = 0.0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (text.empty() || ec != std::errc() || ptr != end || !std::isfinite(v)) {
    throw ConfigError(key, fmt::format("'{}' is not a finite number", text));
  }
  return v;
}

std::uint64_t parse_u64(const std::string& key, std::string_view text) {
  std::uint64_t v = 0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (text.empty() || ec != std::errc() || ptr != end) {
    throw ConfigError(key, fmt::format("'{}' is not an unsigned 64-bit integer", text));
  }
  return v;
}

double* field_ptr(ImperfectionConfig& c, const std::string& name) {
  if (name == "detector_efficiency") return &c.detector_efficiency;
  if (name == "dark_count_rate") return &c.dark_count_rate;
  if (name == "coincidence_window") return &c.coincidence_window;
  if (name == "pair_rate") return &c.pair_rate;
  if (name == "pbs_extinction") return &c.pbs_extinction;
  if (name == "hwp_angle_sigma") return &c.hwp_angle_sigma;
  if (name == "phase_coherence_time") return &c.phase_coherence_time;
  if (name == "phase_jitter_sigma") return &c.phase_jitter_sigma;
  if (name == "bin_width") return &c.bin_width;
  return nullptr;
}

void validate_field(const ImperfectionConfig& c, const std::string& key) {
  try {
    c.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(key, e.what());
  }
}

}  // namespace

ImperfectionConfig RunConfig::effective_imperfections() const {
  if (!target_epsilon) return imperfections;
  try {
    return calibrate(*target_epsilon, imperfections);
  } catch (const CalibrationError& e) {
    throw ConfigError("target_epsilon", e.what());
  }
}

SetupId parse_setup(std::string_view token) {
  token = trim(token);
  if (token == "setup1") return SetupId::setup1();
  if (token == "setup1p") return SetupId::setup1_prime();
  if (token == "setup2") return SetupId::setup2();
  if (token.starts_with("custom/")) {
    const auto parts = split(token.substr(7), '/');
    if (parts.size() == 2) {
      try {
        return SetupId::custom(Degrees{parse_double("setup", parts[0])}, Degrees{parse_double("setup", parts[1])});
      } catch (const std::invalid_argument& e) {
        throw ConfigError("setup", e.what());
      }
    }
  }
  throw ConfigError("setup", fmt::format("unknown setup '{}' (setup1, setup1p, setup2, custom/<a>/<b>)", token));
}

const std::vector<std::string>& numeric_config_fields() {
  static const std::vector<std::string> names{
      "detector_efficiency", "dark_count_rate",      "coincidence_window", "pair_rate", "pbs_extinction",
      "hwp_angle_sigma",     "phase_coherence_time", "phase_jitter_sigma", "bin_width"};
  return names;
}

void set_config_field(ImperfectionConfig& config, const std::string& name, double value) {
  double* p = field_ptr(config, name);
  if (p == nullptr) throw ConfigError(name, "unknown parameter");
  ImperfectionConfig copy = config;
  *field_ptr(copy, name) = value;
  validate_field(copy, name);
  *p = value;
}

RunConfig parse_run_config(std::istream& in) {
  RunConfig rc;
  std::set<std::string> seen;
  std::optional<SetupId> reference;
  std::optional<double> stage_duration;
  std::optional<std::vector<Stage>> stages;

  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view body = line;
    if (const auto hash = body.find('#'); hash != std::string_view::npos) body = body.substr(0, hash);
    body = trim(body);
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("", fmt::format("line {}: expected 'key = value'", line_no));
    }
    const std::string key(trim(body.substr(0, eq)));
    const std::string_view value = trim(body.substr(eq + 1));
    if (key.empty()) throw ConfigError("", fmt::format("line {}: missing key", line_no));
    if (!seen.insert(key).second) throw ConfigError(key, "duplicate key");

    if (field_ptr(rc.imperfections, key) != nullptr) {
      set_config_field(rc.imperfections, key, parse_double(key, value));
    } else if (key == "rng_seed") {
      rc.imperfections.rng_seed = parse_u64(key, value);
    } else if (key == "reference_setup") {
      try {
        reference = parse_setup(value);
      } catch (const ConfigError& e) {
        throw ConfigError(key, e.what());
      }
      if (reference->kind() != SetupId::Kind::Setup1 && reference->kind() != SetupId::Kind::Setup1Prime) {
        throw ConfigError(key, "must be setup1 or setup1p");
      }
    } else if (key == "stage_duration") {
      stage_duration = parse_double(key, value);
      if (*stage_duration <= 0.0) throw ConfigError(key, "must be positive");
    } else if (key == "transition_gap") {
      rc.plan.transition_gap_s = parse_double(key, value);
      if (rc.plan.transition_gap_s < 0.0) throw ConfigError(key, "must be nonnegative");
    } else if (key == "stages") {
      stages.emplace();
      for (std::string_view item : split(value, ',')) {
        const auto colon = item.rfind(':');
        if (colon == std::string_view::npos) throw ConfigError(key, fmt::format("'{}' is not setup:duration", item));
        SetupId setup = SetupId::setup1();
        try {
          setup = parse_setup(item.substr(0, colon));
        } catch (const ConfigError& e) {
          throw ConfigError(key, e.what());
        }
        const double d = parse_double(key, trim(item.substr(colon + 1)));
        if (d <= 0.0) throw ConfigError(key, "stage durations must be positive");
        stages->push_back(Stage{setup, d});
      }
    } else if (key == "target_epsilon") {
      rc.target_epsilon = parse_double(key, value);
      if (*rc.target_epsilon < 0.0 || *rc.target_epsilon >= 0.5) throw ConfigError(key, "must be in [0, 0.5)");
    } else {
      throw ConfigError(key, "unknown key");
    }
  }

  if (stages) {
    if (reference || stage_duration) {
      throw ConfigError("stages", "cannot be combined with reference_setup or stage_duration");
    }
    rc.plan.stages = *stages;
  } else {
    const double gap = rc.plan.transition_gap_s;
    rc.plan = StagePlan::standard(reference.value_or(SetupId::setup1()), stage_duration.value_or(60.0));
    rc.plan.transition_gap_s = gap;
  }
  return rc;
}

RunConfig load_run_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config", "cannot open " + path);
  return parse_run_config(in);
}

}  // namespace ksphoton::cli
