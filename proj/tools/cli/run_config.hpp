// Flat `key = value` run configuration files.
//
//   # comment
//   detector_efficiency = 0.7
//   phase_jitter_sigma  = 0.98
//   reference_setup     = setup1p          # setup1 | setup1p
//   stage_duration      = 60
//   transition_gap      = 2
//   stages              = setup1:30, setup2:30, custom/22.5/22.5:30
//   target_epsilon      = 0.19             # calibrate phase jitter on load
//
// `stages` replaces the standard reference/Setup2/reference plan and cannot
// be combined with reference_setup or stage_duration.
#pragma once

#include <istream>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "ksphoton/experiment.hpp"

namespace ksphoton::cli {

class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string key, const std::string& message)
      : std::runtime_error(key.empty() ? message : key + ": " + message), key_(std::move(key)) {}
  const std::string& key() const { return key_; }

 private:
  std::string key_;
};

struct RunConfig {
  ImperfectionConfig imperfections;
  StagePlan plan = StagePlan::standard();
  std::optional<double> target_epsilon;

  /// Calibrated copy when target_epsilon is set, otherwise the imperfections as given.
  ImperfectionConfig effective_imperfections() const;
};

/// Parses `setup1`, `setup1p`, `setup2` or `custom/<hwp1>/<hwp2>`.
SetupId parse_setup(std::string_view token);

RunConfig parse_run_config(std::istream& in);
RunConfig load_run_config(const std::string& path);

/// Names of the ImperfectionConfig fields that can be overridden numerically.
const std::vector<std::string>& numeric_config_fields();

/// Sets a named numeric field. Throws ConfigError for unknown names or values
/// that break the config invariants.
void set_config_field(ImperfectionConfig& config, const std::string& name, double value);

}  // namespace ksphoton::cli
