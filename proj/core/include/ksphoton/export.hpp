// Trace CSV and run report serialization.
#pragma once

#include <ostream>
#include <string>

#include "ksphoton/experiment.hpp"

namespace ksphoton {

/// Header `time_s,stage,d1,...,d8`; rates in s^-1 with 6 significant digits.
/// Transition bins carry stage 0.
void write_trace_csv(std::ostream& out, const ExperimentTrace& trace);

/// JSON object with result1, result2, epsilon, pooled_epsilon, bound, verdict,
/// per_stage_counts, seed and the echoed configuration and plan.
std::string report_json(const RunReport& report, const ImperfectionConfig& config, const StagePlan& plan);

std::string config_json(const ImperfectionConfig& config);

}  // namespace ksphoton
