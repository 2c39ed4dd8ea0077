#include "ksphoton/export.hpp"

#include <fmt/format.h>
#include <nlohmann/json.hpp>

namespace ksphoton {

namespace {

using Json = nlohmann::ordered_json;

Json to_json(const ImperfectionConfig& c) {
  Json j;
  j["detector_efficiency"] = c.detector_efficiency;
  j["dark_count_rate"] = c.dark_count_rate;
  j["coincidence_window"] = c.coincidence_window;
  j["pair_rate"] = c.pair_rate;
  j["pbs_extinction"] = c.pbs_extinction;
  j["hwp_angle_sigma"] = c.hwp_angle_sigma;
  j["phase_coherence_time"] = c.phase_coherence_time;
  j["phase_jitter_sigma"] = c.phase_jitter_sigma;
  j["bin_width"] = c.bin_width;
  j["rng_seed"] = c.rng_seed;
  return j;
}

Json counts_json(const DetectorCounts& counts) {
  Json j = Json::object();
  for (Detector d : kDetectors) j[fmt::format("d{}", number(d))] = counts[index(d)];
  return j;
}

}  // namespace

void write_trace_csv(std::ostream& out, const ExperimentTrace& trace) {
  out << "time_s,stage,d1,d2,d3,d4,d5,d6,d7,d8\n";
  for (const auto& bin : trace.bins) {
    out << fmt::format("{:.6g},{}", bin.time_s, bin.stage);
    for (double r : bin.rates) out << fmt::format(",{:.6g}", r);
    out << '\n';
  }
}

std::string report_json(const RunReport& report, const ImperfectionConfig& config, const StagePlan& plan) {
  Json j;
  j["result1"] = report.result1;
  j["result2"] = report.result2;
  j["epsilon"] = report.epsilon;
  j["pooled_epsilon"] = report.pooled_epsilon;
  j["bound"] = report.bound.bound();
  j["n_measurements"] = report.bound.n_measurements();
  j["verdict"] = to_string(report.verdict);
  Json stages = Json::array();
  for (std::size_t i = 0; i < report.stages.size(); ++i) {
    const StageReport& s = report.stages[i];
    Json st;
    st["stage"] = i + 1;
    st["setup"] = s.setup.name();
    st["counts"] = counts_json(s.counts);
    st["total"] = s.total;
    st["wrong"] = s.wrong;
    st["error_fraction"] = s.error_fraction ? Json(*s.error_fraction) : Json(nullptr);
    stages.push_back(st);
  }
  j["per_stage_counts"] = stages;
  j["seed"] = config.rng_seed;
  j["config"] = to_json(config);
  Json p;
  Json st = Json::array();
  for (const auto& s : plan.stages) st.push_back(Json{{"setup", s.setup.name()}, {"duration_s", s.duration_s}});
  p["stages"] = st;
  p["transition_gap"] = plan.transition_gap_s;
  j["plan"] = p;
  return j.dump(2) + "\n";
}

std::string config_json(const ImperfectionConfig& config) { return to_json(config).dump(2) + "\n"; }

}  // namespace ksphoton
