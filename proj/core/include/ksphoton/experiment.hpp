// Monte Carlo runs of the three-stage protocol: heralded photons through the
// imperfect apparatus, dark counts, coincidence counting, binned rates and
// the error-fraction analysis.
#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "ksphoton/coincidence.hpp"
#include "ksphoton/imperfections.hpp"
#include "ksphoton/nchv.hpp"
#include "ksphoton/optics.hpp"

namespace ksphoton {

/// Fixed trigger-to-signal delay; well inside the coincidence window.
inline constexpr double kSignalDelayNs = 1.0;

struct Stage {
  SetupId setup;
  double duration_s;
};

struct StagePlan {
  std::vector<Stage> stages;
  double transition_gap_s = 2.0;

  /// reference, Setup2, reference, each `stage_duration_s` long.
  static StagePlan standard(const SetupId& reference = SetupId::setup1(), double stage_duration_s = 60.0);

  void validate() const;
  double total_duration() const;
};

/// One time bin of the schedule. `stage` is 1-based; 0 marks a transition
/// between stages while HWP1/HWP2 rotate.
struct ScheduleBin {
  double start_s;
  double length_s;
  int stage;
  Degrees hwp1;
  Degrees hwp2;
  ApparatusErrors errors;
};

/// Bins never straddle stage boundaries. Waveplate errors are drawn once per
/// stage; phase drift advances one random-walk step per bin.
std::vector<ScheduleBin> build_schedule(const StagePlan& plan, const ImperfectionConfig& config);

struct EventStreams {
  std::vector<DetectionEvent> trigger;  // D0
  std::vector<DetectionEvent> signal;   // D1..D8
  std::uint64_t heralded = 0;           // triggers from real pairs
};

EventStreams simulate_events(const StagePlan& plan, const ImperfectionConfig& config);

struct TraceBin {
  double time_s;
  int stage;
  std::array<double, kDetectorCount> rates;  // coincidences per second
};

struct ExperimentTrace {
  std::vector<TraceBin> bins;
};

struct StageCounts {
  SetupId setup;
  double duration_s;
  DetectorCounts counts{};
};

struct RunResult {
  ExperimentTrace trace;
  std::vector<StageCounts> stages;
  std::uint64_t heralded = 0;
};

RunResult run_experiment(const StagePlan& plan, const ImperfectionConfig& config);

/// Detectors quantum mechanics allows for `setup` on the ideal prepared state.
std::vector<Detector> qm_allowed_detectors(const SetupId& setup);

struct StageReport {
  SetupId setup;
  DetectorCounts counts{};
  std::uint64_t total = 0;
  std::uint64_t wrong = 0;  // counts on detectors QM forbids
  std::optional<double> error_fraction;
};

struct RunReport {
  std::vector<StageReport> stages;
  double result1 = 0.0;  // Setup2 fraction on D1, D3, D5, D7
  double result2 = 0.0;  // Setup2 fraction on D2, D4, D6, D8
  double epsilon = 0.0;  // = result2
  double pooled_epsilon = 0.0;
  EpsilonBound bound{3};
  Verdict verdict = Verdict::Inconclusive;
};

class NoDataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Throws NoDataError when the plan has no Setup2 stage or Setup2 recorded
/// no coincidences.
RunReport analyze(std::span<const StageCounts> stages);

}  // namespace ksphoton
