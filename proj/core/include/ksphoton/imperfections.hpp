// Non-ideal apparatus: detector efficiency and dark counts, finite PBS
// extinction, waveplate setting errors and interferometer phase noise.
#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>

#include "ksphoton/optics.hpp"

namespace ksphoton {

inline constexpr std::uint64_t kDefaultSeed = 20240917;

/// RMS phase drift accumulated over one coherence time. The interferometer
/// counts as "stable" over that time, so the drift stays small compared with
/// the fringe period.
inline constexpr double kDriftRmsAtCoherenceTime = 0.05;  // rad

struct ImperfectionConfig {
  double detector_efficiency = 0.70;
  double dark_count_rate = 25.0;        // s^-1, per detector
  double coincidence_window = 5.0;      // ns, full width
  double pair_rate = 1000.0;            // s^-1
  double pbs_extinction = 1e-5;         // wrong-port probability
  double hwp_angle_sigma = 0.2;         // deg, drawn once per stage and plate
  double phase_coherence_time = 300.0;  // s; 0 disables slow drift
  double phase_jitter_sigma = 0.0;      // rad, per photon; sets the fringe visibility
  double bin_width = 1.0;               // s
  std::uint64_t rng_seed = kDefaultSeed;

  /// Throws std::invalid_argument naming the offending field.
  void validate() const;

  /// Perfect detectors and optics, no noise.
  static ImperfectionConfig ideal();

  /// Standard deviation of the per-bin random-walk step of each phase.
  double drift_step_sigma() const;

  /// exp(-sigma^2 / 2) for Gaussian per-photon phase jitter.
  double visibility() const;
};

/// Waveplate offsets HWP0..HWP6 and phase offsets on top of the tuned phases.
struct ApparatusErrors {
  std::array<double, 7> hwp_offsets_deg{};
  InterferometerPhases phase_error{};
};

/// Network parameters for nominal HWP1/HWP2 angles with `errors` and the
/// config's PBS leakage applied; phases are tuned_phases() + phase_error.
NetworkParameters perturbed_parameters(Degrees hwp1, Degrees hwp2, const ImperfectionConfig& config,
                                       const ApparatusErrors& errors);

/// Prepared photon given HWP0's offset and PBS0 leakage.
StateVector perturbed_source(const ImperfectionConfig& config, const ApparatusErrors& errors);

/// Exact propagation through the perturbed apparatus (no jitter averaging).
DetectorDistribution ideal_to_imperfect_distribution(const SetupId& setup, const ImperfectionConfig& config,
                                                     const ApparatusErrors& errors);

/// Detector probabilities as a function of extra phase offsets on the two
/// interferometers. D1..D4 depend only on the BS1 offset and D5..D8 only on
/// the BS2 offset, each as base + c cos(offset) + s sin(offset).
class FringeModel {
 public:
  FringeModel(Degrees hwp1, Degrees hwp2, const ImperfectionConfig& config, const ApparatusErrors& errors);
  FringeModel(const SetupId& setup, const ImperfectionConfig& config, const ApparatusErrors& errors)
      : FringeModel(setup.hwp1(), setup.hwp2(), config, errors) {}

  DetectorDistribution at(double offset1, double offset2) const;
  /// Average over independent Gaussian offsets with standard deviation `sigma`.
  DetectorDistribution averaged(double sigma) const;

 private:
  std::array<double, kDetectorCount> base_{};
  std::array<double, kDetectorCount> cos_{};
  std::array<double, kDetectorCount> sin_{};
};

/// Jitter-averaged distribution for the config's phase_jitter_sigma.
DetectorDistribution expected_distribution(const SetupId& setup, const ImperfectionConfig& config,
                                           const ApparatusErrors& errors = {});

/// Expected Setup2 wrong-detector fraction without waveplate errors or drift.
double expected_setup2_epsilon(const ImperfectionConfig& config);

class CalibrationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Copy of `config_template` whose phase_jitter_sigma makes the expected
/// Setup2 error fraction equal `target_epsilon`. Starts from
/// eps = (1 - V)/2 and refines by bisection on the exact distribution.
ImperfectionConfig calibrate(double target_epsilon, const ImperfectionConfig& config_template);

}  // namespace ksphoton
