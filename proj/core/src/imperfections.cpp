#include "ksphoton/imperfections.hpp"

#include <cmath>
#include <numbers>

#include <fmt/format.h>

namespace ksphoton {

namespace {

void require(bool ok, const char* field, double v, const char* rule) {
  if (!ok) throw std::invalid_argument(fmt::format("{} = {}: must be {}", field, v, rule));
}

bool is_probability(double v) { return v >= 0.0 && v <= 1.0; }
bool is_nonnegative(double v) { return std::isfinite(v) && v >= 0.0; }

constexpr std::array<std::size_t, kDetectorCount> kInterferometerOf{0, 0, 0, 0, 1, 1, 1, 1};

}  // namespace

void ImperfectionConfig::validate() const {
  require(is_probability(detector_efficiency), "detector_efficiency", detector_efficiency, "in [0, 1]");
  require(is_nonnegative(dark_count_rate), "dark_count_rate", dark_count_rate, "nonnegative");
  require(std::isfinite(coincidence_window) && coincidence_window > 0.0, "coincidence_window", coincidence_window,
          "positive");
  require(is_nonnegative(pair_rate), "pair_rate", pair_rate, "nonnegative");
  require(is_probability(pbs_extinction), "pbs_extinction", pbs_extinction, "in [0, 1]");
  require(is_nonnegative(hwp_angle_sigma), "hwp_angle_sigma", hwp_angle_sigma, "nonnegative");
  require(is_nonnegative(phase_coherence_time), "phase_coherence_time", phase_coherence_time, "nonnegative");
  require(is_nonnegative(phase_jitter_sigma), "phase_jitter_sigma", phase_jitter_sigma, "nonnegative");
  require(std::isfinite(bin_width) && bin_width > 0.0, "bin_width", bin_width, "positive");
}

ImperfectionConfig ImperfectionConfig::ideal() {
  ImperfectionConfig c;
  c.detector_efficiency = 1.0;
  c.dark_count_rate = 0.0;
  c.pbs_extinction = 0.0;
  c.hwp_angle_sigma = 0.0;
  c.phase_coherence_time = 0.0;
  c.phase_jitter_sigma = 0.0;
  return c;
}

double ImperfectionConfig::drift_step_sigma() const {
  if (phase_coherence_time <= 0.0) return 0.0;
  return kDriftRmsAtCoherenceTime * std::sqrt(bin_width / phase_coherence_time);
}

double ImperfectionConfig::visibility() const { return std::exp(-0.5 * phase_jitter_sigma * phase_jitter_sigma); }

NetworkParameters perturbed_parameters(Degrees hwp1, Degrees hwp2, const ImperfectionConfig& config,
                                       const ApparatusErrors& errors) {
  const auto& tuned = tuned_phases();
  NetworkParameters p;
  p.hwp1 = Degrees{hwp1.value + errors.hwp_offsets_deg[1]};
  p.hwp2 = Degrees{hwp2.value + errors.hwp_offsets_deg[2]};
  for (std::size_t i = 0; i < 4; ++i) p.analyzers[i] = Degrees{22.5 + errors.hwp_offsets_deg[3 + i]};
  p.phases.bs1 = Radians{tuned.bs1.value + errors.phase_error.bs1.value};
  p.phases.bs2 = Radians{tuned.bs2.value + errors.phase_error.bs2.value};
  p.pbs_leakage = config.pbs_extinction;
  return p;
}

StateVector perturbed_source(const ImperfectionConfig& config, const ApparatusErrors& errors) {
  return prepare_state(Degrees{22.5 + errors.hwp_offsets_deg[0]}, config.pbs_extinction);
}

DetectorDistribution ideal_to_imperfect_distribution(const SetupId& setup, const ImperfectionConfig& config,
                                                     const ApparatusErrors& errors) {
  return propagate(build_network(perturbed_parameters(setup.hwp1(), setup.hwp2(), config, errors)),
                   perturbed_source(config, errors));
}

FringeModel::FringeModel(Degrees hwp1, Degrees hwp2, const ImperfectionConfig& config,
                         const ApparatusErrors& errors) {
  const StateVector source = perturbed_source(config, errors);
  const auto eval = [&](double shift) {
    ApparatusErrors e = errors;
    e.phase_error.bs1.value += shift;
    e.phase_error.bs2.value += shift;
    return propagate(build_network(perturbed_parameters(hwp1, hwp2, config, e)), source);
  };
  const DetectorDistribution p0 = eval(0.0);
  const DetectorDistribution p90 = eval(0.5 * std::numbers::pi);
  const DetectorDistribution p180 = eval(std::numbers::pi);
  for (std::size_t k = 0; k < kDetectorCount; ++k) {
    base_[k] = 0.5 * (p0.values()[k] + p180.values()[k]);
    cos_[k] = 0.5 * (p0.values()[k] - p180.values()[k]);
    sin_[k] = p90.values()[k] - base_[k];
  }
}

DetectorDistribution FringeModel::at(double offset1, double offset2) const {
  const std::array<double, 2> c{std::cos(offset1), std::cos(offset2)};
  const std::array<double, 2> s{std::sin(offset1), std::sin(offset2)};
  std::array<double, kDetectorCount> p{};
  for (std::size_t k = 0; k < kDetectorCount; ++k) {
    const std::size_t i = kInterferometerOf[k];
    p[k] = std::max(0.0, base_[k] + cos_[k] * c[i] + sin_[k] * s[i]);
  }
  return DetectorDistribution(p);
}

DetectorDistribution FringeModel::averaged(double sigma) const {
  const double v = std::exp(-0.5 * sigma * sigma);
  std::array<double, kDetectorCount> p{};
  for (std::size_t k = 0; k < kDetectorCount; ++k) p[k] = std::max(0.0, base_[k] + v * cos_[k]);
  return DetectorDistribution(p);
}

DetectorDistribution expected_distribution(const SetupId& setup, const ImperfectionConfig& config,
                                           const ApparatusErrors& errors) {
  return FringeModel(setup, config, errors).averaged(config.phase_jitter_sigma);
}

double expected_setup2_epsilon(const ImperfectionConfig& config) {
  const DetectorDistribution p = expected_distribution(SetupId::setup2(), config);
  return p.sum({Detector::D2, Detector::D4, Detector::D6, Detector::D8}) / p.total();
}

ImperfectionConfig calibrate(double target_epsilon, const ImperfectionConfig& config_template) {
  if (!(target_epsilon >= 0.0 && target_epsilon < 0.5)) {
    throw CalibrationError(fmt::format("target error fraction {} outside [0, 0.5)", target_epsilon));
  }
  config_template.validate();
  ImperfectionConfig c = config_template;
  const auto eps = [&](double sigma) {
    c.phase_jitter_sigma = sigma;
    return expected_setup2_epsilon(c);
  };

  constexpr double kTolerance = 0.01;
  constexpr double kMaxSigma = 12.0;
  const double floor = eps(0.0);
  if (target_epsilon <= floor) {
    if (floor - target_epsilon > kTolerance) {
      throw CalibrationError(fmt::format("target {} below the jitter-free error fraction {}", target_epsilon, floor));
    }
    c.phase_jitter_sigma = 0.0;
    return c;
  }
  if (eps(kMaxSigma) <= target_epsilon) {
    throw CalibrationError(fmt::format("target {} unreachable by phase jitter alone", target_epsilon));
  }

  // Visibility estimate, then bisection on the exact expected distribution.
  const double sigma0 = std::sqrt(-2.0 * std::log(1.0 - 2.0 * target_epsilon));
  double lo = 0.0;
  double hi = kMaxSigma;
  if (eps(sigma0) < target_epsilon) {
    lo = sigma0;
  } else {
    hi = sigma0;
  }
  for (int i = 0; i < 200 && hi - lo > 1e-13; ++i) {
    const double mid = 0.5 * (lo + hi);
    (eps(mid) < target_epsilon ? lo : hi) = mid;
  }
  c.phase_jitter_sigma = 0.5 * (lo + hi);
  return c;
}

}  // namespace ksphoton
