#include "ksphoton/experiment.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "ksphoton/random.hpp"

namespace ksphoton {

namespace {

constexpr double kTimeEpsilon = 1e-9;  // s

struct Segment {
  double start;
  double end;
  int stage;           // 1-based, 0 for a transition
  std::size_t before;  // stage index on the left of a transition
};

std::vector<Segment> segments(const StagePlan& plan) {
  std::vector<Segment> out;
  double t = 0.0;
  for (std::size_t i = 0; i < plan.stages.size(); ++i) {
    if (i > 0 && plan.transition_gap_s > 0.0) {
      out.push_back(Segment{t, t + plan.transition_gap_s, 0, i - 1});
      t += plan.transition_gap_s;
    }
    out.push_back(Segment{t, t + plan.stages[i].duration_s, static_cast<int>(i) + 1, i});
    t += plan.stages[i].duration_s;
  }
  return out;
}

double lerp(double a, double b, double f) { return a + (b - a) * f; }

std::array<double, kDetectorCount> cumulative(const DetectorDistribution& p) {
  std::array<double, kDetectorCount> c{};
  double acc = 0.0;
  for (std::size_t k = 0; k < kDetectorCount; ++k) c[k] = acc += p.values()[k];
  return c;
}

int pick_detector(const std::array<double, kDetectorCount>& cdf, double u) {
  const double x = u * cdf.back();
  for (std::size_t k = 0; k < kDetectorCount; ++k) {
    if (x < cdf[k]) return static_cast<int>(k) + 1;
  }
  return kDetectorCount;
}

EventStreams simulate(const std::vector<ScheduleBin>& schedule, const ImperfectionConfig& config) {
  EventStreams out;
  const double eta = config.detector_efficiency;
  const double herald_rate = config.pair_rate * eta;
  const double jitter = config.phase_jitter_sigma;

  for (std::size_t k = 0; k < schedule.size(); ++k) {
    const ScheduleBin& bin = schedule[k];
    const double end = bin.start_s + bin.length_s;

    if (herald_rate > 0.0) {
      const FringeModel fringe(bin.hwp1, bin.hwp2, config, bin.errors);
      const auto fixed_cdf = cumulative(fringe.at(0.0, 0.0));
      RandomStream rng(config.rng_seed, StreamDomain::Photons, {k});
      for (double t = bin.start_s + rng.exponential(herald_rate); t < end; t += rng.exponential(herald_rate)) {
        const double t_ns = t * 1e9;
        out.trigger.push_back(DetectionEvent{t_ns, 0});
        ++out.heralded;
        if (!rng.bernoulli(eta)) continue;
        int det = 0;
        if (jitter > 0.0) {
          const double d1 = rng.normal(jitter);
          const double d2 = rng.normal(jitter);
          det = pick_detector(cumulative(fringe.at(d1, d2)), rng.uniform());
        } else {
          det = pick_detector(fixed_cdf, rng.uniform());
        }
        out.signal.push_back(DetectionEvent{t_ns + kSignalDelayNs, det});
      }
    }

    if (config.dark_count_rate > 0.0) {
      RandomStream rng(config.rng_seed, StreamDomain::DarkCounts, {k});
      for (int ch = 0; ch <= kDetectorCount; ++ch) {
        auto& stream = ch == 0 ? out.trigger : out.signal;
        for (double t = bin.start_s + rng.exponential(config.dark_count_rate); t < end;
             t += rng.exponential(config.dark_count_rate)) {
          stream.push_back(DetectionEvent{t * 1e9, ch});
        }
      }
    }
  }
  std::sort(out.trigger.begin(), out.trigger.end(), event_before);
  std::sort(out.signal.begin(), out.signal.end(), event_before);
  return out;
}

}  // namespace

StagePlan StagePlan::standard(const SetupId& reference, double stage_duration_s) {
  return StagePlan{{Stage{reference, stage_duration_s}, Stage{SetupId::setup2(), stage_duration_s},
                    Stage{reference, stage_duration_s}},
                   2.0};
}

void StagePlan::validate() const {
  if (stages.empty()) throw std::invalid_argument("stage plan is empty");
  for (const auto& s : stages) {
    if (!(std::isfinite(s.duration_s) && s.duration_s > 0.0)) {
      throw std::invalid_argument(fmt::format("stage duration {} must be positive", s.duration_s));
    }
  }
  if (!(std::isfinite(transition_gap_s) && transition_gap_s >= 0.0)) {
    throw std::invalid_argument(fmt::format("transition_gap = {}: must be nonnegative", transition_gap_s));
  }
}

double StagePlan::total_duration() const {
  double t = 0.0;
  for (const auto& s : stages) t += s.duration_s;
  if (!stages.empty()) t += transition_gap_s * static_cast<double>(stages.size() - 1);
  return t;
}

std::vector<ScheduleBin> build_schedule(const StagePlan& plan, const ImperfectionConfig& config) {
  plan.validate();
  config.validate();

  std::vector<std::array<double, 7>> stage_offsets(plan.stages.size());
  for (std::size_t i = 0; i < plan.stages.size(); ++i) {
    RandomStream rng(config.rng_seed, StreamDomain::HwpAngles, {i});
    for (double& o : stage_offsets[i]) o = rng.normal(config.hwp_angle_sigma);
  }

  RandomStream drift(config.rng_seed, StreamDomain::PhaseDrift);
  const double step = config.drift_step_sigma();
  InterferometerPhases walk{};

  std::vector<ScheduleBin> bins;
  for (const Segment& seg : segments(plan)) {
    for (std::size_t n = 0;; ++n) {
      const double start = seg.start + static_cast<double>(n) * config.bin_width;
      if (start >= seg.end - kTimeEpsilon) break;
      const double length = std::min(config.bin_width, seg.end - start);

      ScheduleBin bin{start, length, seg.stage, {}, {}, {}};
      if (seg.stage > 0) {
        const SetupId& setup = plan.stages[seg.before].setup;
        bin.hwp1 = setup.hwp1();
        bin.hwp2 = setup.hwp2();
        bin.errors.hwp_offsets_deg = stage_offsets[seg.before];
      } else {
        // HWP1/HWP2 rotate linearly between the neighbouring settings.
        const double f = (start + 0.5 * length - seg.start) / (seg.end - seg.start);
        const SetupId& from = plan.stages[seg.before].setup;
        const SetupId& to = plan.stages[seg.before + 1].setup;
        bin.hwp1 = Degrees{lerp(from.hwp1().value, to.hwp1().value, f)};
        bin.hwp2 = Degrees{lerp(from.hwp2().value, to.hwp2().value, f)};
        for (std::size_t h = 0; h < 7; ++h) {
          bin.errors.hwp_offsets_deg[h] =
              lerp(stage_offsets[seg.before][h], stage_offsets[seg.before + 1][h], f);
        }
      }
      if (!bins.empty() && step > 0.0) {
        walk.bs1.value += drift.normal(step);
        walk.bs2.value += drift.normal(step);
      }
      bin.errors.phase_error = walk;
      bins.push_back(bin);
    }
  }
  return bins;
}

EventStreams simulate_events(const StagePlan& plan, const ImperfectionConfig& config) {
  return simulate(build_schedule(plan, config), config);
}

RunResult run_experiment(const StagePlan& plan, const ImperfectionConfig& config) {
  const auto schedule = build_schedule(plan, config);
  const EventStreams streams = simulate(schedule, config);

  std::vector<double> starts_ns;
  starts_ns.reserve(schedule.size());
  for (const auto& b : schedule) starts_ns.push_back(b.start_s * 1e9);
  const CoincidenceCounts counts =
      count_coincidences(streams.trigger, streams.signal, config.coincidence_window, starts_ns);

  RunResult result;
  result.heralded = streams.heralded;
  for (std::size_t i = 0; i < plan.stages.size(); ++i) {
    result.stages.push_back(StageCounts{plan.stages[i].setup, plan.stages[i].duration_s, {}});
  }
  result.trace.bins.reserve(schedule.size());
  for (std::size_t k = 0; k < schedule.size(); ++k) {
    const ScheduleBin& b = schedule[k];
    TraceBin tb{b.start_s, b.stage, {}};
    for (std::size_t d = 0; d < kDetectorCount; ++d) {
      tb.rates[d] = static_cast<double>(counts.per_bin[k][d]) / b.length_s;
      if (b.stage > 0) result.stages[static_cast<std::size_t>(b.stage - 1)].counts[d] += counts.per_bin[k][d];
    }
    result.trace.bins.push_back(tb);
  }
  return result;
}

std::vector<Detector> qm_allowed_detectors(const SetupId& setup) {
  const OutcomeMap map = outcome_map(setup);
  const JointDistribution joint =
      joint_probabilities(bell_state(), observable(map.first), observable(map.second));
  std::vector<Detector> out;
  for (Detector d : kDetectors) {
    const auto& o = map[d];
    if (o && joint(o->first, o->second) > 1e-9) out.push_back(d);
  }
  return out;
}

RunReport analyze(std::span<const StageCounts> stages) {
  RunReport report;
  report.bound = epsilon_bound(ks_set());

  std::uint64_t s2_total = 0;
  std::uint64_t s2_wrong = 0;
  std::uint64_t pooled_total = 0;
  std::uint64_t pooled_wrong = 0;
  bool has_setup2 = false;

  for (const StageCounts& sc : stages) {
    StageReport sr{sc.setup, sc.counts, 0, 0, std::nullopt};
    for (auto c : sc.counts) sr.total += c;
    if (!sc.setup.is_custom()) {
      const auto allowed = qm_allowed_detectors(sc.setup);
      std::uint64_t right = 0;
      for (Detector d : allowed) right += sc.counts[index(d)];
      sr.wrong = sr.total - right;
      if (sr.total > 0) sr.error_fraction = static_cast<double>(sr.wrong) / static_cast<double>(sr.total);
      pooled_total += sr.total;
      pooled_wrong += sr.wrong;
      if (sc.setup.kind() == SetupId::Kind::Setup2) {
        has_setup2 = true;
        s2_total += sr.total;
        s2_wrong += sr.wrong;
      }
    }
    report.stages.push_back(sr);
  }
  if (!has_setup2) throw NoDataError("analysis needs a Setup2 stage");
  if (s2_total == 0) throw NoDataError("no coincidences recorded in Setup2");

  report.result2 = static_cast<double>(s2_wrong) / static_cast<double>(s2_total);
  report.result1 = 1.0 - report.result2;
  report.epsilon = report.result2;
  report.pooled_epsilon = static_cast<double>(pooled_wrong) / static_cast<double>(pooled_total);
  report.verdict = verdict(report.epsilon, report.bound);
  return report;
}

}  // namespace ksphoton
