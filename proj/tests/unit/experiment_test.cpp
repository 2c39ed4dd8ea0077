#include <gtest/gtest.h>

#include <cmath>

#include "ksphoton/experiment.hpp"

using namespace ksphoton;

namespace {

std::uint64_t sum(const DetectorCounts& c) {
  std::uint64_t s = 0;
  for (auto n : c) s += n;
  return s;
}

StageCounts stage(const SetupId& s, std::array<std::uint64_t, 8> counts) { return StageCounts{s, 60.0, counts}; }

double run_epsilon(const StagePlan& plan, const ImperfectionConfig& c) {
  const RunResult r = run_experiment(plan, c);
  return analyze(r.stages).epsilon;
}

}  // namespace

TEST(StagePlan, StandardAndValidation) {
  const StagePlan p = StagePlan::standard();
  ASSERT_EQ(p.stages.size(), 3u);
  EXPECT_EQ(p.stages[0].setup, SetupId::setup1());
  EXPECT_EQ(p.stages[1].setup, SetupId::setup2());
  EXPECT_EQ(p.stages[2].setup, SetupId::setup1());
  EXPECT_EQ(p.transition_gap_s, 2.0);
  EXPECT_DOUBLE_EQ(p.total_duration(), 184.0);
  EXPECT_EQ(StagePlan::standard(SetupId::setup1_prime()).stages[2].setup, SetupId::setup1_prime());

  EXPECT_THROW(StagePlan{}.validate(), std::invalid_argument);
  EXPECT_THROW((StagePlan{{Stage{SetupId::setup2(), 0.0}}}).validate(), std::invalid_argument);
  EXPECT_THROW((StagePlan{{Stage{SetupId::setup2(), 1.0}}, -1.0}).validate(), std::invalid_argument);
}

TEST(Schedule, BinsAreOrderedAndStageTagged) {
  StagePlan plan = StagePlan::standard(SetupId::setup1(), 5.5);
  ImperfectionConfig c;
  const auto bins = build_schedule(plan, c);
  double t = -1.0;
  int transitions = 0;
  for (const auto& b : bins) {
    EXPECT_GT(b.start_s, t);
    EXPECT_GT(b.length_s, 0.0);
    EXPECT_LE(b.length_s, c.bin_width + 1e-12);
    t = b.start_s;
    transitions += b.stage == 0;
  }
  EXPECT_EQ(transitions, 4);
  EXPECT_NEAR(bins.back().start_s + bins.back().length_s, plan.total_duration(), 1e-9);
  // waveplate errors are frozen inside a stage
  for (const auto& b : bins) {
    if (b.stage == 1) EXPECT_EQ(b.errors.hwp_offsets_deg, bins.front().errors.hwp_offsets_deg);
  }
  // transition angles lie between the neighbouring settings
  for (const auto& b : bins) {
    if (b.stage != 0) continue;
    EXPECT_GE(b.hwp1.value, 0.0);
    EXPECT_LE(b.hwp1.value, 22.5);
    EXPECT_LE(b.hwp2.value, 0.0);
    EXPECT_GE(b.hwp2.value, -67.5);
  }
}

TEST(SimulateEvents, LosslessHeraldsEverySignal) {
  ImperfectionConfig c = ImperfectionConfig::ideal();
  const StagePlan plan{{Stage{SetupId::setup2(), 1.0}}, 0.0};
  const EventStreams e = simulate_events(plan, c);
  EXPECT_GT(e.heralded, 900u);
  EXPECT_LT(e.heralded, 1100u);
  ASSERT_EQ(e.trigger.size(), e.heralded);
  ASSERT_EQ(e.signal.size(), e.heralded);
  for (std::size_t i = 0; i < e.trigger.size(); ++i) {
    EXPECT_NEAR(e.signal[i].time_ns - e.trigger[i].time_ns, kSignalDelayNs, 1e-3);
  }
  EXPECT_TRUE(is_sorted(e.trigger));
  EXPECT_TRUE(is_sorted(e.signal));
}

TEST(SimulateEvents, DarkCountsArePoisson) {
  ImperfectionConfig c = ImperfectionConfig::ideal();
  c.pair_rate = 0.0;
  c.dark_count_rate = 25.0;
  const StagePlan plan{{Stage{SetupId::setup1(), 100.0}}, 0.0};
  const EventStreams e = simulate_events(plan, c);
  EXPECT_EQ(e.heralded, 0u);
  std::array<int, 9> per{};
  for (const auto& ev : e.trigger) ++per[static_cast<std::size_t>(ev.channel)];
  for (const auto& ev : e.signal) ++per[static_cast<std::size_t>(ev.channel)];
  for (int ch = 0; ch <= 8; ++ch) EXPECT_NEAR(per[static_cast<std::size_t>(ch)], 2500.0, 3.0 * 50.0) << ch;
}

TEST(SimulateEvents, DeterministicForSeed) {
  ImperfectionConfig c;
  c.phase_jitter_sigma = 0.5;
  const StagePlan plan{{Stage{SetupId::setup2(), 3.0}}, 0.0};
  const EventStreams a = simulate_events(plan, c);
  const EventStreams b = simulate_events(plan, c);
  EXPECT_EQ(a.trigger, b.trigger);
  EXPECT_EQ(a.signal, b.signal);
  c.rng_seed += 1;
  EXPECT_NE(simulate_events(plan, c).signal, a.signal);
}

TEST(RunExperiment, MonteCarloMatchesExactDistribution) {
  ImperfectionConfig c = ImperfectionConfig::ideal();
  c.phase_jitter_sigma = 0.9;
  c.pbs_extinction = 1e-3;
  const StagePlan plan{{Stage{SetupId::setup2(), 120.0}}, 0.0};
  c.pair_rate = 1000.0;
  const RunResult r = run_experiment(plan, c);
  const std::uint64_t n = sum(r.stages[0].counts);
  ASSERT_GE(n, 100000u);
  const DetectorDistribution p = expected_distribution(SetupId::setup2(), c);
  for (Detector d : kDetectors) {
    const double expected = p[d] * static_cast<double>(n);
    const double sd = std::sqrt(static_cast<double>(n) * p[d] * (1.0 - p[d]));
    EXPECT_NEAR(static_cast<double>(r.stages[0].counts[index(d)]), expected, 3.0 * sd) << to_string(d);
  }
}

TEST(RunExperiment, ZeroImperfectionsGiveExactZeros) {
  const ImperfectionConfig c = ImperfectionConfig::ideal();
  const StagePlan plan = StagePlan::standard(SetupId::setup1(), 20.0);
  const RunResult r = run_experiment(plan, c);
  const RunReport rep = analyze(r.stages);
  EXPECT_EQ(rep.epsilon, 0.0);
  EXPECT_EQ(rep.result1, 1.0);
  EXPECT_EQ(rep.stages[0].wrong, 0u);
  EXPECT_EQ(rep.stages[2].wrong, 0u);
  for (const auto& b : r.trace.bins) {
    if (b.stage == 2) EXPECT_EQ(b.rates[index(Detector::D2)], 0.0);
  }
}

TEST(RunExperiment, TraceRatesAreConsistentWithStageCounts) {
  const ImperfectionConfig c;
  const StagePlan plan = StagePlan::standard(SetupId::setup1(), 10.0);
  const RunResult r = run_experiment(plan, c);
  std::array<double, 8> from_trace{};
  double t = -1.0;
  for (std::size_t k = 0; k < r.trace.bins.size(); ++k) {
    const auto& b = r.trace.bins[k];
    EXPECT_GT(b.time_s, t);
    t = b.time_s;
    for (double rate : b.rates) EXPECT_GE(rate, 0.0);
    if (b.stage == 2) {
      for (std::size_t d = 0; d < 8; ++d) from_trace[d] += b.rates[d] * c.bin_width;
    }
  }
  for (std::size_t d = 0; d < 8; ++d) EXPECT_NEAR(from_trace[d], static_cast<double>(r.stages[1].counts[d]), 1e-6);
}

TEST(RunExperiment, EpsilonMonotoneInJitter) {
  const StagePlan plan{{Stage{SetupId::setup2(), 30.0}}, 0.0};
  ImperfectionConfig c;
  double prev = -1.0;
  for (double sigma : {0.0, 0.5, 1.0, 1.5, 2.0}) {
    c.phase_jitter_sigma = sigma;
    const double eps = run_epsilon(plan, c);
    // ~21000 Setup2 coincidences: binomial sd below 0.004
    EXPECT_GE(eps, prev - 0.012) << sigma;
    prev = eps;
  }
}

TEST(RunExperiment, EpsilonMonotoneInWaveplateError) {
  const StagePlan plan{{Stage{SetupId::setup2(), 30.0}}, 0.0};
  ImperfectionConfig c;
  double prev = -1.0;
  double first = 0.0;
  for (double sigma : {0.0, 2.0, 4.0, 8.0, 16.0}) {
    c.hwp_angle_sigma = sigma;
    double eps = 0.0;
    // waveplate errors are one draw per stage, so average several seeds
    for (std::uint64_t s = 0; s < 8; ++s) {
      c.rng_seed = 100 + s;
      eps += run_epsilon(plan, c) / 8.0;
    }
    if (sigma == 0.0) first = eps;
    EXPECT_GE(eps, prev - 0.005) << sigma;
    prev = eps;
  }
  EXPECT_GT(prev, first + 0.02);
}

TEST(QmAllowedDetectors, PerSetup) {
  using D = Detector;
  EXPECT_EQ(qm_allowed_detectors(SetupId::setup1()), (std::vector<D>{D::D2, D::D4}));
  EXPECT_EQ(qm_allowed_detectors(SetupId::setup1_prime()), (std::vector<D>{D::D6, D::D8}));
  EXPECT_EQ(qm_allowed_detectors(SetupId::setup2()), (std::vector<D>{D::D1, D::D3, D::D5, D::D7}));
}

TEST(Analyze, HeadlineLikeCounts) {
  const std::vector<StageCounts> s{stage(SetupId::setup2(), {81, 19, 81, 19, 81, 19, 81, 19})};
  const RunReport r = analyze(s);
  EXPECT_NEAR(r.epsilon, 0.19, 1e-15);
  EXPECT_EQ(r.result1 + r.result2, 1.0);
  EXPECT_EQ(r.verdict, Verdict::DisproofOfNCHV);
  EXPECT_EQ(r.bound.bound(), 1.0 / 3.0);
}

TEST(Analyze, IdealAndUniform) {
  const std::vector<StageCounts> ideal{stage(SetupId::setup2(), {5, 0, 7, 0, 6, 0, 9, 0})};
  const RunReport a = analyze(ideal);
  EXPECT_EQ(a.epsilon, 0.0);
  EXPECT_EQ(a.result1, 1.0);

  const std::vector<StageCounts> uniform{stage(SetupId::setup2(), {10, 10, 10, 10, 10, 10, 10, 10})};
  const RunReport u = analyze(uniform);
  EXPECT_EQ(u.epsilon, 0.5);
  EXPECT_EQ(u.verdict, Verdict::Inconclusive);
}

TEST(Analyze, PerStageAndPooledFractions) {
  const std::vector<StageCounts> s{stage(SetupId::setup1(), {1, 49, 0, 50, 0, 0, 0, 0}),
                                   stage(SetupId::setup2(), {20, 5, 20, 5, 20, 5, 20, 5}),
                                   stage(SetupId::custom(Degrees{22.5}, Degrees{22.5}), {0, 9, 0, 9, 0, 9, 0, 9})};
  const RunReport r = analyze(s);
  EXPECT_NEAR(*r.stages[0].error_fraction, 0.01, 1e-15);
  EXPECT_NEAR(r.epsilon, 0.2, 1e-15);
  EXPECT_NEAR(r.pooled_epsilon, 21.0 / 200.0, 1e-15);
  EXPECT_FALSE(r.stages[2].error_fraction.has_value());
  EXPECT_EQ(r.stages[2].total, 36u);
}

TEST(Analyze, ResultsPartitionExactly) {
  for (std::uint64_t a = 1; a < 40; a += 3) {
    for (std::uint64_t b = 0; b < 40; b += 7) {
      const std::vector<StageCounts> s{stage(SetupId::setup2(), {a, b, a + 1, b, 3, b + 2, a, 1})};
      const RunReport r = analyze(s);
      EXPECT_EQ(r.result1 + r.result2, 1.0);
      EXPECT_EQ(r.epsilon, r.result2);
    }
  }
}

TEST(Analyze, NoDataErrors) {
  const std::vector<StageCounts> no_setup2{stage(SetupId::setup1(), {1, 2, 3, 4, 0, 0, 0, 0})};
  EXPECT_THROW(analyze(no_setup2), NoDataError);
  const std::vector<StageCounts> empty{stage(SetupId::setup2(), {})};
  EXPECT_THROW(analyze(empty), NoDataError);
}
