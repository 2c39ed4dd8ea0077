#include <gtest/gtest.h>

#include <sstream>

#include "cli/run_config.hpp"

using namespace ksphoton;
using namespace ksphoton::cli;

namespace {

RunConfig parse(const std::string& text) {
  std::istringstream in(text);
  return parse_run_config(in);
}

std::string error_key(const std::string& text) {
  try {
    parse(text);
  } catch (const ConfigError& e) {
    return e.key().empty() ? "<none>" : e.key();
  }
  return "<no error>";
}

}  // namespace

TEST(ParseRunConfig, EmptyGivesDefaults) {
  const RunConfig rc = parse("# nothing here\n\n");
  const ImperfectionConfig def;
  EXPECT_EQ(rc.imperfections.detector_efficiency, def.detector_efficiency);
  EXPECT_EQ(rc.imperfections.rng_seed, kDefaultSeed);
  EXPECT_EQ(rc.plan.stages.size(), 3u);
  EXPECT_EQ(rc.plan.stages[0].duration_s, 60.0);
  EXPECT_FALSE(rc.target_epsilon.has_value());
}

TEST(ParseRunConfig, AllKeys) {
  const RunConfig rc = parse(
      "detector_efficiency = 0.5\n"
      "dark_count_rate = 10   # per second\n"
      "coincidence_window = 3\n"
      "pair_rate = 2000\n"
      "pbs_extinction = 0.001\n"
      "hwp_angle_sigma = 0.1\n"
      "phase_coherence_time = 0\n"
      "phase_jitter_sigma = 0.4\n"
      "bin_width = 0.5\n"
      "rng_seed = 18446744073709551615\n"
      "reference_setup = setup1p\n"
      "stage_duration = 12\n"
      "transition_gap = 0\n"
      "target_epsilon = 0.2\n");
  const ImperfectionConfig& c = rc.imperfections;
  EXPECT_EQ(c.detector_efficiency, 0.5);
  EXPECT_EQ(c.dark_count_rate, 10.0);
  EXPECT_EQ(c.coincidence_window, 3.0);
  EXPECT_EQ(c.pair_rate, 2000.0);
  EXPECT_EQ(c.pbs_extinction, 0.001);
  EXPECT_EQ(c.hwp_angle_sigma, 0.1);
  EXPECT_EQ(c.phase_coherence_time, 0.0);
  EXPECT_EQ(c.phase_jitter_sigma, 0.4);
  EXPECT_EQ(c.bin_width, 0.5);
  EXPECT_EQ(c.rng_seed, 18446744073709551615ull);
  EXPECT_EQ(rc.plan.stages[0].setup, SetupId::setup1_prime());
  EXPECT_EQ(rc.plan.stages[1].duration_s, 12.0);
  EXPECT_EQ(rc.plan.transition_gap_s, 0.0);
  EXPECT_EQ(*rc.target_epsilon, 0.2);
}

TEST(ParseRunConfig, ExplicitStages) {
  const RunConfig rc = parse("stages = setup1:30, setup2:45.5, custom/22.5/22.5:10\n");
  ASSERT_EQ(rc.plan.stages.size(), 3u);
  EXPECT_EQ(rc.plan.stages[1].duration_s, 45.5);
  EXPECT_EQ(rc.plan.stages[2].setup, SetupId::custom(Degrees{22.5}, Degrees{22.5}));
}

TEST(ParseRunConfig, ErrorsNameTheKey) {
  EXPECT_EQ(error_key("colour = blue\n"), "colour");
  EXPECT_EQ(error_key("detector_efficiency = 1.2\n"), "detector_efficiency");
  EXPECT_EQ(error_key("coincidence_window = 0\n"), "coincidence_window");
  EXPECT_EQ(error_key("dark_count_rate = abc\n"), "dark_count_rate");
  EXPECT_EQ(error_key("dark_count_rate = 5 6\n"), "dark_count_rate");
  EXPECT_EQ(error_key("pair_rate = inf\n"), "pair_rate");
  EXPECT_EQ(error_key("rng_seed = -3\n"), "rng_seed");
  EXPECT_EQ(error_key("rng_seed = 1.5\n"), "rng_seed");
  EXPECT_EQ(error_key("bin_width = 1\nbin_width = 2\n"), "bin_width");
  EXPECT_EQ(error_key("reference_setup = setup2\n"), "reference_setup");
  EXPECT_EQ(error_key("stage_duration = 0\n"), "stage_duration");
  EXPECT_EQ(error_key("transition_gap = -1\n"), "transition_gap");
  EXPECT_EQ(error_key("stages = setup1\n"), "stages");
  EXPECT_EQ(error_key("stages = setup1:0\n"), "stages");
  EXPECT_EQ(error_key("stages = custom/100/0:5\n"), "stages");
  EXPECT_EQ(error_key("stages = setup2:5\nstage_duration = 4\n"), "stages");
  EXPECT_EQ(error_key("target_epsilon = 0.6\n"), "target_epsilon");
  EXPECT_EQ(error_key("just some words\n"), "<none>");
  EXPECT_EQ(error_key("= 4\n"), "<none>");
}

TEST(ParseSetup, Tokens) {
  EXPECT_EQ(parse_setup("setup1"), SetupId::setup1());
  EXPECT_EQ(parse_setup("setup1p"), SetupId::setup1_prime());
  EXPECT_EQ(parse_setup("setup2"), SetupId::setup2());
  EXPECT_EQ(parse_setup("custom/-10/45"), SetupId::custom(Degrees{-10.0}, Degrees{45.0}));
  EXPECT_THROW(parse_setup("setup3"), ConfigError);
  EXPECT_THROW(parse_setup("custom/1"), ConfigError);
  EXPECT_THROW(parse_setup("custom/a/b"), ConfigError);
}

TEST(SetConfigField, KnownAndUnknown) {
  ImperfectionConfig c;
  for (const std::string& name : numeric_config_fields()) EXPECT_NO_THROW(set_config_field(c, name, 0.5)) << name;
  EXPECT_EQ(c.phase_jitter_sigma, 0.5);
  EXPECT_THROW(set_config_field(c, "nope", 1.0), ConfigError);
  EXPECT_THROW(set_config_field(c, "detector_efficiency", 2.0), ConfigError);
}

TEST(RunConfig, TargetEpsilonCalibrates) {
  const RunConfig rc = parse("target_epsilon = 0.19\n");
  const ImperfectionConfig c = rc.effective_imperfections();
  EXPECT_NEAR(c.visibility(), 0.62, 0.005);
  EXPECT_EQ(parse("").effective_imperfections().phase_jitter_sigma, 0.0);
}

TEST(LoadRunConfig, MissingFile) {
  EXPECT_THROW(load_run_config("/nonexistent/dir/run.cfg"), ConfigError);
}
