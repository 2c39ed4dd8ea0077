#include <iostream>

#include <CLI11.hpp>

#include "cli/commands.hpp"

int main(int argc, char** argv) {
  using namespace ksphoton::cli;

  CLI::App app{"Single-photon all-or-nothing Kochen-Specker experiment simulator"};
  app.require_subcommand(1);

  PredictOptions predict;
  auto* predict_cmd = app.add_subcommand("predict", "Exact detector probabilities for one setup");
  predict_cmd->add_option("--setup", predict.setup, "setup1 | setup1p | setup2 | custom/<hwp1>/<hwp2>");
  predict_cmd->add_option("--hwp1", predict.hwp1, "HWP1 angle in degrees (custom setup)");
  predict_cmd->add_option("--hwp2", predict.hwp2, "HWP2 angle in degrees (custom setup)");

  auto* nchv_cmd = app.add_subcommand("nchv-check", "Brute-force noncontextual assignment proof");

  RunOptions run;
  auto* run_cmd = app.add_subcommand("run", "Monte Carlo run of the three-stage protocol");
  run_cmd->add_option("--config", run.config_path, "Run configuration file");
  run_cmd->add_option("--seed", run.seed, "RNG seed (overrides the config)");
  run_cmd->add_option("--out", run.out_path, "Trace CSV path; the report goes next to it as .json");

  SweepOptions sweep;
  auto* sweep_cmd = app.add_subcommand("sweep", "Error fraction as a function of one config parameter");
  sweep_cmd->add_option("--param", sweep.param, "ImperfectionConfig field name")->required();
  sweep_cmd->add_option("--from", sweep.from, "First value")->required();
  sweep_cmd->add_option("--to", sweep.to, "Last value")->required();
  sweep_cmd->add_option("--steps", sweep.steps, "Number of points")->required();
  sweep_cmd->add_option("--config", sweep.config_path, "Run configuration file");
  sweep_cmd->add_option("--seed", sweep.seed, "RNG seed (overrides the config)");
  sweep_cmd->add_option("--out", sweep.out_path, "CSV output path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitError;
  }

  if (*predict_cmd) return cmd_predict(predict, std::cout, std::cerr);
  if (*nchv_cmd) return cmd_nchv_check(std::cout);
  if (*run_cmd) return cmd_run(run, std::cout, std::cerr);
  if (*sweep_cmd) return cmd_sweep(sweep, std::cout, std::cerr);
  return kExitError;
}
