// Subcommand implementations. Each returns the process exit code:
// 0 success (for `run`: NCHV disproved), 1 inconclusive, 2 usage or input error.
#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>

namespace ksphoton::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInconclusive = 1;
inline constexpr int kExitError = 2;

struct PredictOptions {
  std::optional<std::string> setup;
  std::optional<double> hwp1;
  std::optional<double> hwp2;
};

struct RunOptions {
  std::optional<std::string> config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out_path;
};

struct SweepOptions {
  std::string param;
  double from = 0.0;
  double to = 0.0;
  int steps = 1;
  std::optional<std::string> config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out_path;
};

int cmd_predict(const PredictOptions& opts, std::ostream& out, std::ostream& err);
int cmd_nchv_check(std::ostream& out);
int cmd_run(const RunOptions& opts, std::ostream& out, std::ostream& err);
int cmd_sweep(const SweepOptions& opts, std::ostream& out, std::ostream& err);

/// Report path written next to a trace: `trace.csv` -> `trace.json`.
std::string report_path_for(const std::string& trace_path);

}  // namespace ksphoton::cli
