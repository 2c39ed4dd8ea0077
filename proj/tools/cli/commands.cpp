#include "commands.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <vector>

#include <fmt/format.h>

#include "ksphoton/experiment.hpp"
#include "ksphoton/export.hpp"
#include "ksphoton/nchv.hpp"
#include "run_config.hpp"

namespace ksphoton::cli {

namespace {

std::string sign_text(Sign s) { return s == Sign::Plus ? "+1" : "-1"; }

RunConfig load_or_default(const std::optional<std::string>& path, const std::optional<std::uint64_t>& seed) {
  RunConfig rc = path ? load_run_config(*path) : RunConfig{};
  if (seed) rc.imperfections.rng_seed = *seed;
  return rc;
}

}  // namespace

std::string report_path_for(const std::string& trace_path) {
  std::filesystem::path p(trace_path);
  p.replace_extension(".json");
  return p.string();
}

int cmd_predict(const PredictOptions& opts, std::ostream& out, std::ostream& err) {
  try {
    const bool custom = opts.hwp1 || opts.hwp2;
    if (custom && opts.setup) throw ConfigError("setup", "--setup cannot be combined with --hwp1/--hwp2");
    if (custom && !(opts.hwp1 && opts.hwp2)) throw ConfigError("hwp", "--hwp1 and --hwp2 must be given together");
    SetupId setup = SetupId::setup2();
    if (custom) {
      try {
        setup = SetupId::custom(Degrees{*opts.hwp1}, Degrees{*opts.hwp2});
      } catch (const std::invalid_argument& e) {
        throw ConfigError("hwp", e.what());
      }
    } else if (opts.setup) {
      setup = parse_setup(*opts.setup);
    }

    const InterferometerPhases& phases = tuned_phases();
    const DetectorDistribution p = propagate(build_setup(setup, phases.bs1, phases.bs2), bell_state());
    out << fmt::format("setup = {}\nhwp1_deg = {}\nhwp2_deg = {}\n", setup.name(), setup.hwp1().value,
                       setup.hwp2().value);
    out << fmt::format("phase1_rad = {:.12f}\nphase2_rad = {:.12f}\n", phases.bs1.value, phases.bs2.value);
    out << "detector,probability\n";
    for (Detector d : kDetectors) out << fmt::format("{},{:.12f}\n", to_string(d), p[d]);
    out << fmt::format("qm_class(D1,D3,D5,D7) = {:.12f}\n",
                       p.sum({Detector::D1, Detector::D3, Detector::D5, Detector::D7}));
    out << fmt::format("nchv_class(D2,D4,D6,D8) = {:.12f}\n",
                       p.sum({Detector::D2, Detector::D4, Detector::D6, Detector::D8}));
    return kExitOk;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitError;
  }
}

int cmd_nchv_check(std::ostream& out) {
  const KSSet ks = ks_set();
  const auto all = enumerate_assignments();

  out << "Kochen-Specker set:\n";
  for (const Constraint& c : ks.constraints()) out << "  " << c.to_string() << '\n';

  out << fmt::format("all assignments: {}\n", all.size());
  for (const Assignment& a : all) {
    out << "  " << a.to_string() << " | ";
    out << fmt::format("Z1Z2={} X1X2={} Z1X2={} X1Z2={}\n", sign_text(a[Observable::Z1Z2]),
                       sign_text(a[Observable::X1X2]), sign_text(a[Observable::Z1X2]), sign_text(a[Observable::X1Z2]));
  }

  const auto premises = preparation_premises();
  const auto survivors = consistent_assignments(premises);
  out << fmt::format("satisfying Z1Z2 = +1 and X1X2 = +1: {} of {}\n", survivors.size(), all.size());
  bool all_equal = !survivors.empty();
  for (const Assignment& a : survivors) {
    const bool eq = a[Observable::Z1X2] == a[Observable::X1Z2];
    all_equal = all_equal && eq;
    out << fmt::format("  {} | v(Z1X2)={} v(X1Z2)={} {}\n", a.to_string(), sign_text(a[Observable::Z1X2]),
                       sign_text(a[Observable::X1Z2]), eq ? "equal" : "OPPOSITE");
  }
  out << fmt::format("NCHV prediction v(Z1X2) = v(X1Z2): {}\n", all_equal ? "holds for every survivor" : "violated");

  const StateVector psi = bell_state();
  const double zz = expectation(psi, observable(Observable::Z1Z2));
  const double xx = expectation(psi, observable(Observable::X1X2));
  const double prod = expectation(psi, observable(Observable::Z1X2) * observable(Observable::X1Z2));
  out << fmt::format("quantum prediction: <Z1Z2> = {:+.12f}, <X1X2> = {:+.12f}, <(Z1X2)(X1Z2)> = {:+.12f}\n", zz, xx,
                     prod);
  const bool quantum_ok = std::abs(zz - 1.0) <= kNormTolerance && std::abs(xx - 1.0) <= kNormTolerance &&
                          std::abs(prod + 1.0) <= kNormTolerance;

  const auto full = consistent_assignments(ks.constraints());
  out << fmt::format("consistent assignments: {} of {}\n", full.size(), all.size());
  const EpsilonBound bound = epsilon_bound(ks);
  out << fmt::format("error-fraction bound: epsilon < 1/{}\n", bound.n_measurements());

  const bool contradiction = full.empty() && all_equal && quantum_ok;
  out << (contradiction ? "contradiction confirmed\n" : "contradiction NOT confirmed\n");
  return contradiction ? kExitOk : kExitInconclusive;
}

int cmd_run(const RunOptions& opts, std::ostream& out, std::ostream& err) {
  try {
    const RunConfig rc = load_or_default(opts.config_path, opts.seed);
    const ImperfectionConfig config = rc.effective_imperfections();
    const RunResult result = run_experiment(rc.plan, config);
    const RunReport report = analyze(result.stages);

    if (opts.out_path) {
      std::ofstream csv(*opts.out_path);
      if (!csv) throw ConfigError("out", "cannot write " + *opts.out_path);
      write_trace_csv(csv, result.trace);
      const std::string json_path = report_path_for(*opts.out_path);
      std::ofstream json(json_path);
      if (!json) throw ConfigError("out", "cannot write " + json_path);
      json << report_json(report, config, rc.plan);
    }

    out << fmt::format("seed = {}\n", config.rng_seed);
    if (rc.target_epsilon) {
      out << fmt::format("phase_jitter_sigma = {:.6f} (visibility {:.4f})\n", config.phase_jitter_sigma,
                         config.visibility());
    }
    out << fmt::format("heralded = {}\n", result.heralded);
    out << fmt::format("result1 = {:.6f}\nresult2 = {:.6f}\n", report.result1, report.result2);
    out << fmt::format("epsilon = {:.6f}\npooled_epsilon = {:.6f}\n", report.epsilon, report.pooled_epsilon);
    out << fmt::format("bound = {:.6f}\nverdict = {}\n", report.bound.bound(), to_string(report.verdict));
    return report.verdict == Verdict::DisproofOfNCHV ? kExitOk : kExitInconclusive;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitError;
  }
}

int cmd_sweep(const SweepOptions& opts, std::ostream& out, std::ostream& err) {
  try {
    const auto& fields = numeric_config_fields();
    if (std::find(fields.begin(), fields.end(), opts.param) == fields.end()) {
      throw ConfigError(opts.param, "unknown sweep parameter");
    }
    if (opts.steps < 1) throw ConfigError("steps", "must be at least 1");
    if (!std::isfinite(opts.from) || !std::isfinite(opts.to)) throw ConfigError("from/to", "must be finite");

    const RunConfig rc = load_or_default(opts.config_path, opts.seed);
    const ImperfectionConfig base = rc.effective_imperfections();

    struct Row {
      double value;
      double epsilon;
      std::string verdict;
    };
    std::vector<Row> rows;
    for (int i = 0; i < opts.steps; ++i) {
      const double v =
          opts.steps == 1 ? opts.from : opts.from + (opts.to - opts.from) * i / static_cast<double>(opts.steps - 1);
      ImperfectionConfig c = base;
      set_config_field(c, opts.param, v);
      const RunResult result = run_experiment(rc.plan, c);
      try {
        const RunReport report = analyze(result.stages);
        rows.push_back(Row{v, report.epsilon, to_string(report.verdict)});
      } catch (const NoDataError&) {
        rows.push_back(Row{v, std::numeric_limits<double>::quiet_NaN(), "NoData"});
      }
    }

    std::size_t nearest = rows.size();
    double best = std::numeric_limits<double>::infinity();
    const double bound = epsilon_bound(ks_set()).bound();
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (std::isnan(rows[i].epsilon)) continue;
      const double d = std::abs(rows[i].epsilon - bound);
      if (d < best) {
        best = d;
        nearest = i;
      }
    }

    std::ofstream file;
    if (opts.out_path) {
      file.open(*opts.out_path);
      if (!file) throw ConfigError("out", "cannot write " + *opts.out_path);
    }
    std::ostream& sink = opts.out_path ? static_cast<std::ostream&>(file) : out;
    sink << opts.param << ",epsilon,verdict,flag\n";
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const Row& r = rows[i];
      sink << fmt::format("{:.6g},{},{},{}\n", r.value,
                          std::isnan(r.epsilon) ? std::string("nan") : fmt::format("{:.6f}", r.epsilon), r.verdict,
                          i == nearest ? "nearest_bound" : "");
    }
    return kExitOk;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitError;
  }
}

}  // namespace ksphoton::cli
