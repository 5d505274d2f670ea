// Scenario runner and calibration workbench for the endotrainer haptic
// pipeline. Subcommands: run, calibrate, gen-samples.
//
// Exit codes: 0 ok, 2 usage/argument error, 3 config or validation error,
// 4 runtime invariant violation.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "endo/calibration.hpp"
#include "endo/errors.hpp"
#include "endo/random.hpp"
#include "endo/scenario.hpp"
#include "endo/sensor.hpp"
#include "endo/teleop/simulation.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitConfig = 3;
constexpr int kExitRuntime = 4;

void print_matrix(const char* label, const Eigen::Matrix3d& m) {
  std::printf("%s\n", label);
  for (int r = 0; r < 3; ++r)
    std::printf("  [ %12.6f  %12.6f  %12.6f ]\n", m(r, 0), m(r, 1), m(r, 2));
}

void print_report(const endo::AccuracyReport& rep) {
  std::printf("accuracy report (%zu samples, full scale Fz %.3g N, "
              "Mx %.3g N·mm, My %.3g N·mm)\n",
              rep.sample_count, rep.full_scale.fz, rep.full_scale.mx,
              rep.full_scale.my);
  std::printf("  per-axis accuracy:  Fz %.2f%%  Mx %.2f%%  My %.2f%%\n",
              rep.per_axis_accuracy[0], rep.per_axis_accuracy[1],
              rep.per_axis_accuracy[2]);
  std::printf("  per-axis RMSE:      Fz %.4g N  Mx %.4g N·mm  My %.4g N·mm\n",
              rep.per_axis_rmse[0], rep.per_axis_rmse[1], rep.per_axis_rmse[2]);
  std::printf("  overall accuracy:   %.2f%%\n", rep.overall_accuracy);
  if (rep.out_of_range)
    std::printf("  warning: estimates exceed the metric's range; "
                "accuracy is reported unclamped\n");
}

int cmd_run(const std::string& config_path,
            const std::vector<std::string>& overrides,
            std::string trace_path, std::string summary_path) {
  endo::Scenario scenario = endo::load_scenario(config_path, overrides);
  if (!trace_path.empty()) scenario.outputs.trace_path = trace_path;
  if (!summary_path.empty()) scenario.outputs.summary_path = summary_path;

  std::ofstream trace;
  std::ostream* sink = nullptr;
  if (!scenario.outputs.trace_path.empty()) {
    trace.open(scenario.outputs.trace_path, std::ios::binary);
    if (!trace)
      throw endo::InvalidInput("cannot open trace output: " +
                               scenario.outputs.trace_path);
    sink = &trace;
  }

  const endo::SummaryStats stats = endo::run_scenario(scenario.sim, sink);

  std::cout << endo::summary_to_text(stats);
  if (!scenario.outputs.summary_path.empty()) {
    std::ofstream out(scenario.outputs.summary_path, std::ios::binary);
    if (!out)
      throw endo::InvalidInput("cannot open summary output: " +
                               scenario.outputs.summary_path);
    out << endo::summary_to_json(stats).dump(2) << "\n";
  }
  if (!scenario.outputs.trace_path.empty())
    std::cout << "trace written to " << scenario.outputs.trace_path << "\n";
  return kExitOk;
}

int cmd_calibrate(const std::string& samples_path, double k, double d,
                  const std::vector<double>& full_scale) {
  const auto samples = endo::read_samples_csv(samples_path);
  const endo::FitResult fit = endo::fit_calibration(samples);

  const endo::SensorParams params(k, d);
  const endo::CalibrationMatrix analytic = endo::calibration_matrix(params);

  std::printf("fitted calibration from %zu samples "
              "(rms residual %.4g, condition number %.4g)\n",
              samples.size(), fit.rms_residual, fit.cal.condition_number);
  print_matrix("fitted m (wrench = m * readings):", fit.cal.m);
  print_matrix("analytic m for k/d:", analytic.m);
  std::printf("max |fitted - analytic| entry: %.6g\n",
              (fit.cal.m - analytic.m).cwiseAbs().maxCoeff());

  const endo::Wrench3 fs{full_scale[0], full_scale[1], full_scale[2]};
  print_report(endo::accuracy_report(fit.cal, samples, fs));
  return kExitOk;
}

int cmd_gen_samples(double k, double d, int n, double sigma,
                    double quantization, std::uint64_t seed,
                    const std::string& out_path, double fz_range,
                    double m_range) {
  const endo::SensorParams params(k, d);
  const endo::CalibrationMatrix cal = endo::calibration_matrix(params);
  endo::Rng rng(seed);
  endo::PhotoNoiseModel noise(sigma, quantization, seed + 1);

  std::vector<endo::CalibrationSample> samples;
  samples.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const endo::Wrench3 w{rng.uniform(-fz_range, fz_range),
                          rng.uniform(-m_range, m_range),
                          rng.uniform(-m_range, m_range)};
    const auto defl = endo::forward_deflections(w, params);
    const auto readings = endo::photo_from_springs(defl, noise);
    // Ground truth is what the clamped springs actually transmit, so
    // saturated draws stay honest in the file.
    const endo::Wrench3 truth =
        defl.saturated
            ? endo::estimate_wrench(endo::photo_from_springs(defl), cal)
            : w;
    samples.push_back({readings, truth});
  }
  endo::write_samples_csv(out_path, samples);
  std::printf("wrote %d samples to %s\n", n, out_path.c_str());
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Endotrainer haptic pipeline: scenario runner and "
               "calibration tools"};
  app.require_subcommand(1);

  // run
  auto* run = app.add_subcommand("run", "Run a scenario config");
  std::string config_path;
  std::vector<std::string> overrides;
  std::string trace_path, summary_path;
  run->add_option("config", config_path, "Scenario config (JSON)")->required();
  run->add_option("--set", overrides,
                  "Override a config field, e.g. --set sensor.sigma=0");
  run->add_option("--trace", trace_path, "Trace CSV path (overrides config)");
  run->add_option("--summary", summary_path,
                  "Summary JSON path (overrides config)");

  // calibrate
  auto* calib = app.add_subcommand(
      "calibrate", "Fit a calibration matrix from a samples CSV");
  std::string samples_path;
  double k = 0.196, d = 16.0;
  std::vector<double> full_scale{5.0, 80.0, 80.0};
  std::vector<double> emit_kd;
  calib->add_option("samples", samples_path,
                    "CSV with header dA_mm,dB_mm,dC_mm,Fz_N,Mx_Nmm,My_Nmm");
  calib->add_option("--k", k, "Spring stiffness N/mm for the analytic matrix");
  calib->add_option("--d", d, "Spring radius mm for the analytic matrix");
  calib->add_option("--full-scale", full_scale,
                    "Full-scale Fz Mx My for the accuracy metric")
      ->expected(3);
  calib->add_option("--emit-analytic", emit_kd,
                    "Print the analytic matrix for k d and exit")
      ->expected(2);

  // gen-samples
  auto* gen = app.add_subcommand("gen-samples",
                                 "Synthesize calibration samples");
  double gk = 0.196, gd = 16.0, sigma = 0.0, quantization = 0.0;
  double fz_range = 2.0, m_range = 8.0;
  int n = 50;
  std::uint64_t seed = 1;
  std::string out_path = "samples.csv";
  gen->add_option("--k", gk, "Spring stiffness N/mm");
  gen->add_option("--d", gd, "Spring radius mm");
  gen->add_option("--n", n, "Sample count")->check(CLI::NonNegativeNumber);
  gen->add_option("--sigma", sigma, "Reading noise std dev, mm");
  gen->add_option("--quantization", quantization, "Reading quantization, mm");
  gen->add_option("--seed", seed, "RNG seed");
  gen->add_option("--out", out_path, "Output CSV path")->required();
  gen->add_option("--fz-range", fz_range, "Wrench draw range ±N");
  gen->add_option("--m-range", m_range, "Moment draw range ±N·mm");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (run->parsed())
      return cmd_run(config_path, overrides, trace_path, summary_path);
    if (calib->parsed()) {
      if (!emit_kd.empty()) {
        const endo::SensorParams p(emit_kd[0], emit_kd[1]);
        const auto cal = endo::calibration_matrix(p);
        print_matrix("analytic m (wrench = m * readings):", cal.m);
        print_matrix("published form (wrench = -P * readings), P:", -cal.m);
        return kExitOk;
      }
      if (samples_path.empty()) {
        std::cerr << "calibrate: a samples CSV (or --emit-analytic) is "
                     "required\n";
        return kExitUsage;
      }
      return cmd_calibrate(samples_path, k, d, full_scale);
    }
    if (gen->parsed())
      return cmd_gen_samples(gk, gd, n, sigma, quantization, seed, out_path,
                             fz_range, m_range);
  } catch (const endo::ConfigError& e) {
    std::cerr << e.what() << "\n";
    return kExitConfig;
  } catch (const endo::DegenerateData& e) {
    std::cerr << e.what() << "\n";
    return kExitConfig;
  } catch (const endo::InvalidInput& e) {
    std::cerr << e.what() << "\n";
    return kExitUsage;
  } catch (const endo::InvariantViolation& e) {
    std::cerr << e.what() << "\n";
    return kExitRuntime;
  } catch (const endo::NumericError& e) {
    std::cerr << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitUsage;
}
