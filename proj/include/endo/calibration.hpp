#pragma once

#include <array>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "endo/sensor.hpp"

namespace endo {

/// One (readings, known wrench) calibration pair.
struct CalibrationSample {
  PhotoReadings readings;
  Wrench3 true_wrench;
};

struct FitResult {
  CalibrationMatrix cal;
  double rms_residual = 0.0;  // per-sample RMS of |m·r - w|, mixed N / N·mm
};

/// Full-scale-normalized accuracy: per axis,
/// 100 * (1 - mean(|estimate - truth| / full_scale_axis)), overall = mean of
/// the three axes. The value is reported unclamped; `out_of_range` flags a
/// pathological data set that pushed any axis below zero.
struct AccuracyReport {
  std::array<double, 3> per_axis_accuracy{};  // percent, order Fz, Mx, My
  double overall_accuracy = 0.0;              // percent
  std::array<double, 3> per_axis_rmse{};      // N, N·mm, N·mm
  Wrench3 full_scale;
  std::size_t sample_count = 0;
  bool out_of_range = false;
};

/// Ordinary least squares over Σ|m·readings - wrench|², one row of m per
/// wrench axis, solved by SVD. No regularization: the model is exactly
/// linear, and a penalty would bias recovery of the analytic matrix.
///
/// Requires at least 3 samples whose readings span reading space; otherwise
/// throws DegenerateData carrying the unexcited direction.
FitResult fit_calibration(const std::vector<CalibrationSample>& samples);

/// Evaluate `cal` against known-wrench samples. full_scale components must be
/// positive and finite; samples must be non-empty.
AccuracyReport accuracy_report(const CalibrationMatrix& cal,
                               const std::vector<CalibrationSample>& samples,
                               const Wrench3& full_scale);

/// CSV with header `dA_mm,dB_mm,dC_mm,Fz_N,Mx_Nmm,My_Nmm`, one sample per
/// row, '.' decimal separator. Values round-trip exactly.
void write_samples_csv(const std::string& path,
                       const std::vector<CalibrationSample>& samples);
std::vector<CalibrationSample> read_samples_csv(const std::string& path);

}  // namespace endo
