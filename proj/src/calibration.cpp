#include "endo/calibration.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "endo/errors.hpp"

namespace endo {

FitResult fit_calibration(const std::vector<CalibrationSample>& samples) {
  const auto n = static_cast<Eigen::Index>(samples.size());

  Eigen::MatrixXd A(n, 3);  // stacked readings
  Eigen::MatrixXd W(n, 3);  // stacked wrenches
  for (Eigen::Index i = 0; i < n; ++i) {
    if (!samples[i].readings.finite() || !samples[i].true_wrench.finite())
      throw InvalidInput("fit_calibration: non-finite sample " +
                         std::to_string(i));
    A.row(i) = samples[i].readings.vec().transpose();
    W.row(i) = samples[i].true_wrench.vec().transpose();
  }

  // Rank check on the reading cloud. The right singular vector of the
  // smallest singular value is the direction no sample excites.
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeThinU |
                                               Eigen::ComputeFullV);
  const double smax = n > 0 ? svd.singularValues()(0) : 0.0;
  const Eigen::Index rank_needed = 3;
  if (n < rank_needed || svd.singularValues().size() < rank_needed ||
      svd.singularValues()(2) <= smax * 1e-10 || smax == 0.0) {
    Eigen::Vector3d dir = Eigen::Vector3d::UnitX();
    if (n > 0 && svd.matrixV().cols() == 3)
      dir = svd.matrixV().col(svd.matrixV().cols() - 1);
    std::ostringstream msg;
    msg << "fit_calibration: samples are rank-deficient; reading direction ("
        << dir.x() << ", " << dir.y() << ", " << dir.z()
        << ") is not excited (" << n << " samples)";
    throw DegenerateData(msg.str(), dir);
  }

  // Solve A * m^T = W column-by-column through the same SVD.
  Eigen::Matrix3d mt;
  for (int axis = 0; axis < 3; ++axis)
    mt.col(axis) = svd.solve(W.col(axis));

  FitResult out;
  out.cal.m = mt.transpose();

  Eigen::JacobiSVD<Eigen::Matrix3d> msvd(out.cal.m);
  const double m_smin = msvd.singularValues()(2);
  out.cal.condition_number =
      m_smin > 0.0 ? msvd.singularValues()(0) / m_smin
                   : std::numeric_limits<double>::infinity();

  out.rms_residual =
      std::sqrt((A * mt - W).squaredNorm() / static_cast<double>(n));
  return out;
}

AccuracyReport accuracy_report(const CalibrationMatrix& cal,
                               const std::vector<CalibrationSample>& samples,
                               const Wrench3& full_scale) {
  if (samples.empty())
    throw InvalidInput("accuracy_report: at least one sample required");
  const Eigen::Vector3d fs = full_scale.vec();
  for (int i = 0; i < 3; ++i) {
    if (!(fs[i] > 0.0) || !std::isfinite(fs[i]))
      throw InvalidInput(
          "accuracy_report: full_scale components must be finite and > 0");
  }

  Eigen::Vector3d abs_err_sum = Eigen::Vector3d::Zero();
  Eigen::Vector3d sq_err_sum = Eigen::Vector3d::Zero();
  for (const auto& s : samples) {
    const Eigen::Vector3d est = cal.m * s.readings.vec();
    const Eigen::Vector3d err = (est - s.true_wrench.vec()).cwiseAbs();
    abs_err_sum += err;
    sq_err_sum += err.cwiseProduct(err);
  }

  const double n = static_cast<double>(samples.size());
  AccuracyReport rep;
  rep.full_scale = full_scale;
  rep.sample_count = samples.size();
  for (int i = 0; i < 3; ++i) {
    rep.per_axis_accuracy[i] = 100.0 * (1.0 - abs_err_sum[i] / n / fs[i]);
    rep.per_axis_rmse[i] = std::sqrt(sq_err_sum[i] / n);
    if (rep.per_axis_accuracy[i] < 0.0) rep.out_of_range = true;
  }
  rep.overall_accuracy = (rep.per_axis_accuracy[0] + rep.per_axis_accuracy[1] +
                          rep.per_axis_accuracy[2]) /
                         3.0;
  return rep;
}

namespace {

constexpr const char* kSamplesHeader = "dA_mm,dB_mm,dC_mm,Fz_N,Mx_Nmm,My_Nmm";

}  // namespace

void write_samples_csv(const std::string& path,
                       const std::vector<CalibrationSample>& samples) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidInput("write_samples_csv: cannot open " + path);
  out << kSamplesHeader << "\n";
  char buf[160];
  for (const auto& s : samples) {
    // %.17g round-trips doubles exactly.
    std::snprintf(buf, sizeof(buf),
                  "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", s.readings.dA,
                  s.readings.dB, s.readings.dC, s.true_wrench.fz,
                  s.true_wrench.mx, s.true_wrench.my);
    out << buf;
  }
  if (!out) throw InvalidInput("write_samples_csv: write failed for " + path);
}

std::vector<CalibrationSample> read_samples_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidInput("read_samples_csv: cannot open " + path);

  std::string line;
  if (!std::getline(in, line))
    throw InvalidInput("read_samples_csv: empty file " + path);
  // Tolerate trailing \r from Windows-edited files.
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kSamplesHeader)
    throw InvalidInput("read_samples_csv: bad header in " + path +
                       " (expected " + kSamplesHeader + ")");

  std::vector<CalibrationSample> samples;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    double v[6];
    std::istringstream ss(line);
    std::string cell;
    for (int i = 0; i < 6; ++i) {
      if (!std::getline(ss, cell, ','))
        throw InvalidInput("read_samples_csv: line " + std::to_string(lineno) +
                           ": expected 6 fields");
      std::size_t used = 0;
      v[i] = std::stod(cell, &used);
      if (used != cell.size())
        throw InvalidInput("read_samples_csv: line " + std::to_string(lineno) +
                           ": bad number '" + cell + "'");
    }
    samples.push_back({{v[0], v[1], v[2]}, {v[3], v[4], v[5]}});
  }
  return samples;
}

}  // namespace endo
