#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>

#include <Eigen/Dense>

#include "endo/errors.hpp"
#include "endo/random.hpp"

namespace endo {

// ---------------------------------------------------------------------------
// Three-spring optoelectronic force/torque sensor.
//
// The sensor measures Fz (N), Mx and My (N·mm) only; it has no in-plane
// channels, so Fx/Fy/Mz never appear in any interface. Three springs of
// stiffness k sit at radius d from the center, 120° apart, with spring 1 on
// the +y side so it carries the full moment arm d for Mx (angles 90°, 210°,
// 330° from +x). Photo sensors sit diametrically opposite the springs, so a
// noise-free reading is the negated spring deflection.
//
// Canonical units throughout: N, mm, N·mm. Positive deflection = elongation.
// ---------------------------------------------------------------------------

/// Outer geometry of the physical sensor. Documentation-only: none of these
/// enter the deflection equations.
inline constexpr double kSensorOuterDiameterMm = 40.0;
inline constexpr double kSensorHeightMm = 28.0;
inline constexpr double kSensorThroughHoleMm = 8.5;

/// The one spring layout the deflection equations are derived for.
inline constexpr std::array<double, 3> kSpringAnglesDeg = {90.0, 210.0, 330.0};

template <typename Scalar>
struct SensorParamsT {
  Scalar k;                 // spring stiffness, N/mm
  Scalar d;                 // spring radial distance from center, mm
  Scalar deflection_limit;  // max |deflection| per spring before clamping, mm
  std::array<Scalar, 3> spring_angles_deg = {Scalar(90), Scalar(210),
                                             Scalar(330)};

  SensorParamsT(Scalar stiffness, Scalar radius,
                Scalar limit = Scalar(5.6),
                std::array<Scalar, 3> angles = {Scalar(90), Scalar(210),
                                                Scalar(330)})
      : k(stiffness), d(radius), deflection_limit(limit),
        spring_angles_deg(angles) {
    if (!(k > Scalar(0)) || !std::isfinite(static_cast<double>(k)))
      throw InvalidInput("SensorParams: k must be finite and > 0");
    if (!(d > Scalar(0)) || !std::isfinite(static_cast<double>(d)))
      throw InvalidInput("SensorParams: d must be finite and > 0");
    if (!(deflection_limit > Scalar(0)))
      throw InvalidInput("SensorParams: deflection_limit must be > 0");
    // The deflection equations are valid for exactly this layout; any other
    // placement needs a re-derivation, so construction rejects it.
    for (int i = 0; i < 3; ++i) {
      if (std::abs(static_cast<double>(spring_angles_deg[i]) -
                   kSpringAnglesDeg[i]) > 1e-12)
        throw InvalidInput(
            "SensorParams: spring_angles must be {90, 210, 330} degrees");
    }
  }
};

/// The wrench the sensor can see: Fz in N, Mx/My in N·mm.
template <typename Scalar>
struct Wrench3T {
  Scalar fz = Scalar(0);
  Scalar mx = Scalar(0);
  Scalar my = Scalar(0);

  Eigen::Matrix<Scalar, 3, 1> vec() const {
    return Eigen::Matrix<Scalar, 3, 1>(fz, mx, my);
  }
  static Wrench3T from_vec(const Eigen::Matrix<Scalar, 3, 1>& v) {
    return {v[0], v[1], v[2]};
  }
  bool finite() const {
    return std::isfinite(static_cast<double>(fz)) &&
           std::isfinite(static_cast<double>(mx)) &&
           std::isfinite(static_cast<double>(my));
  }
};

/// Spring deflections in mm, positive = elongation. `saturated` is set when
/// any raw deflection exceeded the limit and was clamped.
template <typename Scalar>
struct SpringDeflectionsT {
  Scalar d1 = Scalar(0);
  Scalar d2 = Scalar(0);
  Scalar d3 = Scalar(0);
  bool saturated = false;

  Eigen::Matrix<Scalar, 3, 1> vec() const {
    return Eigen::Matrix<Scalar, 3, 1>(d1, d2, d3);
  }
};

/// Photo-sensor displacement readings in mm. Noise-free readings are the
/// negated deflections (sensors sit diametrically opposite the springs).
template <typename Scalar>
struct PhotoReadingsT {
  Scalar dA = Scalar(0);
  Scalar dB = Scalar(0);
  Scalar dC = Scalar(0);

  Eigen::Matrix<Scalar, 3, 1> vec() const {
    return Eigen::Matrix<Scalar, 3, 1>(dA, dB, dC);
  }
  static PhotoReadingsT from_vec(const Eigen::Matrix<Scalar, 3, 1>& v) {
    return {v[0], v[1], v[2]};
  }
  bool finite() const {
    return std::isfinite(static_cast<double>(dA)) &&
           std::isfinite(static_cast<double>(dB)) &&
           std::isfinite(static_cast<double>(dC));
  }
};

/// Linear map from photo readings to wrench, wrench = m * readings, with the
/// leading minus sign of the readings model folded into m. Negating m
/// recovers the conventional positive-Fz-row presentation of the inverse
/// compliance matrix.
template <typename Scalar>
struct CalibrationMatrixT {
  Eigen::Matrix<Scalar, 3, 3> m = Eigen::Matrix<Scalar, 3, 3>::Zero();
  Scalar condition_number = Scalar(0);
};

/// Additive Gaussian noise plus uniform quantization on the photo readings.
/// One instance owns one RNG stream; identical seed and inputs give
/// identical outputs. The Gaussian draws are unit normals scaled by sigma,
/// so two models with the same seed and different sigma see the same
/// underlying noise shape.
class PhotoNoiseModel {
 public:
  PhotoNoiseModel(double sigma, double quantization_step, std::uint64_t seed)
      : sigma_(sigma), quantization_step_(quantization_step), rng_(seed) {
    if (!(sigma >= 0.0) || !std::isfinite(sigma))
      throw InvalidInput("PhotoNoiseModel: sigma must be finite and >= 0");
    if (!(quantization_step >= 0.0) || !std::isfinite(quantization_step))
      throw InvalidInput(
          "PhotoNoiseModel: quantization_step must be finite and >= 0");
  }

  double sigma() const { return sigma_; }
  double quantization_step() const { return quantization_step_; }

  /// Gaussian noise first, then rounding to the nearest quantization step.
  PhotoReadingsT<double> apply(const PhotoReadingsT<double>& clean) {
    PhotoReadingsT<double> out = clean;
    out.dA = corrupt(out.dA);
    out.dB = corrupt(out.dB);
    out.dC = corrupt(out.dC);
    return out;
  }

 private:
  double corrupt(double v) {
    v += sigma_ * rng_.gaussian();
    if (quantization_step_ > 0.0)
      v = std::round(v / quantization_step_) * quantization_step_;
    return v;
  }

  double sigma_;
  double quantization_step_;
  Rng rng_;
};

/// Per-spring deflections under a combined (Fz, Mx, My) load:
///
///   d1 = Fz/(3k) + 2Mx/(3kd)
///   d2 = Fz/(3k) -  Mx/(3kd) + My/(sqrt(3)·k·d)
///   d3 = Fz/(3k) -  Mx/(3kd) - My/(sqrt(3)·k·d)
///
/// Each deflection is clamped to ±deflection_limit and the saturated flag
/// set if any raw value exceeded it.
template <typename Scalar>
SpringDeflectionsT<Scalar> forward_deflections(const Wrench3T<Scalar>& w,
                                               const SensorParamsT<Scalar>& p) {
  if (!w.finite()) throw InvalidInput("forward_deflections: non-finite wrench");

  const Scalar fz_term = w.fz / (Scalar(3) * p.k);
  const Scalar mx_full = Scalar(2) * w.mx / (Scalar(3) * p.k * p.d);
  const Scalar my_term =
      w.my / (Scalar(std::sqrt(3.0)) * p.k * p.d);

  SpringDeflectionsT<Scalar> s;
  s.d1 = fz_term + mx_full;
  s.d2 = fz_term - mx_full / Scalar(2) + my_term;
  s.d3 = fz_term - mx_full / Scalar(2) - my_term;

  const Scalar lim = p.deflection_limit;
  for (Scalar* di : {&s.d1, &s.d2, &s.d3}) {
    if (*di > lim || *di < -lim) {
      s.saturated = true;
      *di = std::clamp(*di, -lim, lim);
    }
  }
  return s;
}

/// Noise-free photo readings: the negated deflections.
template <typename Scalar>
PhotoReadingsT<Scalar> photo_from_springs(const SpringDeflectionsT<Scalar>& s) {
  return {-s.d1, -s.d2, -s.d3};
}

/// Readings with sensor noise. Negation first, then noise, then quantization.
inline PhotoReadingsT<double> photo_from_springs(
    const SpringDeflectionsT<double>& s, PhotoNoiseModel& noise) {
  return noise.apply(photo_from_springs(s));
}

/// Compliance matrix C with readings = -C * wrench:
///
///       [ 1/(3k)   2/(3kd)    0          ]
///   C = [ 1/(3k)  -1/(3kd)    1/(√3·kd)  ]
///       [ 1/(3k)  -1/(3kd)   -1/(√3·kd)  ]
template <typename Scalar>
Eigen::Matrix<Scalar, 3, 3> compliance_matrix(const SensorParamsT<Scalar>& p) {
  const Scalar a = Scalar(1) / (Scalar(3) * p.k);
  const Scalar b = Scalar(2) / (Scalar(3) * p.k * p.d);
  const Scalar c = Scalar(1) / (Scalar(std::sqrt(3.0)) * p.k * p.d);
  Eigen::Matrix<Scalar, 3, 3> C;
  C << a, b, Scalar(0),
       a, -b / Scalar(2), c,
       a, -b / Scalar(2), -c;
  return C;
}

/// Analytic calibration matrix m = -C^(-1), so wrench = m * readings.
/// For k = 0.196 N/mm, d = 16 mm, -m matches the published inverse
/// (0.196 row, 3.136/-1.568 row, ±2.716 row) to print rounding.
template <typename Scalar>
CalibrationMatrixT<Scalar> calibration_matrix(const SensorParamsT<Scalar>& p) {
  const Eigen::Matrix<Scalar, 3, 3> C = compliance_matrix(p);

  Eigen::JacobiSVD<Eigen::Matrix<Scalar, 3, 3>> svd(
      C, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Scalar smin = svd.singularValues()(2);
  const Scalar smax = svd.singularValues()(0);
  // Cannot happen for valid params; guarded anyway.
  if (!(smin > smax * Scalar(1e-14)))
    throw NumericError("calibration_matrix: compliance matrix is singular");

  CalibrationMatrixT<Scalar> cal;
  cal.m = -C.inverse();
  cal.condition_number = smax / smin;
  return cal;
}

/// wrench = m * readings; Fz in N, Mx/My in N·mm.
template <typename Scalar>
Wrench3T<Scalar> estimate_wrench(const PhotoReadingsT<Scalar>& r,
                                 const CalibrationMatrixT<Scalar>& cal) {
  if (!r.finite()) throw InvalidInput("estimate_wrench: non-finite readings");
  return Wrench3T<Scalar>::from_vec(cal.m * r.vec());
}

using SensorParams = SensorParamsT<double>;
using Wrench3 = Wrench3T<double>;
using SpringDeflections = SpringDeflectionsT<double>;
using PhotoReadings = PhotoReadingsT<double>;
using CalibrationMatrix = CalibrationMatrixT<double>;

}  // namespace endo
