#include "endo/haptics.hpp"

#include <algorithm>

namespace endo {

Eigen::Matrix<double, 6, 1> reflected_wrench(const Wrench3& w,
                                             const ArmModel& m,
                                             const JointState7& q) {
  if (!w.finite()) throw InvalidInput("reflected_wrench: non-finite wrench");
  const Eigen::Matrix3d r =
      forward_kinematics(m, q).orientation.toRotationMatrix();
  Eigen::Matrix<double, 6, 1> f;
  f.head<3>() = r * Eigen::Vector3d(0.0, 0.0, w.fz);
  f.tail<3>() = r * Eigen::Vector3d(w.mx, w.my, 0.0);
  return f;
}

JointTorques7 kinesthetic_torques(const Wrench3& w, const ArmModel& m,
                                  const JointState7& q, const Vec7& caps) {
  const Eigen::Matrix<double, 6, 1> f = reflected_wrench(w, m, q);
  JointTorques7 out;
  out.tau = jacobian(m, q).transpose() * f;
  for (int i = 0; i < 7; ++i) {
    if (!(caps[i] > 0.0))
      throw InvalidInput("kinesthetic_torques: torque caps must be > 0");
    if (out.tau[i] > caps[i] || out.tau[i] < -caps[i]) {
      out.saturated = true;
      out.tau[i] = std::clamp(out.tau[i], -caps[i], caps[i]);
    }
  }
  return out;
}

VibrationCommand tactile_command(double grip_force_n, const TactileConfig& cfg,
                                 const VibrationCommand& prev) {
  cfg.validate();
  if (!(grip_force_n >= 0.0) || !std::isfinite(grip_force_n))
    throw InvalidInput("tactile_command: grip force must be finite and >= 0");

  VibrationCommand out;
  out.motor1_intensity = std::clamp(grip_force_n / cfg.f_max, 0.0, 1.0);

  if (grip_force_n > cfg.f_threshold) {
    out.motor2_on = true;
  } else if (grip_force_n < cfg.f_threshold - cfg.hysteresis) {
    out.motor2_on = false;
  } else {
    out.motor2_on = prev.motor2_on;  // inside the release band: hold
  }
  return out;
}

}  // namespace endo
