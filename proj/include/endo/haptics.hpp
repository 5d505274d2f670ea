#pragma once

#include <Eigen/Dense>

#include "endo/kinematics.hpp"
#include "endo/sensor.hpp"

namespace endo {

/// Tactile feedback tuning. f_max maps gripping force to full intensity on
/// the proportional motor; f_threshold trips the warning motor, with a
/// release band of `hysteresis` below it to stop chatter at the limit.
/// Defaults are operating points chosen for the simulator, settable per
/// scenario (f_threshold is the surgeon-set safe limit).
struct TactileConfig {
  double f_max = 10.0;       // N
  double f_threshold = 5.0;  // N
  double hysteresis = 0.2;   // N

  void validate() const {
    if (!(f_max > 0.0)) throw InvalidInput("TactileConfig: f_max must be > 0");
    if (!(f_threshold > 0.0))
      throw InvalidInput("TactileConfig: f_threshold must be > 0");
    if (!(hysteresis >= 0.0))
      throw InvalidInput("TactileConfig: hysteresis must be >= 0");
  }
};

/// Drive state of the two finger-clutch vibration motors: motor 1 is the
/// proportional channel in [0, 1], motor 2 the full-on over-threshold alarm.
struct VibrationCommand {
  double motor1_intensity = 0.0;
  bool motor2_on = false;
};

/// Feedback torques for the seven master joints, N·mm. `saturated` marks
/// that at least one torque hit its cap and was clamped.
struct JointTorques7 {
  Vec7 tau = Vec7::Zero();
  bool saturated = false;
};

/// Map a sensed tool wrench to master joint torques by Jacobian transpose.
///
/// The sensor wrench lives in the tool frame (Fz along tool z, Mx/My about
/// tool x/y; the in-plane components the 3-axis sensor cannot see are zero,
/// not estimated). It is rotated into the base frame with the tool
/// orientation at q, then tau = J(q)^T * F. Each torque clamps to caps[i].
JointTorques7 kinesthetic_torques(const Wrench3& w, const ArmModel& m,
                                  const JointState7& q, const Vec7& caps);

/// Tool-frame wrench embedded as a base-frame 6-vector [force; moment],
/// exposed for callers that need the exact F used by kinesthetic_torques
/// (power checks, logging).
Eigen::Matrix<double, 6, 1> reflected_wrench(const Wrench3& w,
                                             const ArmModel& m,
                                             const JointState7& q);

/// One step of the tactile controller. motor1 = clamp(f/f_max, 0, 1);
/// motor2 switches on above f_threshold and releases only below
/// f_threshold - hysteresis, holding its previous state inside the band.
VibrationCommand tactile_command(double grip_force_n, const TactileConfig& cfg,
                                 const VibrationCommand& prev);

}  // namespace endo
