#pragma once

#include <array>
#include <cmath>

#include <Eigen/Dense>
#include <Eigen/Geometry>

#include "endo/errors.hpp"

namespace endo {

using Vec7 = Eigen::Matrix<double, 7, 1>;
using Jacobian6x7 = Eigen::Matrix<double, 6, 7>;

/// One revolute joint: a fixed link offset followed by a rotation about
/// `axis` (unit vector in the local frame).
struct JointDescriptor {
  Eigen::Vector3d axis = Eigen::Vector3d::UnitZ();
  Eigen::Isometry3d offset = Eigen::Isometry3d::Identity();  // mm translation
  double limit_lo = -M_PI;
  double limit_hi = M_PI;
};

/// Immutable 7-joint serial arm (three positioning joints, four wrist
/// joints). Construction validates axis normalization and limit ordering.
class ArmModel {
 public:
  explicit ArmModel(std::array<JointDescriptor, 7> joints)
      : joints_(std::move(joints)) {
    for (std::size_t i = 0; i < joints_.size(); ++i) {
      auto& j = joints_[i];
      const double norm = j.axis.norm();
      if (norm < 1e-12)
        throw InvalidInput("ArmModel: joint " + std::to_string(i + 1) +
                           " axis is zero");
      j.axis /= norm;
      if (!(j.limit_lo < j.limit_hi))
        throw InvalidInput("ArmModel: joint " + std::to_string(i + 1) +
                           " limits must satisfy lo < hi");
    }
  }

  const std::array<JointDescriptor, 7>& joints() const { return joints_; }
  const JointDescriptor& joint(int i) const { return joints_[i]; }

 private:
  std::array<JointDescriptor, 7> joints_;
};

/// Seven joint angles in rad. `clamped` is set when any input angle was
/// outside its limit and pulled back (mirrors encoder behavior: out-of-range
/// commands clamp, they do not fault).
struct JointState7 {
  Vec7 q = Vec7::Zero();
  bool clamped = false;
};

/// Clamp angles into the model's limits, flagging if anything moved.
JointState7 clamp_to_limits(const ArmModel& m, const Vec7& q);

/// Tool frame: position in mm, orientation as a unit quaternion.
struct ToolPose {
  Eigen::Vector3d position = Eigen::Vector3d::Zero();
  Eigen::Quaterniond orientation = Eigen::Quaterniond::Identity();
};

/// Rigid displacement between two tool poses: translation in mm plus a
/// rotation quaternion. `clamped` marks a workspace-clamped translation.
struct PoseDelta {
  Eigen::Vector3d translation = Eigen::Vector3d::Zero();
  Eigen::Quaterniond rotation = Eigen::Quaterniond::Identity();
  bool clamped = false;
};

/// delta such that to.position = from.position + delta.translation and
/// to.orientation = delta.rotation * from.orientation.
PoseDelta pose_delta(const ToolPose& from, const ToolPose& to);

/// Master-to-slave motion scaling. Translations scale by translation_scale
/// and clamp componentwise into ±workspace_clamp (a per-step displacement
/// box); rotations pass through untouched.
struct ScalingPolicy {
  double translation_scale = 0.25;
  Eigen::Vector3d workspace_clamp =
      Eigen::Vector3d::Constant(1000.0);  // mm, effectively unclamped
};

/// Compose the seven joint transforms. Out-of-limit angles are clamped (the
/// returned flag via clamp_to_limits applies); the math itself is exact
/// rigid composition.
ToolPose forward_kinematics(const ArmModel& m, const JointState7& q);

/// Geometric Jacobian in the base frame: rows 0-2 linear (mm/s per rad/s),
/// rows 3-5 angular (rad/s per rad/s). Column i is [z_i × (p_tool - p_i); z_i]
/// for revolute joint i.
Jacobian6x7 jacobian(const ArmModel& m, const JointState7& q);

PoseDelta scale_motion(const PoseDelta& master_delta,
                       const ScalingPolicy& policy);

/// The default master arm. Joint table (axis in parent frame, offset
/// translation in mm, limits in rad):
///
///   J1  yaw    z  (0,   0, 150)   ±170°   base column
///   J2  pitch  y  (40, 25,  80)   ±120°   shoulder bracket
///   J3  pitch  y  (280, 0,   0)   ±120°   upper arm
///   J4  roll   x  (220, 0,   0)   ±170°   forearm
///   J5  pitch  y  (70,  0,   0)   ±120°   wrist pitch
///   J6  yaw    z  (50,  0,   0)   ±170°   wrist yaw
///   J7  roll   x  (35,  0,   0)   ±170°   handle roll
///
/// Link lengths total ≈899 mm. Home pose (all zeros): position
/// (695, 25, 230) mm, identity orientation. At any posture with q5 = q6 = 0
/// the J4 and J7 roll axes are collinear and the Jacobian loses rank; q = 0
/// is the documented singular posture.
ArmModel default_arm_model();

}  // namespace endo
