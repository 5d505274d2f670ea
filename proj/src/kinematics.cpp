#include "endo/kinematics.hpp"

#include <algorithm>

namespace endo {

JointState7 clamp_to_limits(const ArmModel& m, const Vec7& q) {
  JointState7 out;
  for (int i = 0; i < 7; ++i) {
    if (!std::isfinite(q[i]))
      throw InvalidInput("JointState7: joint " + std::to_string(i + 1) +
                         " angle is not finite");
    const auto& j = m.joint(i);
    out.q[i] = std::clamp(q[i], j.limit_lo, j.limit_hi);
    if (out.q[i] != q[i]) out.clamped = true;
  }
  return out;
}

ToolPose forward_kinematics(const ArmModel& m, const JointState7& q) {
  Eigen::Isometry3d x = Eigen::Isometry3d::Identity();
  for (int i = 0; i < 7; ++i) {
    const auto& j = m.joint(i);
    x = x * j.offset * Eigen::AngleAxisd(q.q[i], j.axis);
  }
  ToolPose pose;
  pose.position = x.translation();
  pose.orientation = Eigen::Quaterniond(x.rotation()).normalized();
  return pose;
}

Jacobian6x7 jacobian(const ArmModel& m, const JointState7& q) {
  // Walk the chain once, recording each joint's axis and origin in the base
  // frame, then fill columns against the tool point.
  std::array<Eigen::Vector3d, 7> axis_w;
  std::array<Eigen::Vector3d, 7> origin_w;
  Eigen::Isometry3d x = Eigen::Isometry3d::Identity();
  for (int i = 0; i < 7; ++i) {
    const auto& j = m.joint(i);
    x = x * j.offset;
    axis_w[i] = x.rotation() * j.axis;
    origin_w[i] = x.translation();
    x = x * Eigen::AngleAxisd(q.q[i], j.axis);
  }
  const Eigen::Vector3d p_tool = x.translation();

  Jacobian6x7 J;
  for (int i = 0; i < 7; ++i) {
    J.col(i).head<3>() = axis_w[i].cross(p_tool - origin_w[i]);
    J.col(i).tail<3>() = axis_w[i];
  }
  return J;
}

PoseDelta pose_delta(const ToolPose& from, const ToolPose& to) {
  PoseDelta d;
  d.translation = to.position - from.position;
  d.rotation = (to.orientation * from.orientation.conjugate()).normalized();
  return d;
}

PoseDelta scale_motion(const PoseDelta& master_delta,
                       const ScalingPolicy& policy) {
  if (!master_delta.translation.allFinite())
    throw InvalidInput("scale_motion: non-finite translation");
  if (!(policy.translation_scale > 0.0) || !(policy.translation_scale <= 1.0))
    throw InvalidInput("scale_motion: translation_scale must be in (0, 1]");
  for (int i = 0; i < 3; ++i)
    if (!(policy.workspace_clamp[i] > 0.0))
      throw InvalidInput("scale_motion: workspace_clamp must be > 0");

  PoseDelta out;
  out.translation = policy.translation_scale * master_delta.translation;
  out.rotation = master_delta.rotation;  // never scaled
  for (int i = 0; i < 3; ++i) {
    const double lim = policy.workspace_clamp[i];
    if (out.translation[i] > lim || out.translation[i] < -lim) {
      out.clamped = true;
      out.translation[i] = std::clamp(out.translation[i], -lim, lim);
    }
  }
  return out;
}

ArmModel default_arm_model() {
  auto tr = [](double x, double y, double z) {
    Eigen::Isometry3d t = Eigen::Isometry3d::Identity();
    t.translation() = Eigen::Vector3d(x, y, z);
    return t;
  };
  const double yaw_lim = 170.0 * M_PI / 180.0;
  const double pitch_lim = 120.0 * M_PI / 180.0;

  std::array<JointDescriptor, 7> joints = {{
      {Eigen::Vector3d::UnitZ(), tr(0, 0, 150), -yaw_lim, yaw_lim},
      {Eigen::Vector3d::UnitY(), tr(40, 25, 80), -pitch_lim, pitch_lim},
      {Eigen::Vector3d::UnitY(), tr(280, 0, 0), -pitch_lim, pitch_lim},
      {Eigen::Vector3d::UnitX(), tr(220, 0, 0), -yaw_lim, yaw_lim},
      {Eigen::Vector3d::UnitY(), tr(70, 0, 0), -pitch_lim, pitch_lim},
      {Eigen::Vector3d::UnitZ(), tr(50, 0, 0), -yaw_lim, yaw_lim},
      {Eigen::Vector3d::UnitX(), tr(35, 0, 0), -yaw_lim, yaw_lim},
  }};
  return ArmModel(joints);
}

}  // namespace endo
