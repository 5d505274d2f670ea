#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "endo/kinematics.hpp"
#include "endo/random.hpp"

using namespace endo;

namespace {

/// Independent oracle: naive 4x4 homogeneous matrix chain, built from
/// scratch (Rodrigues rotation, explicit matrix product) so it shares no
/// code path with forward_kinematics.
Eigen::Matrix4d oracle_pose(const ArmModel& m, const Vec7& q) {
  Eigen::Matrix4d x = Eigen::Matrix4d::Identity();
  for (int i = 0; i < 7; ++i) {
    const auto& j = m.joint(i);

    Eigen::Matrix4d offset = Eigen::Matrix4d::Identity();
    offset.block<3, 3>(0, 0) = j.offset.rotation();
    offset.block<3, 1>(0, 3) = j.offset.translation();

    const Eigen::Vector3d a = j.axis.normalized();
    const double c = std::cos(q[i]), s = std::sin(q[i]);
    Eigen::Matrix3d K;
    K << 0, -a.z(), a.y(), a.z(), 0, -a.x(), -a.y(), a.x(), 0;
    const Eigen::Matrix3d R =
        Eigen::Matrix3d::Identity() * c + (1 - c) * a * a.transpose() + s * K;
    Eigen::Matrix4d rot = Eigen::Matrix4d::Identity();
    rot.block<3, 3>(0, 0) = R;

    x = x * offset * rot;
  }
  return x;
}

Vec7 random_q_within_limits(Rng& rng, const ArmModel& m) {
  Vec7 q;
  for (int i = 0; i < 7; ++i)
    q[i] = rng.uniform(m.joint(i).limit_lo, m.joint(i).limit_hi);
  return q;
}

/// Finite-difference geometric Jacobian: central differences of the pose,
/// angular part from the relative rotation's angle-axis.
Jacobian6x7 fd_jacobian(const ArmModel& m, const Vec7& q, double h) {
  Jacobian6x7 J;
  for (int i = 0; i < 7; ++i) {
    Vec7 qp = q, qm = q;
    qp[i] += h;
    qm[i] -= h;
    const ToolPose pp = forward_kinematics(m, {qp, false});
    const ToolPose pm = forward_kinematics(m, {qm, false});

    J.col(i).head<3>() = (pp.position - pm.position) / (2 * h);

    const Eigen::Quaterniond dq = pp.orientation * pm.orientation.conjugate();
    const Eigen::Vector3d v = dq.vec();
    const double sin_half = v.norm();
    const double angle = 2.0 * std::atan2(sin_half, std::abs(dq.w()));
    const Eigen::Vector3d axis =
        sin_half > 1e-300 ? Eigen::Vector3d(v / sin_half)
                          : Eigen::Vector3d::Zero();
    const double sign = dq.w() >= 0 ? 1.0 : -1.0;
    J.col(i).tail<3>() = sign * angle * axis / (2 * h);
  }
  return J;
}

}  // namespace

TEST_CASE("home pose matches the documented table") {
  const ArmModel m = default_arm_model();
  const ToolPose home = forward_kinematics(m, JointState7{});
  CHECK(home.position.x() == doctest::Approx(695.0).epsilon(1e-12));
  CHECK(home.position.y() == doctest::Approx(25.0).epsilon(1e-12));
  CHECK(home.position.z() == doctest::Approx(230.0).epsilon(1e-12));
  CHECK(home.orientation.angularDistance(Eigen::Quaterniond::Identity()) <
        1e-12);
}

TEST_CASE("base yaw by pi negates home x and y") {
  const ArmModel m = default_arm_model();
  const ToolPose home = forward_kinematics(m, JointState7{});
  Vec7 q = Vec7::Zero();
  q[0] = M_PI;
  // pi sits outside the ±170° default limit, so widen the limits to keep
  // the geometric argument exact.
  std::array<JointDescriptor, 7> joints = m.joints();
  for (auto& j : joints) {
    j.limit_lo = -2 * M_PI;
    j.limit_hi = 2 * M_PI;
  }
  const ArmModel wide(joints);
  const ToolPose rotated = forward_kinematics(wide, {q, false});
  CHECK(rotated.position.x() == doctest::Approx(-home.position.x()).epsilon(1e-9));
  CHECK(rotated.position.y() == doctest::Approx(-home.position.y()).epsilon(1e-9));
  CHECK(rotated.position.z() == doctest::Approx(home.position.z()).epsilon(1e-9));
}

TEST_CASE("forward kinematics matches the homogeneous-chain oracle") {
  const ArmModel m = default_arm_model();
  Rng rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    const Vec7 q = random_q_within_limits(rng, m);
    const ToolPose pose = forward_kinematics(m, {q, false});
    const Eigen::Matrix4d x = oracle_pose(m, q);

    CHECK((pose.position - x.block<3, 1>(0, 3)).norm() < 1e-9);
    const Eigen::Matrix3d R = pose.orientation.toRotationMatrix();
    CHECK((R - x.block<3, 3>(0, 0)).cwiseAbs().maxCoeff() < 1e-9);
  }
}

TEST_CASE("tool orientation quaternion stays unit norm") {
  const ArmModel m = default_arm_model();
  Rng rng(8);
  for (int trial = 0; trial < 100; ++trial) {
    const ToolPose pose =
        forward_kinematics(m, {random_q_within_limits(rng, m), false});
    CHECK(std::abs(pose.orientation.norm() - 1.0) < 1e-9);
  }
}

TEST_CASE("forward kinematics preserves tool-frame distances") {
  const ArmModel m = default_arm_model();
  const Eigen::Vector3d a(10.0, -4.0, 2.5), b(-3.0, 7.0, 1.0);
  const double d_ref = (a - b).norm();
  Rng rng(9);
  for (int trial = 0; trial < 100; ++trial) {
    const ToolPose pose =
        forward_kinematics(m, {random_q_within_limits(rng, m), false});
    const Eigen::Vector3d wa = pose.position + pose.orientation * a;
    const Eigen::Vector3d wb = pose.position + pose.orientation * b;
    CHECK(std::abs((wa - wb).norm() - d_ref) < 1e-9);
  }
}

TEST_CASE("jacobian matches central finite differences") {
  const ArmModel m = default_arm_model();
  Rng rng(10);
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const Vec7 q = random_q_within_limits(rng, m);
    const Jacobian6x7 J = jacobian(m, {q, false});
    const Jacobian6x7 Jfd = fd_jacobian(m, q, 1e-6);
    worst = std::max(worst, (J - Jfd).cwiseAbs().maxCoeff());
  }
  CHECK(worst < 1e-5);
}

TEST_CASE("zero joint velocity maps to zero twist") {
  const ArmModel m = default_arm_model();
  const Jacobian6x7 J = jacobian(m, JointState7{});
  CHECK((J * Vec7::Zero()).norm() == 0.0);
}

TEST_CASE("documented singular posture loses rank") {
  // With q5 = q6 = 0 the J4 and J7 roll axes line up, so columns 4 and 7
  // coincide; home is such a posture.
  const ArmModel m = default_arm_model();
  const Jacobian6x7 J = jacobian(m, JointState7{});
  CHECK((J.col(3) - J.col(6)).norm() < 1e-12);

  Eigen::JacobiSVD<Jacobian6x7> svd(J);
  CHECK(svd.singularValues()(5) < 1e-8);

  // a generic posture is full rank
  Rng rng(14);
  const Jacobian6x7 Jr = jacobian(m, {random_q_within_limits(rng, m), false});
  Eigen::JacobiSVD<Jacobian6x7> svdr(Jr);
  CHECK(svdr.singularValues()(5) > 1e-3);
}

TEST_CASE("scale motion arithmetic") {
  ScalingPolicy policy;
  policy.translation_scale = 0.25;

  PoseDelta d;
  d.translation = Eigen::Vector3d(10.0, 0.0, 0.0);
  const PoseDelta s = scale_motion(d, policy);
  CHECK(s.translation.x() == doctest::Approx(2.5).epsilon(1e-12));
  CHECK(s.translation.y() == 0.0);
  CHECK_FALSE(s.clamped);

  policy.translation_scale = 1.0;
  const PoseDelta identity = scale_motion(d, policy);
  CHECK((identity.translation - d.translation).norm() == 0.0);
}

TEST_CASE("scale motion clamps to the box face and flags") {
  ScalingPolicy policy;
  policy.translation_scale = 1.0;
  policy.workspace_clamp = Eigen::Vector3d(1.0, 1.0, 1.0);

  PoseDelta d;
  d.translation = Eigen::Vector3d(4.0, 0.5, -9.0);
  const PoseDelta s = scale_motion(d, policy);
  CHECK(s.clamped);
  CHECK(s.translation.x() == 1.0);
  CHECK(s.translation.y() == 0.5);
  CHECK(s.translation.z() == -1.0);
}

TEST_CASE("scale motion never alters orientation") {
  Rng rng(15);
  ScalingPolicy policy;
  policy.translation_scale = 0.3;
  policy.workspace_clamp = Eigen::Vector3d(0.5, 0.5, 0.5);
  for (int trial = 0; trial < 100; ++trial) {
    PoseDelta d;
    d.translation = Eigen::Vector3d(rng.gaussian(), rng.gaussian(),
                                    rng.gaussian()) * 5.0;
    d.rotation = Eigen::Quaterniond(Eigen::AngleAxisd(
        rng.uniform(-M_PI, M_PI),
        Eigen::Vector3d(rng.gaussian(), rng.gaussian(), rng.gaussian())
            .normalized()));
    const PoseDelta s = scale_motion(d, policy);
    CHECK(s.rotation.angularDistance(d.rotation) < 1e-15);
  }
}

TEST_CASE("scale motion rejects an out-of-range policy") {
  PoseDelta d;
  d.translation = Eigen::Vector3d(1, 0, 0);
  ScalingPolicy policy;
  policy.translation_scale = 1.5;
  CHECK_THROWS_AS(scale_motion(d, policy), InvalidInput);
  policy.translation_scale = 0.0;
  CHECK_THROWS_AS(scale_motion(d, policy), InvalidInput);
}

TEST_CASE("joint limits clamp with a flag") {
  const ArmModel m = default_arm_model();
  Vec7 q = Vec7::Zero();
  q[1] = 10.0;  // far past the ±120° pitch limit
  const JointState7 s = clamp_to_limits(m, q);
  CHECK(s.clamped);
  CHECK(s.q[1] == doctest::Approx(120.0 * M_PI / 180.0).epsilon(1e-12));

  const JointState7 ok = clamp_to_limits(m, Vec7::Zero());
  CHECK_FALSE(ok.clamped);
}

TEST_CASE("arm model construction rejects bad descriptors") {
  auto joints = default_arm_model().joints();
  joints[3].axis = Eigen::Vector3d::Zero();
  CHECK_THROWS_AS(ArmModel{joints}, InvalidInput);

  joints = default_arm_model().joints();
  joints[2].limit_lo = 1.0;
  joints[2].limit_hi = -1.0;
  CHECK_THROWS_AS(ArmModel{joints}, InvalidInput);
}
