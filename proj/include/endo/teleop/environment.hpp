#pragma once

#include <variant>
#include <vector>

#include "endo/kinematics.hpp"
#include "endo/sensor.hpp"

namespace endo {

/// Piecewise-linear profile over time. Evaluation clamps to the first/last
/// waypoint outside the scripted range; an empty profile reads as zero.
class PiecewiseLinear {
 public:
  PiecewiseLinear() = default;
  /// Waypoints must be sorted by time (non-decreasing).
  explicit PiecewiseLinear(std::vector<std::pair<double, double>> waypoints);

  double eval(double t) const;
  bool empty() const { return points_.empty(); }

 private:
  std::vector<std::pair<double, double>> points_;
};

/// Tool-tissue interaction played back from profiles; ignores slave motion.
struct ScriptedEnvironment {
  PiecewiseLinear fz;    // N over t_ms
  PiecewiseLinear mx;    // N·mm
  PiecewiseLinear my;    // N·mm
  PiecewiseLinear grip;  // N
};

/// Linear spring wall: reaction force proportional to how far the slave tool
/// has pushed below the plane z = wall_z. Grip force is the commanded grip
/// drive passed through.
struct SpringWallEnvironment {
  double wall_z_mm = 0.0;
  double stiffness_n_per_mm = 1.0;
};

using Environment = std::variant<ScriptedEnvironment, SpringWallEnvironment>;

struct EnvSample {
  Wrench3 wrench;      // ground-truth tool wrench
  double grip_n = 0.0; // ground-truth grip force
};

EnvSample sample_environment(const Environment& env, const ToolPose& slave,
                             double grip_drive_n, double t_ms);

}  // namespace endo
