#include "endo/teleop/environment.hpp"

#include <algorithm>

#include "endo/errors.hpp"

namespace endo {

PiecewiseLinear::PiecewiseLinear(
    std::vector<std::pair<double, double>> waypoints)
    : points_(std::move(waypoints)) {
  for (std::size_t i = 1; i < points_.size(); ++i) {
    if (points_[i].first < points_[i - 1].first)
      throw InvalidInput("PiecewiseLinear: waypoint times must not decrease");
  }
}

double PiecewiseLinear::eval(double t) const {
  if (points_.empty()) return 0.0;
  if (t <= points_.front().first) return points_.front().second;
  if (t >= points_.back().first) return points_.back().second;

  const auto hi = std::upper_bound(
      points_.begin(), points_.end(), t,
      [](double value, const auto& p) { return value < p.first; });
  const auto lo = hi - 1;
  const double span = hi->first - lo->first;
  if (span <= 0.0) return hi->second;  // coincident waypoints: step change
  const double a = (t - lo->first) / span;
  return lo->second + a * (hi->second - lo->second);
}

EnvSample sample_environment(const Environment& env, const ToolPose& slave,
                             double grip_drive_n, double t_ms) {
  return std::visit(
      [&](const auto& e) -> EnvSample {
        using T = std::decay_t<decltype(e)>;
        EnvSample s;
        if constexpr (std::is_same_v<T, ScriptedEnvironment>) {
          s.wrench = {e.fz.eval(t_ms), e.mx.eval(t_ms), e.my.eval(t_ms)};
          s.grip_n = std::max(0.0, e.grip.eval(t_ms));
        } else if constexpr (std::is_same_v<T, SpringWallEnvironment>) {
          const double penetration =
              std::max(0.0, e.wall_z_mm - slave.position.z());
          s.wrench = {e.stiffness_n_per_mm * penetration, 0.0, 0.0};
          s.grip_n = std::max(0.0, grip_drive_n);
        }
        return s;
      },
      env);
}

}  // namespace endo
