#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace endo {

/// Caller passed a value that violates a precondition (NaN wrench, negative
/// stiffness, zero full-scale component, ...).
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Numerical operation failed (singular matrix where one cannot occur for
/// valid parameters, etc.).
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A data set does not constrain the fit. Carries the direction (unit vector
/// in reading space) that the samples fail to excite.
class DegenerateData : public std::runtime_error {
 public:
  DegenerateData(const std::string& what, const Eigen::Vector3d& direction)
      : std::runtime_error(what), deficient_direction(direction) {}

  Eigen::Vector3d deficient_direction;
};

/// Scenario/config validation failure. Collects every offending field so the
/// caller sees the full list in one pass.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(std::vector<std::string> issues)
      : std::runtime_error(join(issues)), field_issues(std::move(issues)) {}

  std::vector<std::string> field_issues;

 private:
  static std::string join(const std::vector<std::string>& issues) {
    std::string s = "config validation failed:";
    for (const auto& i : issues) {
      s += "\n  ";
      s += i;
    }
    return s;
  }
};

/// A simulation invariant broke mid-run. Names the tick and the invariant.
class InvariantViolation : public std::runtime_error {
 public:
  InvariantViolation(long long tick, const std::string& invariant)
      : std::runtime_error("invariant violated at tick " +
                           std::to_string(tick) + ": " + invariant),
        tick(tick),
        invariant(invariant) {}

  long long tick;
  std::string invariant;
};

}  // namespace endo
