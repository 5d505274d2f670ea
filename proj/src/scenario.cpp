#include "endo/scenario.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "endo/errors.hpp"

namespace endo {

using nlohmann::json;

namespace {

/// Collects `path: problem` strings while pulling typed values out of the
/// document, so one pass reports every defect instead of the first.
class Validator {
 public:
  explicit Validator(const json& doc) : doc_(doc) {}

  bool ok() const { return issues_.empty(); }
  std::vector<std::string>&& issues() { return std::move(issues_); }

  void fail(const std::string& path, const std::string& why) {
    issues_.push_back(path + ": " + why);
  }

  const json* find(const std::string& path) const {
    const json* node = &doc_;
    std::istringstream ss(path);
    std::string key;
    while (std::getline(ss, key, '.')) {
      if (!node->is_object() || !node->contains(key)) return nullptr;
      node = &(*node)[key];
    }
    return node;
  }

  double number(const std::string& path, double fallback) {
    const json* n = find(path);
    if (!n) return fallback;
    if (!n->is_number()) {
      fail(path, "must be a number");
      return fallback;
    }
    return n->get<double>();
  }

  std::int64_t integer(const std::string& path, std::int64_t fallback) {
    const json* n = find(path);
    if (!n) return fallback;
    if (!n->is_number_integer()) {
      fail(path, "must be an integer");
      return fallback;
    }
    return n->get<std::int64_t>();
  }

  std::uint64_t seed(const std::string& path, std::uint64_t fallback) {
    const json* n = find(path);
    if (!n) return fallback;
    if (!n->is_number_unsigned() && !n->is_number_integer()) {
      fail(path, "must be a non-negative integer");
      return fallback;
    }
    const auto v = n->get<std::int64_t>();
    if (v < 0) {
      fail(path, "must be a non-negative integer");
      return fallback;
    }
    return static_cast<std::uint64_t>(v);
  }

  std::string text(const std::string& path, const std::string& fallback) {
    const json* n = find(path);
    if (!n) return fallback;
    if (!n->is_string()) {
      fail(path, "must be a string");
      return fallback;
    }
    return n->get<std::string>();
  }

  /// Fixed-size numeric array; returns fallback on any shape problem.
  template <int N>
  Eigen::Matrix<double, N, 1> vec(const std::string& path,
                                  const Eigen::Matrix<double, N, 1>& fallback) {
    const json* n = find(path);
    if (!n) return fallback;
    if (!n->is_array() || n->size() != N) {
      fail(path, "must be an array of " + std::to_string(N) + " numbers");
      return fallback;
    }
    Eigen::Matrix<double, N, 1> out;
    for (int i = 0; i < N; ++i) {
      if (!(*n)[i].is_number()) {
        fail(path, "must be an array of " + std::to_string(N) + " numbers");
        return fallback;
      }
      out[i] = (*n)[i].get<double>();
    }
    return out;
  }

  void positive(const std::string& path, double v) {
    if (!(v > 0.0) || !std::isfinite(v)) fail(path, "must be finite and > 0");
  }
  void non_negative(const std::string& path, double v) {
    if (!(v >= 0.0) || !std::isfinite(v)) fail(path, "must be finite and >= 0");
  }

 private:
  const json& doc_;
  std::vector<std::string> issues_;
};

/// `[[t, v], ...]` pairs with non-decreasing t.
PiecewiseLinear parse_profile(Validator& v, const std::string& path) {
  const json* n = v.find(path);
  if (!n) return {};
  if (!n->is_array()) {
    v.fail(path, "must be an array of [t_ms, value] pairs");
    return {};
  }
  std::vector<std::pair<double, double>> pts;
  double last_t = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n->size(); ++i) {
    const json& p = (*n)[i];
    if (!p.is_array() || p.size() != 2 || !p[0].is_number() ||
        !p[1].is_number()) {
      v.fail(path + "[" + std::to_string(i) + "]",
             "must be a [t_ms, value] pair");
      return {};
    }
    const double t = p[0].get<double>(), val = p[1].get<double>();
    if (!std::isfinite(t) || !std::isfinite(val)) {
      v.fail(path + "[" + std::to_string(i) + "]", "must be finite");
      return {};
    }
    if (t < last_t) {
      v.fail(path + "[" + std::to_string(i) + "]",
             "waypoint times must not decrease");
      return {};
    }
    last_t = t;
    pts.emplace_back(t, val);
  }
  return PiecewiseLinear(std::move(pts));
}

ArmModel parse_arm(Validator& v) {
  const json* arm = v.find("arm");
  if (!arm || (arm->is_string() && arm->get<std::string>() == "default"))
    return default_arm_model();
  if (arm->is_string()) {
    v.fail("arm", "unknown model name '" + arm->get<std::string>() +
                      "' (use \"default\" or an inline definition)");
    return default_arm_model();
  }
  if (!arm->is_object() || !arm->contains("joints") ||
      !(*arm)["joints"].is_array() || (*arm)["joints"].size() != 7) {
    v.fail("arm.joints", "must be an array of 7 joint objects");
    return default_arm_model();
  }

  std::array<JointDescriptor, 7> joints;
  bool usable = true;
  for (int i = 0; i < 7; ++i) {
    const std::string base = "arm.joints[" + std::to_string(i) + "]";
    const json& jj = (*arm)["joints"][i];
    if (!jj.is_object()) {
      v.fail(base, "must be an object with axis, offset, limits");
      usable = false;
      continue;
    }
    Validator jv(jj);
    const Eigen::Vector3d axis =
        jv.vec<3>("axis", Eigen::Vector3d::UnitZ());
    const Eigen::Vector3d offset = jv.vec<3>("offset", Eigen::Vector3d::Zero());
    const Eigen::Vector2d limits =
        jv.vec<2>("limits", Eigen::Vector2d(-M_PI, M_PI));
    for (auto&& issue : jv.issues()) v.fail(base + "." + issue, "");
    if (axis.norm() < 1e-12) {
      v.fail(base + ".axis", "must be a non-zero direction");
      usable = false;
    }
    if (!offset.allFinite()) {
      v.fail(base + ".offset", "must be finite");
      usable = false;
    }
    if (!(limits[0] < limits[1])) {
      v.fail(base + ".limits", "must satisfy lo < hi");
      usable = false;
    }
    if (usable) {
      joints[i].axis = axis;
      joints[i].offset = Eigen::Isometry3d::Identity();
      joints[i].offset.translation() = offset;
      joints[i].limit_lo = limits[0];
      joints[i].limit_hi = limits[1];
    }
  }
  if (!usable) return default_arm_model();
  return ArmModel(joints);
}

Environment parse_environment(Validator& v) {
  const std::string type = v.text("environment.type", "scripted");
  if (type == "scripted") {
    ScriptedEnvironment env;
    env.fz = parse_profile(v, "environment.fz");
    env.mx = parse_profile(v, "environment.mx");
    env.my = parse_profile(v, "environment.my");
    env.grip = parse_profile(v, "environment.grip");
    return env;
  }
  if (type == "spring_wall") {
    SpringWallEnvironment env;
    env.wall_z_mm = v.number("environment.wall_z_mm", 0.0);
    env.stiffness_n_per_mm = v.number("environment.stiffness_n_per_mm", 1.0);
    if (!std::isfinite(env.wall_z_mm))
      v.fail("environment.wall_z_mm", "must be finite");
    v.non_negative("environment.stiffness_n_per_mm", env.stiffness_n_per_mm);
    return env;
  }
  v.fail("environment.type", "must be 'scripted' or 'spring_wall'");
  return ScriptedEnvironment{};
}

InputScript parse_inputs(Validator& v) {
  InputScript script;

  const json* jw = v.find("inputs.joint_waypoints");
  if (jw) {
    if (!jw->is_array()) {
      v.fail("inputs.joint_waypoints",
             "must be an array of {t_ms, q[7]} objects");
    } else {
      std::array<std::vector<std::pair<double, double>>, 7> per_joint;
      double last_t = -std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < jw->size(); ++i) {
        const std::string base =
            "inputs.joint_waypoints[" + std::to_string(i) + "]";
        const json& wp = (*jw)[i];
        if (!wp.is_object() || !wp.contains("t_ms") || !wp.contains("q") ||
            !wp["t_ms"].is_number() || !wp["q"].is_array() ||
            wp["q"].size() != 7) {
          v.fail(base, "must be {t_ms: number, q: [7 numbers]}");
          continue;
        }
        const double t = wp["t_ms"].get<double>();
        if (t < last_t) {
          v.fail(base + ".t_ms", "waypoint times must not decrease");
          continue;
        }
        last_t = t;
        for (int jnt = 0; jnt < 7; ++jnt) {
          if (!wp["q"][jnt].is_number() ||
              !std::isfinite(wp["q"][jnt].get<double>())) {
            v.fail(base + ".q", "must contain 7 finite numbers");
            break;
          }
          per_joint[jnt].emplace_back(t, wp["q"][jnt].get<double>());
        }
      }
      for (int jnt = 0; jnt < 7; ++jnt)
        script.joints[jnt] = PiecewiseLinear(std::move(per_joint[jnt]));
    }
  }

  script.grip_drive = parse_profile(v, "inputs.grip_waypoints");

  const json* pt = v.find("inputs.pedal_times_ms");
  if (pt) {
    if (!pt->is_array()) {
      v.fail("inputs.pedal_times_ms", "must be an array of times");
    } else {
      double last = -std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < pt->size(); ++i) {
        if (!(*pt)[i].is_number()) {
          v.fail("inputs.pedal_times_ms[" + std::to_string(i) + "]",
                 "must be a number");
          continue;
        }
        const double t = (*pt)[i].get<double>();
        if (t <= last)
          v.fail("inputs.pedal_times_ms[" + std::to_string(i) + "]",
                 "must be strictly increasing");
        last = t;
        script.pedal_times_ms.push_back(t);
      }
    }
  }
  return script;
}

}  // namespace

void apply_override(nlohmann::json& doc, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0)
    throw InvalidInput("--set expects path.to.field=value, got '" +
                       assignment + "'");
  const std::string path = assignment.substr(0, eq);
  const std::string raw = assignment.substr(eq + 1);

  json value;
  try {
    value = json::parse(raw);
  } catch (const json::parse_error&) {
    value = raw;  // unquoted strings land here
  }

  json* node = &doc;
  std::istringstream ss(path);
  std::string key;
  std::vector<std::string> keys;
  while (std::getline(ss, key, '.')) {
    if (key.empty())
      throw InvalidInput("--set path has an empty segment: '" + path + "'");
    keys.push_back(key);
  }
  for (std::size_t i = 0; i + 1 < keys.size(); ++i)
    node = &(*node)[keys[i]];
  (*node)[keys.back()] = std::move(value);
}

Scenario parse_scenario(const json& doc) {
  if (!doc.is_object())
    throw ConfigError({"<root>: config must be a JSON object"});

  Validator v(doc);
  Scenario sc;

  // sensor
  const double k = v.number("sensor.k", 0.196);
  const double d = v.number("sensor.d", 16.0);
  const double limit = v.number("sensor.deflection_limit", 5.6);
  v.positive("sensor.k", k);
  v.positive("sensor.d", d);
  v.positive("sensor.deflection_limit", limit);
  const double sigma = v.number("sensor.sigma", 0.0);
  const double quant = v.number("sensor.quantization", 0.0);
  v.non_negative("sensor.sigma", sigma);
  v.non_negative("sensor.quantization", quant);
  const std::uint64_t noise_seed = v.seed("sensor.seed", 0);

  // arm, scaling, tactile, caps
  ArmModel arm = parse_arm(v);
  ScalingPolicy scaling;
  scaling.translation_scale = v.number("scaling.translation_scale", 0.25);
  if (!(scaling.translation_scale > 0.0) ||
      !(scaling.translation_scale <= 1.0))
    v.fail("scaling.translation_scale", "must be in (0, 1]");
  scaling.workspace_clamp =
      v.vec<3>("scaling.workspace_clamp", Eigen::Vector3d::Constant(1000.0));
  for (int i = 0; i < 3; ++i)
    if (!(scaling.workspace_clamp[i] > 0.0))
      v.fail("scaling.workspace_clamp", "components must be > 0");

  TactileConfig tactile;
  tactile.f_max = v.number("tactile.f_max", 10.0);
  tactile.f_threshold = v.number("tactile.f_threshold", 5.0);
  tactile.hysteresis = v.number("tactile.hysteresis", 0.2);
  v.positive("tactile.f_max", tactile.f_max);
  v.positive("tactile.f_threshold", tactile.f_threshold);
  v.non_negative("tactile.hysteresis", tactile.hysteresis);

  Vec7 caps = Vec7::Constant(5000.0);
  if (const json* tc = v.find("torque_caps")) {
    if (tc->is_number()) {
      caps = Vec7::Constant(tc->get<double>());
    } else {
      caps = v.vec<7>("torque_caps", caps);
    }
  }
  for (int i = 0; i < 7; ++i)
    if (!(caps[i] > 0.0) || !std::isfinite(caps[i]))
      v.fail("torque_caps", "must be > 0");

  // transport
  TransportParams transport;
  transport.base_latency_ms = v.number("transport.base_latency_ms", 0.0);
  transport.jitter_ms = v.number("transport.jitter_ms", 0.0);
  transport.drop_rate = v.number("transport.drop_rate", 0.0);
  transport.seed = v.seed("transport.seed", 0);
  v.non_negative("transport.base_latency_ms", transport.base_latency_ms);
  if (!(transport.jitter_ms >= 0.0) ||
      transport.jitter_ms > transport.base_latency_ms)
    v.fail("transport.jitter_ms", "must be in [0, base_latency_ms]");
  if (!(transport.drop_rate >= 0.0) || !(transport.drop_rate < 1.0))
    v.fail("transport.drop_rate", "must be in [0, 1)");

  Environment environment = parse_environment(v);
  InputScript inputs = parse_inputs(v);

  const std::int64_t tick_ms = v.integer("tick_ms", 1);
  const std::int64_t duration_ms = v.integer("duration_ms", 1000);
  if (tick_ms < 1) v.fail("tick_ms", "must be an integer >= 1");
  if (duration_ms < tick_ms)
    v.fail("duration_ms", "must cover at least one tick");

  const Eigen::Vector3d slave_start =
      v.vec<3>("slave_start", Eigen::Vector3d::Zero());
  if (!slave_start.allFinite()) v.fail("slave_start", "must be finite");

  sc.outputs.trace_path = v.text("output.trace", "");
  sc.outputs.summary_path = v.text("output.summary", "");

  if (!v.ok()) throw ConfigError(v.issues());

  sc.sim.sensor = SensorParams(k, d, limit);
  sc.sim.noise_sigma = sigma;
  sc.sim.noise_quantization = quant;
  sc.sim.noise_seed = noise_seed;
  sc.sim.arm = std::move(arm);
  sc.sim.scaling = scaling;
  sc.sim.tactile = tactile;
  sc.sim.torque_caps = caps;
  sc.sim.transport = transport;
  sc.sim.environment = std::move(environment);
  sc.sim.inputs = std::move(inputs);
  sc.sim.duration_ms = duration_ms;
  sc.sim.tick_ms = tick_ms;
  sc.sim.slave_start.position = slave_start;
  return sc;
}

Scenario load_scenario(const std::string& path,
                       const std::vector<std::string>& overrides) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open config file: " + path);

  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError({path + ": " + e.what()});
  }
  for (const auto& o : overrides) apply_override(doc, o);
  return parse_scenario(doc);
}

json summary_to_json(const SummaryStats& s) {
  return json{
      {"ticks", s.ticks},
      {"duration_ms", s.duration_ms},
      {"max_sensed_error",
       {{"fz_n", s.max_sensed_error[0]},
        {"mx_nmm", s.max_sensed_error[1]},
        {"my_nmm", s.max_sensed_error[2]},
        {"overall", s.max_sensed_error_overall}}},
      {"feedback_latency_ms",
       {{"samples", s.latency_samples},
        {"min", s.latency_min_ms},
        {"max", s.latency_max_ms},
        {"mean", s.latency_mean_ms}}},
      {"saturation",
       {{"sensor_ticks", s.sensor_saturated_ticks},
        {"torque_ticks", s.torque_clamped_ticks},
        {"workspace_ticks", s.workspace_clamped_ticks},
        {"joint_limit_ticks", s.joint_clamped_ticks}}},
      {"messages",
       {{"sent", s.messages_sent},
        {"delivered", s.messages_delivered},
        {"lost", s.messages_lost}}},
      {"mode_switches", s.mode_switches},
  };
}

std::string summary_to_text(const SummaryStats& s) {
  char buf[1024];
  std::snprintf(
      buf, sizeof(buf),
      "ticks: %lld (%lld ms)\n"
      "max sensed wrench error: Fz %.6g N, Mx %.6g N·mm, My %.6g N·mm\n"
      "feedback latency: %llu samples, min %.6g ms, max %.6g ms, mean %.6g ms\n"
      "saturation ticks: sensor %llu, torque %llu, workspace %llu, joints %llu\n"
      "messages: sent %llu, delivered %llu, lost %llu\n"
      "mode switches: %llu\n",
      static_cast<long long>(s.ticks), static_cast<long long>(s.duration_ms),
      s.max_sensed_error[0], s.max_sensed_error[1], s.max_sensed_error[2],
      static_cast<unsigned long long>(s.latency_samples), s.latency_min_ms,
      s.latency_max_ms, s.latency_mean_ms,
      static_cast<unsigned long long>(s.sensor_saturated_ticks),
      static_cast<unsigned long long>(s.torque_clamped_ticks),
      static_cast<unsigned long long>(s.workspace_clamped_ticks),
      static_cast<unsigned long long>(s.joint_clamped_ticks),
      static_cast<unsigned long long>(s.messages_sent),
      static_cast<unsigned long long>(s.messages_delivered),
      static_cast<unsigned long long>(s.messages_lost),
      static_cast<unsigned long long>(s.mode_switches));
  return buf;
}

}  // namespace endo
