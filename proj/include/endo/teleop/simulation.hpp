#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "endo/calibration.hpp"
#include "endo/haptics.hpp"
#include "endo/kinematics.hpp"
#include "endo/sensor.hpp"
#include "endo/teleop/environment.hpp"
#include "endo/teleop/message.hpp"
#include "endo/teleop/transport.hpp"

namespace endo {

/// Foot-pedal arbitrated target: the slave manipulators or the endoscope
/// camera arm. While CameraArm is active the manipulators hold position.
enum class ControlMode { Manipulators, CameraArm };

const char* to_string(ControlMode m);

/// Scripted operator inputs: per-joint piecewise-linear master trajectory,
/// grip drive profile, and pedal press times.
struct InputScript {
  std::array<PiecewiseLinear, 7> joints;
  PiecewiseLinear grip_drive;
  std::vector<double> pedal_times_ms;
};

struct SimConfig {
  SensorParams sensor{0.196, 16.0};
  double noise_sigma = 0.0;
  double noise_quantization = 0.0;
  std::uint64_t noise_seed = 0;

  ArmModel arm = default_arm_model();  // master; the slave mirrors it
  ScalingPolicy scaling;
  TactileConfig tactile;
  Vec7 torque_caps = Vec7::Constant(5000.0);  // N·mm

  TransportParams transport;
  Environment environment = ScriptedEnvironment{};
  InputScript inputs;

  std::int64_t duration_ms = 1000;
  std::int64_t tick_ms = 1;  // integer ms so wire timestamps stay exact
  ToolPose slave_start;
};

/// Operator inputs for one tick.
struct TickInputs {
  Vec7 master_q = Vec7::Zero();
  double grip_drive_n = 0.0;
  bool pedal_edge = false;
};

/// One trace record per tick; the CSV column schema mirrors this struct.
struct TraceRow {
  std::int64_t t_ms = 0;
  ControlMode mode = ControlMode::Manipulators;
  Vec7 master_q = Vec7::Zero();
  Eigen::Vector3d slave_pos = Eigen::Vector3d::Zero();
  Wrench3 true_wrench;
  Wrench3 sensed_wrench;
  double grip_n = 0.0;
  Vec7 tau = Vec7::Zero();
  double motor1 = 0.0;
  bool motor2 = false;
  std::uint64_t dropped_msgs = 0;  // cumulative over the run
};

extern const char* const kTraceCsvHeader;
std::string trace_row_to_csv(const TraceRow& row);

struct StepResult {
  TraceRow trace;
  std::vector<TeleopMessage> emitted;
};

struct SummaryStats {
  std::int64_t ticks = 0;
  std::int64_t duration_ms = 0;

  std::array<double, 3> max_sensed_error{};  // |sensed - true| per axis
  double max_sensed_error_overall = 0.0;

  std::uint64_t latency_samples = 0;  // feedback latency, master in to
  double latency_min_ms = 0.0;        // torque out through both hops
  double latency_max_ms = 0.0;
  double latency_mean_ms = 0.0;

  std::uint64_t sensor_saturated_ticks = 0;
  std::uint64_t torque_clamped_ticks = 0;
  std::uint64_t workspace_clamped_ticks = 0;
  std::uint64_t joint_clamped_ticks = 0;

  std::uint64_t messages_sent = 0;
  std::uint64_t messages_delivered = 0;
  std::uint64_t messages_lost = 0;
  std::uint64_t mode_switches = 0;
};

/// The Fig-4-shaped loop as a deterministic discrete-time machine.
///
/// Per tick, in order: the master console samples its inputs and sends
/// MasterState (plus PedalEvent on an edge) toward the slave; due deliveries
/// are consumed in seq order by the controller, which toggles mode on pedal
/// events and, in Manipulators mode, turns master pose deltas into scaled
/// slave motion (SlaveCommand); the environment produces the ground-truth
/// wrench and grip at the slave; the sensor pipeline (deflections → photo
/// readings → calibration) produces the sensed wrench, which travels back as
/// WrenchReport/GripReport; the master turns arrived reports into joint
/// torques and vibration (FeedbackCommand). Both transport directions add
/// latency; with zero latency the loop closes within the tick.
///
/// Single-threaded by contract; all returned values are plain data.
class TeleopSim {
 public:
  explicit TeleopSim(SimConfig cfg);

  StepResult step(const TickInputs& inputs);

  /// Controller transition for a pedal press: toggles the mode and discards
  /// the motion baseline so neither side carries motion over a switch.
  void handle_pedal();

  ControlMode mode() const { return mode_; }
  const ToolPose& slave_pose() const { return slave_pose_; }
  std::int64_t tick() const { return tick_; }
  const SummaryStats& stats() const { return stats_; }

 private:
  struct Sender {
    std::uint32_t next_seq = 0;
    std::int64_t last_t_ms = -1;
  };

  TeleopMessage make_message(Sender& sender, MessageKind kind,
                             MessagePayload payload);
  void check(bool ok, const char* invariant) const;

  SimConfig cfg_;
  CalibrationMatrix cal_;
  PhotoNoiseModel noise_;

  std::int64_t tick_ = 0;
  ControlMode mode_ = ControlMode::Manipulators;
  ToolPose slave_pose_;
  std::optional<ToolPose> motion_baseline_;  // master pose deltas origin
  std::int64_t last_cause_t_ms_ = -1;  // send time of last applied master state
  double slave_grip_drive_n_ = 0.0;

  Vec7 applied_tau_ = Vec7::Zero();  // motors hold last command
  VibrationCommand vibration_;

  // One seq stream per logical sender. Console and sensor streams cross the
  // transport; controller and feedback streams stay on their own side, so
  // they must not share a seq counter with the transported ones (the
  // receiver consumes contiguous seqs).
  Sender console_sender_;    // MasterState, PedalEvent
  Sender sensor_sender_;     // WrenchReport, GripReport
  Sender controller_sender_; // SlaveCommand (slave-local)
  Sender feedback_sender_;   // FeedbackCommand (master-local)
  SimTransport to_slave_;
  SimTransport to_master_;
  InOrderInbox slave_inbox_;
  InOrderInbox master_inbox_;

  double latency_sum_ms_ = 0.0;
  SummaryStats stats_;
};

/// Drives TeleopSim over the scripted inputs for duration_ms, streaming one
/// CSV row per tick into trace_sink (header included) when non-null.
SummaryStats run_scenario(const SimConfig& cfg, std::ostream* trace_sink);

}  // namespace endo
