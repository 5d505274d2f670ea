#pragma once

#include <cstdint>
#include <variant>
#include <vector>

#include "endo/haptics.hpp"
#include "endo/kinematics.hpp"
#include "endo/sensor.hpp"

namespace endo {

/// Kind tags are the wire-format byte values.
enum class MessageKind : std::uint8_t {
  MasterState = 0,
  SlaveCommand = 1,
  WrenchReport = 2,
  GripReport = 3,
  FeedbackCommand = 4,
  PedalEvent = 5,
};

const char* to_string(MessageKind k);

/// Master console sample: seven joint angles plus the finger-clutch grip
/// drive, which has to cross to the slave side with the joint state.
struct MasterStatePayload {
  Vec7 q = Vec7::Zero();
  double grip_drive_n = 0.0;
};

/// Scaled displacement the controller hands the slave manipulator.
struct SlaveCommandPayload {
  Eigen::Vector3d translation = Eigen::Vector3d::Zero();  // mm
  Eigen::Quaterniond rotation = Eigen::Quaterniond::Identity();
};

struct WrenchReportPayload {
  Wrench3 wrench;
};

struct GripReportPayload {
  double grip_n = 0.0;
};

struct FeedbackCommandPayload {
  Vec7 tau = Vec7::Zero();  // N·mm
  VibrationCommand vibration;
};

struct PedalEventPayload {
  bool pressed = true;
};

using MessagePayload =
    std::variant<MasterStatePayload, SlaveCommandPayload, WrenchReportPayload,
                 GripReportPayload, FeedbackCommandPayload, PedalEventPayload>;

/// One protocol frame. seq increases strictly per sender; t_sim_ms is
/// non-decreasing per sender.
///
/// trace_cause_t_ms is harness instrumentation for latency measurement (the
/// send time of the master sample a report traces back to); it is not part
/// of the frame and never serializes.
struct TeleopMessage {
  MessageKind kind = MessageKind::MasterState;
  std::uint32_t seq = 0;
  std::uint64_t t_sim_ms = 0;
  MessagePayload payload;
  std::int64_t trace_cause_t_ms = -1;
};

/// Wire format, little-endian throughout:
///   u32 length   — byte count of the rest of the record
///   u8  kind
///   u32 seq
///   u64 t_sim_ms
///   f64 × N      — payload fields in declaration order
///     MasterState:     q1..q7, grip_drive_n                      (8)
///     SlaveCommand:    tx, ty, tz, qw, qx, qy, qz                (7)
///     WrenchReport:    fz, mx, my                                (3)
///     GripReport:      grip_n                                    (1)
///     FeedbackCommand: tau1..tau7, motor1_intensity, motor2_on   (9)
///     PedalEvent:      pressed                                   (1)
/// Booleans encode as 0.0 / 1.0.
std::vector<std::uint8_t> encode_message(const TeleopMessage& msg);

/// Appends the encoded record to `out`.
void encode_message(const TeleopMessage& msg, std::vector<std::uint8_t>& out);

/// Decodes one record starting at `offset`, advancing it past the record.
/// Throws InvalidInput on truncation, unknown kind, or payload size mismatch.
TeleopMessage decode_message(const std::vector<std::uint8_t>& buf,
                             std::size_t& offset);

}  // namespace endo
