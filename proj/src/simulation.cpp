#include "endo/teleop/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "endo/errors.hpp"

namespace endo {

const char* to_string(ControlMode m) {
  return m == ControlMode::Manipulators ? "manipulators" : "camera_arm";
}

const char* const kTraceCsvHeader =
    "t_ms,mode,master_q1,master_q2,master_q3,master_q4,master_q5,master_q6,"
    "master_q7,slave_x,slave_y,slave_z,true_Fz,true_Mx,true_My,sensed_Fz,"
    "sensed_Mx,sensed_My,grip_N,tau1,tau2,tau3,tau4,tau5,tau6,tau7,motor1,"
    "motor2,dropped_msgs";

std::string trace_row_to_csv(const TraceRow& row) {
  std::string out;
  out.reserve(512);
  char buf[40];

  auto num = [&](double v) {
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    out += buf;
    out += ',';
  };

  std::snprintf(buf, sizeof(buf), "%lld,", static_cast<long long>(row.t_ms));
  out += buf;
  out += to_string(row.mode);
  out += ',';
  for (int i = 0; i < 7; ++i) num(row.master_q[i]);
  for (int i = 0; i < 3; ++i) num(row.slave_pos[i]);
  num(row.true_wrench.fz);
  num(row.true_wrench.mx);
  num(row.true_wrench.my);
  num(row.sensed_wrench.fz);
  num(row.sensed_wrench.mx);
  num(row.sensed_wrench.my);
  num(row.grip_n);
  for (int i = 0; i < 7; ++i) num(row.tau[i]);
  num(row.motor1);
  out += row.motor2 ? "1," : "0,";
  std::snprintf(buf, sizeof(buf), "%llu",
                static_cast<unsigned long long>(row.dropped_msgs));
  out += buf;
  return out;
}

TeleopSim::TeleopSim(SimConfig cfg)
    : cfg_(std::move(cfg)),
      cal_(calibration_matrix(cfg_.sensor)),
      noise_(cfg_.noise_sigma, cfg_.noise_quantization, cfg_.noise_seed),
      slave_pose_(cfg_.slave_start),
      to_slave_(cfg_.transport, static_cast<double>(cfg_.tick_ms)),
      to_master_(cfg_.transport, static_cast<double>(cfg_.tick_ms)) {
  if (cfg_.tick_ms <= 0) throw InvalidInput("SimConfig: tick_ms must be >= 1");
  cfg_.tactile.validate();
  for (int i = 0; i < 7; ++i)
    if (!(cfg_.torque_caps[i] > 0.0))
      throw InvalidInput("SimConfig: torque_caps must be > 0");
}

void TeleopSim::check(bool ok, const char* invariant) const {
  if (!ok) throw InvariantViolation(tick_, invariant);
}

TeleopMessage TeleopSim::make_message(Sender& sender, MessageKind kind,
                                      MessagePayload payload) {
  const std::int64_t t_ms = tick_ * cfg_.tick_ms;
  check(t_ms >= sender.last_t_ms, "per-sender t_sim must not decrease");
  sender.last_t_ms = t_ms;

  TeleopMessage msg;
  msg.kind = kind;
  msg.seq = sender.next_seq++;
  msg.t_sim_ms = static_cast<std::uint64_t>(t_ms);
  msg.payload = std::move(payload);
  return msg;
}

void TeleopSim::handle_pedal() {
  mode_ = mode_ == ControlMode::Manipulators ? ControlMode::CameraArm
                                             : ControlMode::Manipulators;
  // No motion carry-over across a switch: the next master state re-seeds the
  // delta baseline instead of producing a jump.
  motion_baseline_.reset();
  ++stats_.mode_switches;
}

StepResult TeleopSim::step(const TickInputs& inputs) {
  const std::int64_t t_ms = tick_ * cfg_.tick_ms;
  StepResult result;
  bool workspace_clamped = false;

  // 1. Master console: sample inputs, send state (and pedal edge) slaveward.
  const JointState7 master_q = clamp_to_limits(cfg_.arm, inputs.master_q);
  if (master_q.clamped) ++stats_.joint_clamped_ticks;
  if (!(inputs.grip_drive_n >= 0.0) || !std::isfinite(inputs.grip_drive_n))
    throw InvalidInput("step: grip drive must be finite and >= 0");

  {
    TeleopMessage m = make_message(console_sender_, MessageKind::MasterState,
                                   MasterStatePayload{master_q.q,
                                                      inputs.grip_drive_n});
    result.emitted.push_back(m);
    to_slave_.send(std::move(m), tick_);
  }
  if (inputs.pedal_edge) {
    TeleopMessage m = make_message(console_sender_, MessageKind::PedalEvent,
                                   PedalEventPayload{true});
    result.emitted.push_back(m);
    to_slave_.send(std::move(m), tick_);
  }

  // 2. Controller: consume due master-side traffic in seq order.
  for (const auto& d : to_slave_.collect(tick_)) slave_inbox_.deposit(d);
  for (const TeleopMessage& msg : slave_inbox_.drain()) {
    if (msg.kind == MessageKind::PedalEvent) {
      handle_pedal();
      continue;
    }
    check(msg.kind == MessageKind::MasterState,
          "slave side consumes only MasterState and PedalEvent");
    const auto& state = std::get<MasterStatePayload>(msg.payload);
    last_cause_t_ms_ = static_cast<std::int64_t>(msg.t_sim_ms);

    if (mode_ == ControlMode::Manipulators) {
      const ToolPose master_pose =
          forward_kinematics(cfg_.arm, JointState7{state.q, false});
      if (motion_baseline_) {
        const PoseDelta scaled =
            scale_motion(pose_delta(*motion_baseline_, master_pose),
                         cfg_.scaling);
        if (scaled.clamped) workspace_clamped = true;
        slave_pose_.position += scaled.translation;
        slave_pose_.orientation =
            (scaled.rotation * slave_pose_.orientation).normalized();
        result.emitted.push_back(
            make_message(controller_sender_, MessageKind::SlaveCommand,
                         SlaveCommandPayload{scaled.translation,
                                             scaled.rotation}));
      }
      motion_baseline_ = master_pose;
      slave_grip_drive_n_ = state.grip_drive_n;
    }
    // CameraArm mode: manipulator command stream is frozen; the master
    // sample still updates the latency bookkeeping above.
  }
  if (workspace_clamped) ++stats_.workspace_clamped_ticks;
  check(slave_pose_.position.allFinite(), "slave pose must stay finite");

  // 3. Environment at the slave.
  const EnvSample env = sample_environment(cfg_.environment, slave_pose_,
                                           slave_grip_drive_n_,
                                           static_cast<double>(t_ms));

  // 4. Sensor pipeline: true wrench -> deflections -> readings -> estimate.
  const SpringDeflections defl = forward_deflections(env.wrench, cfg_.sensor);
  if (defl.saturated) ++stats_.sensor_saturated_ticks;
  const PhotoReadings readings = photo_from_springs(defl, noise_);
  const Wrench3 sensed = estimate_wrench(readings, cal_);

  // 5. Reports head back to the master.
  {
    TeleopMessage m = make_message(sensor_sender_, MessageKind::WrenchReport,
                                   WrenchReportPayload{sensed});
    m.trace_cause_t_ms = last_cause_t_ms_;
    result.emitted.push_back(m);
    to_master_.send(std::move(m), tick_);

    TeleopMessage g = make_message(sensor_sender_, MessageKind::GripReport,
                                   GripReportPayload{env.grip_n});
    result.emitted.push_back(g);
    to_master_.send(std::move(g), tick_);
  }

  // 6. Master side: arrived reports become motor commands.
  bool feedback_updated = false;
  for (const auto& d : to_master_.collect(tick_)) master_inbox_.deposit(d);
  for (const TeleopMessage& msg : master_inbox_.drain()) {
    if (msg.kind == MessageKind::WrenchReport) {
      const auto& rep = std::get<WrenchReportPayload>(msg.payload);
      const JointTorques7 torques =
          kinesthetic_torques(rep.wrench, cfg_.arm, master_q,
                              cfg_.torque_caps);
      if (torques.saturated) ++stats_.torque_clamped_ticks;
      applied_tau_ = torques.tau;
      feedback_updated = true;

      if (msg.trace_cause_t_ms >= 0) {
        const double sample =
            static_cast<double>(t_ms - msg.trace_cause_t_ms);
        check(sample >= 0.0, "feedback cannot precede its cause");
        if (stats_.latency_samples == 0) {
          stats_.latency_min_ms = stats_.latency_max_ms = sample;
        } else {
          stats_.latency_min_ms = std::min(stats_.latency_min_ms, sample);
          stats_.latency_max_ms = std::max(stats_.latency_max_ms, sample);
        }
        ++stats_.latency_samples;
        latency_sum_ms_ += sample;
        stats_.latency_mean_ms =
            latency_sum_ms_ / static_cast<double>(stats_.latency_samples);
      }
    } else if (msg.kind == MessageKind::GripReport) {
      const auto& rep = std::get<GripReportPayload>(msg.payload);
      vibration_ = tactile_command(rep.grip_n, cfg_.tactile, vibration_);
      feedback_updated = true;
    } else {
      check(false, "master side consumes only WrenchReport and GripReport");
    }
  }
  if (feedback_updated) {
    result.emitted.push_back(
        make_message(feedback_sender_, MessageKind::FeedbackCommand,
                     FeedbackCommandPayload{applied_tau_, vibration_}));
  }

  // 7. Snapshot.
  TraceRow& row = result.trace;
  row.t_ms = t_ms;
  row.mode = mode_;
  row.master_q = master_q.q;
  row.slave_pos = slave_pose_.position;
  row.true_wrench = env.wrench;
  row.sensed_wrench = sensed;
  row.grip_n = env.grip_n;
  row.tau = applied_tau_;
  row.motor1 = vibration_.motor1_intensity;
  row.motor2 = vibration_.motor2_on;
  row.dropped_msgs = slave_inbox_.lost() + master_inbox_.lost();

  for (int i = 0; i < 3; ++i) {
    const double err = std::abs(sensed.vec()[i] - env.wrench.vec()[i]);
    stats_.max_sensed_error[i] = std::max(stats_.max_sensed_error[i], err);
    stats_.max_sensed_error_overall =
        std::max(stats_.max_sensed_error_overall, err);
  }
  stats_.messages_sent = to_slave_.sent() + to_master_.sent();
  stats_.messages_delivered = slave_inbox_.delivered() +
                              master_inbox_.delivered();
  stats_.messages_lost = slave_inbox_.lost() + master_inbox_.lost();

  ++tick_;
  return result;
}

SummaryStats run_scenario(const SimConfig& cfg, std::ostream* trace_sink) {
  if (cfg.tick_ms <= 0) throw InvalidInput("run_scenario: tick_ms must be >= 1");
  if (cfg.duration_ms < cfg.tick_ms)
    throw InvalidInput("run_scenario: duration_ms must cover at least one tick");

  // Pedal presses map each to the first tick at or after the press; two
  // presses cannot share a tick (a bool edge per tick cannot carry both).
  std::vector<std::int64_t> pedal_ticks;
  for (double t : cfg.inputs.pedal_times_ms) {
    const auto tk = static_cast<std::int64_t>(
        std::ceil(t / static_cast<double>(cfg.tick_ms) - 1e-9));
    if (!pedal_ticks.empty() && tk <= pedal_ticks.back())
      throw InvalidInput(
          "run_scenario: pedal presses must map to distinct increasing ticks");
    pedal_ticks.push_back(tk);
  }

  TeleopSim sim(cfg);
  const std::int64_t n_ticks = cfg.duration_ms / cfg.tick_ms;
  std::size_t pedal_idx = 0;

  if (trace_sink) *trace_sink << kTraceCsvHeader << "\n";

  for (std::int64_t k = 0; k < n_ticks; ++k) {
    const double t_ms = static_cast<double>(k * cfg.tick_ms);
    TickInputs in;
    for (int j = 0; j < 7; ++j) in.master_q[j] = cfg.inputs.joints[j].eval(t_ms);
    in.grip_drive_n = std::max(0.0, cfg.inputs.grip_drive.eval(t_ms));
    if (pedal_idx < pedal_ticks.size() && pedal_ticks[pedal_idx] == k) {
      in.pedal_edge = true;
      ++pedal_idx;
    }

    const StepResult r = sim.step(in);
    if (trace_sink) *trace_sink << trace_row_to_csv(r.trace) << "\n";
  }

  SummaryStats stats = sim.stats();
  stats.ticks = n_ticks;
  stats.duration_ms = n_ticks * cfg.tick_ms;
  return stats;
}

}  // namespace endo
