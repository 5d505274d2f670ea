#include "endo/teleop/message.hpp"

#include <cstring>

#include "endo/errors.hpp"

namespace endo {

const char* to_string(MessageKind k) {
  switch (k) {
    case MessageKind::MasterState: return "MasterState";
    case MessageKind::SlaveCommand: return "SlaveCommand";
    case MessageKind::WrenchReport: return "WrenchReport";
    case MessageKind::GripReport: return "GripReport";
    case MessageKind::FeedbackCommand: return "FeedbackCommand";
    case MessageKind::PedalEvent: return "PedalEvent";
  }
  return "Unknown";
}

namespace {

// Explicit little-endian byte packing so the format is host-order
// independent.

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back((v >> (8 * i)) & 0xff);
}

void put_u64(std::vector<std::uint8_t>& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back((v >> (8 * i)) & 0xff);
}

void put_f64(std::vector<std::uint8_t>& out, double d) {
  std::uint64_t bits;
  std::memcpy(&bits, &d, sizeof(bits));
  put_u64(out, bits);
}

struct Reader {
  const std::vector<std::uint8_t>& buf;
  std::size_t pos;

  void need(std::size_t n) const {
    if (pos + n > buf.size())
      throw InvalidInput("decode_message: truncated record");
  }
  std::uint32_t u32() {
    need(4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= std::uint32_t(buf[pos + i]) << (8 * i);
    pos += 4;
    return v;
  }
  std::uint64_t u64() {
    need(8);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= std::uint64_t(buf[pos + i]) << (8 * i);
    pos += 8;
    return v;
  }
  std::uint8_t u8() {
    need(1);
    return buf[pos++];
  }
  double f64() {
    const std::uint64_t bits = u64();
    double d;
    std::memcpy(&d, &bits, sizeof(d));
    return d;
  }
};

std::size_t payload_doubles(MessageKind k) {
  switch (k) {
    case MessageKind::MasterState: return 8;
    case MessageKind::SlaveCommand: return 7;
    case MessageKind::WrenchReport: return 3;
    case MessageKind::GripReport: return 1;
    case MessageKind::FeedbackCommand: return 9;
    case MessageKind::PedalEvent: return 1;
  }
  throw InvalidInput("payload_doubles: unknown message kind");
}

}  // namespace

void encode_message(const TeleopMessage& msg, std::vector<std::uint8_t>& out) {
  const std::size_t body_len =
      1 + 4 + 8 + 8 * payload_doubles(msg.kind);  // kind + seq + t + payload
  put_u32(out, static_cast<std::uint32_t>(body_len));
  out.push_back(static_cast<std::uint8_t>(msg.kind));
  put_u32(out, msg.seq);
  put_u64(out, msg.t_sim_ms);

  std::visit(
      [&out](const auto& p) {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, MasterStatePayload>) {
          for (int i = 0; i < 7; ++i) put_f64(out, p.q[i]);
          put_f64(out, p.grip_drive_n);
        } else if constexpr (std::is_same_v<T, SlaveCommandPayload>) {
          for (int i = 0; i < 3; ++i) put_f64(out, p.translation[i]);
          put_f64(out, p.rotation.w());
          put_f64(out, p.rotation.x());
          put_f64(out, p.rotation.y());
          put_f64(out, p.rotation.z());
        } else if constexpr (std::is_same_v<T, WrenchReportPayload>) {
          put_f64(out, p.wrench.fz);
          put_f64(out, p.wrench.mx);
          put_f64(out, p.wrench.my);
        } else if constexpr (std::is_same_v<T, GripReportPayload>) {
          put_f64(out, p.grip_n);
        } else if constexpr (std::is_same_v<T, FeedbackCommandPayload>) {
          for (int i = 0; i < 7; ++i) put_f64(out, p.tau[i]);
          put_f64(out, p.vibration.motor1_intensity);
          put_f64(out, p.vibration.motor2_on ? 1.0 : 0.0);
        } else if constexpr (std::is_same_v<T, PedalEventPayload>) {
          put_f64(out, p.pressed ? 1.0 : 0.0);
        }
      },
      msg.payload);
}

std::vector<std::uint8_t> encode_message(const TeleopMessage& msg) {
  std::vector<std::uint8_t> out;
  encode_message(msg, out);
  return out;
}

TeleopMessage decode_message(const std::vector<std::uint8_t>& buf,
                             std::size_t& offset) {
  Reader r{buf, offset};
  const std::uint32_t len = r.u32();
  const std::size_t body_start = r.pos;
  r.need(len);

  const std::uint8_t kind_byte = r.u8();
  if (kind_byte > static_cast<std::uint8_t>(MessageKind::PedalEvent))
    throw InvalidInput("decode_message: unknown kind tag " +
                       std::to_string(kind_byte));
  TeleopMessage msg;
  msg.kind = static_cast<MessageKind>(kind_byte);
  msg.seq = r.u32();
  msg.t_sim_ms = r.u64();

  const std::size_t n = payload_doubles(msg.kind);
  if (len != 1 + 4 + 8 + 8 * n)
    throw InvalidInput("decode_message: length " + std::to_string(len) +
                       " does not match kind " + to_string(msg.kind));

  switch (msg.kind) {
    case MessageKind::MasterState: {
      MasterStatePayload p;
      for (int i = 0; i < 7; ++i) p.q[i] = r.f64();
      p.grip_drive_n = r.f64();
      msg.payload = p;
      break;
    }
    case MessageKind::SlaveCommand: {
      SlaveCommandPayload p;
      for (int i = 0; i < 3; ++i) p.translation[i] = r.f64();
      const double w = r.f64(), x = r.f64(), y = r.f64(), z = r.f64();
      p.rotation = Eigen::Quaterniond(w, x, y, z);
      msg.payload = p;
      break;
    }
    case MessageKind::WrenchReport: {
      WrenchReportPayload p;
      p.wrench.fz = r.f64();
      p.wrench.mx = r.f64();
      p.wrench.my = r.f64();
      msg.payload = p;
      break;
    }
    case MessageKind::GripReport: {
      GripReportPayload p;
      p.grip_n = r.f64();
      msg.payload = p;
      break;
    }
    case MessageKind::FeedbackCommand: {
      FeedbackCommandPayload p;
      for (int i = 0; i < 7; ++i) p.tau[i] = r.f64();
      p.vibration.motor1_intensity = r.f64();
      p.vibration.motor2_on = r.f64() != 0.0;
      msg.payload = p;
      break;
    }
    case MessageKind::PedalEvent: {
      msg.payload = PedalEventPayload{r.f64() != 0.0};
      break;
    }
  }

  offset = body_start + len;
  return msg;
}

}  // namespace endo
