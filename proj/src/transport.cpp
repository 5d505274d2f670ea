#include "endo/teleop/transport.hpp"

#include <cmath>

#include "endo/errors.hpp"

namespace endo {

namespace {

std::int64_t delay_to_ticks(double delay_ms, double tick_ms) {
  const double ticks = std::ceil(delay_ms / tick_ms - 1e-12);
  return std::max<std::int64_t>(0, static_cast<std::int64_t>(ticks));
}

}  // namespace

SimTransport::SimTransport(const TransportParams& params, double tick_ms)
    : params_(params), tick_ms_(tick_ms), rng_(params.seed) {
  if (!(params.base_latency_ms >= 0.0))
    throw InvalidInput("SimTransport: base_latency_ms must be >= 0");
  if (!(params.jitter_ms >= 0.0) || params.jitter_ms > params.base_latency_ms)
    throw InvalidInput("SimTransport: jitter_ms must be in [0, base_latency]");
  if (!(params.drop_rate >= 0.0) || !(params.drop_rate < 1.0))
    throw InvalidInput("SimTransport: drop_rate must be in [0, 1)");
  if (!(tick_ms > 0.0)) throw InvalidInput("SimTransport: tick_ms must be > 0");
  min_delay_ticks_ =
      delay_to_ticks(params.base_latency_ms - params.jitter_ms, tick_ms);
  max_delay_ticks_ =
      delay_to_ticks(params.base_latency_ms + params.jitter_ms, tick_ms);
}

void SimTransport::send(TeleopMessage msg, std::int64_t send_tick) {
  ++sent_;
  // Fixed draw order per message keeps replays identical: drop first, then
  // jitter (the jitter draw happens even for dropped messages so the stream
  // position does not depend on drop outcomes).
  const bool drop = rng_.bernoulli(params_.drop_rate);
  const double jitter =
      params_.jitter_ms > 0.0
          ? rng_.uniform(-params_.jitter_ms, params_.jitter_ms)
          : 0.0;

  Delivery d;
  d.send_tick = send_tick;
  d.seq = msg.seq;
  if (drop) {
    ++dropped_;
    d.lost = true;
    // The receiver learns the seq is gone once it can no longer arrive.
    in_flight_[send_tick + max_delay_ticks_].push_back(std::move(d));
  } else {
    const std::int64_t delay =
        delay_to_ticks(params_.base_latency_ms + jitter, tick_ms_);
    d.msg = std::move(msg);
    in_flight_[send_tick + delay].push_back(std::move(d));
  }
}

std::vector<SimTransport::Delivery> SimTransport::collect(std::int64_t tick) {
  auto it = in_flight_.find(tick);
  if (it == in_flight_.end()) return {};
  std::vector<Delivery> due = std::move(it->second);
  in_flight_.erase(it);
  return due;
}

void InOrderInbox::deposit(const SimTransport::Delivery& d) {
  pending_[d.seq] = d.lost ? std::nullopt : std::optional(d.msg.value());
}

std::vector<TeleopMessage> InOrderInbox::drain() {
  std::vector<TeleopMessage> out;
  for (auto it = pending_.find(next_seq_); it != pending_.end();
       it = pending_.find(next_seq_)) {
    if (it->second.has_value()) {
      out.push_back(std::move(*it->second));
      ++delivered_;
    } else {
      ++lost_;
    }
    pending_.erase(it);
    ++next_seq_;
  }
  return out;
}

}  // namespace endo
