#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "endo/random.hpp"
#include "endo/teleop/message.hpp"

namespace endo {

/// Simulated link: fixed base latency, uniform ±jitter, Bernoulli drops.
struct TransportParams {
  double base_latency_ms = 0.0;
  double jitter_ms = 0.0;  // uniform ±, must not exceed base_latency_ms
  double drop_rate = 0.0;  // in [0, 1)
  std::uint64_t seed = 0;
};

/// One direction of the simulated link. Messages are delayed by
/// base ± jitter (quantized up to whole ticks) or dropped. A dropped message
/// produces a loss notice at its latest possible arrival tick, so receivers
/// can count it and stop waiting for the seq — drops are counted, never
/// silently healed into delivered data.
///
/// Determinism: one RNG draw pair per send, in send order; deliveries due on
/// the same tick come out in send order.
class SimTransport {
 public:
  struct Delivery {
    std::int64_t send_tick = 0;
    std::uint32_t seq = 0;
    bool lost = false;
    std::optional<TeleopMessage> msg;  // engaged iff !lost
  };

  SimTransport(const TransportParams& params, double tick_ms);

  void send(TeleopMessage msg, std::int64_t send_tick);

  /// Deliveries due exactly at `tick`.
  std::vector<Delivery> collect(std::int64_t tick);

  std::uint64_t sent() const { return sent_; }
  std::uint64_t dropped() const { return dropped_; }

  /// Ticks a message can spend in flight, for causality checks.
  std::int64_t min_delay_ticks() const { return min_delay_ticks_; }
  std::int64_t max_delay_ticks() const { return max_delay_ticks_; }

 private:
  TransportParams params_;
  double tick_ms_;
  std::int64_t min_delay_ticks_;
  std::int64_t max_delay_ticks_;
  Rng rng_;
  std::map<std::int64_t, std::vector<Delivery>> in_flight_;
  std::uint64_t sent_ = 0;
  std::uint64_t dropped_ = 0;
};

/// Receiver-side reorder buffer: consumes deliveries in strict seq order,
/// skipping (and counting) seqs the transport reported lost.
class InOrderInbox {
 public:
  void deposit(const SimTransport::Delivery& d);

  /// Messages whose seq is next in line, in order. Messages still ahead of a
  /// gap stay buffered until the gap fills or is declared lost.
  std::vector<TeleopMessage> drain();

  std::uint64_t delivered() const { return delivered_; }
  std::uint64_t lost() const { return lost_; }

 private:
  std::uint32_t next_seq_ = 0;
  std::map<std::uint32_t, std::optional<TeleopMessage>> pending_;
  std::uint64_t delivered_ = 0;
  std::uint64_t lost_ = 0;
};

}  // namespace endo
