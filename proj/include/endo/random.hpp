#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace endo {

/// Seeded RNG used everywhere randomness is needed (photo-sensor noise,
/// transport jitter/drops, sample generation).
///
/// mt19937_64 has a standard-defined output sequence, and the variate
/// mappings below are hand-rolled because the std::*_distribution adapters
/// are implementation-defined; with both pinned, one seed gives one stream
/// of values on every platform, which is what the replay-determinism
/// contract needs.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform on [0, 1), 53-bit resolution.
  double uniform01() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) {
    return lo + (hi - lo) * uniform01();
  }

  /// Standard normal via Box-Muller (no cached second sample, so the draw
  /// count per call is fixed).
  double gaussian() {
    const double u1 = 1.0 - uniform01();  // (0, 1], keeps the log finite
    const double u2 = uniform01();
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * 3.14159265358979323846 * u2);
  }

  double gaussian(double mean, double stddev) {
    return mean + stddev * gaussian();
  }

  bool bernoulli(double p) { return uniform01() < p; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace endo
