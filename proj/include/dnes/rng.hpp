#pragma once

#include <cmath>
#include <cstdint>

namespace dnes {

/// Purposes that own an independent family of random streams.
enum class StreamPurpose : std::uint64_t {
  compressor = 1,
  trigger_zeta = 2,
  initial_state = 3,
  graph = 4,
  certification = 5,
};

/// Counter-based random stream. Every (seed, purpose, agent, iteration) key maps
/// to its own reproducible sequence, so draws for one mechanism never shift the
/// draws of another.
class RngStream {
 public:
  RngStream(std::uint64_t seed, StreamPurpose purpose, std::uint64_t agent = 0,
            std::uint64_t iteration = 0)
      : state_(mix(mix(mix(mix(seed) ^ static_cast<std::uint64_t>(purpose)) ^ agent) ^
                   (iteration * 0x9E3779B97F4A7C15ULL))) {}

  std::uint64_t next_u64() {
    // splitmix64
    state_ += 0x9E3779B97F4A7C15ULL;
    return mix(state_);
  }

  /// Uniform on [0, 1).
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  /// Uniform on the open interval (lo, hi).
  double uniform_open(double lo, double hi) {
    double u = uniform();
    while (u == 0.0) u = uniform();
    return lo + (hi - lo) * u;
  }

  /// Standard normal (Box-Muller, one output per call).
  double normal() {
    double u1 = uniform();
    while (u1 == 0.0) u1 = uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
  }

 private:
  static std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  std::uint64_t state_;
};

}  // namespace dnes
