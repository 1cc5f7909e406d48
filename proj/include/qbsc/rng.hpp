#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace qbsc {

/// Deterministic random source. All randomness in the library flows through
/// this wrapper so results depend only on the mt19937_64 output sequence,
/// which the standard fixes bit-for-bit: uniform doubles take the top 53 bits
/// of one draw, normals come from Box-Muller on two uniforms (no cached
/// spare, so the stream position is a pure function of the call count).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  /// Stream for trial i of a batch: generator seeded with seed XOR i.
  static Rng stream(std::uint64_t seed, std::uint64_t trial) {
    return Rng(seed ^ trial);
  }

  std::uint64_t raw() { return gen_(); }

  bool bit() { return (gen_() >> 63) != 0; }

  /// Uniform in [0, 1).
  double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  /// Uniform integer in [0, bound), rejection sampled.
  std::uint64_t below(std::uint64_t bound) {
    const std::uint64_t limit = bound * (UINT64_MAX / bound);
    std::uint64_t v = gen_();
    while (v >= limit) v = gen_();
    return v % bound;
  }

  /// Standard normal deviate.
  double normal() {
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * std::numbers::pi * u2);
  }

 private:
  std::mt19937_64 gen_;
};

}  // namespace qbsc
