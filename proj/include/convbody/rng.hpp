#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace convbody {

// SplitMix64 finalizer. Bijective on 64-bit words.
inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ull;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

// Counter-based generator: every draw is addressed by (seed, stream, index),
// so substreams are deterministic under any parallel evaluation order and
// extending a stream never perturbs earlier draws.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed) : key_(mix64(seed ^ 0x2545F4914F6CDD1Dull)) {}

  std::uint64_t bits(std::uint64_t stream, std::uint64_t index) const {
    return mix64(mix64(key_ ^ (stream * 0xD6E8FEB86659FD93ull)) ^ index);
  }

  // Uniform in [0, 1).
  double uniform(std::uint64_t stream, std::uint64_t index) const {
    return static_cast<double>(bits(stream, index) >> 11) * 0x1.0p-53;
  }

  // Standard normal pair by Box-Muller from draws (index, index+1).
  void gaussian_pair(std::uint64_t stream, std::uint64_t index, double& g0, double& g1) const {
    double u1 = uniform(stream, index);
    double u2 = uniform(stream, index + 1);
    double r = std::sqrt(-2.0 * std::log1p(-u1));  // u1 < 1, so log1p(-u1) is finite
    double a = 2.0 * std::numbers::pi_v<double> * u2;
    g0 = r * std::cos(a);
    g1 = r * std::sin(a);
  }

 private:
  std::uint64_t key_;
};

}  // namespace convbody
