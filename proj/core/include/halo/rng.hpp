#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace halo {

/// Stream purposes used by the simulator so that arrival, service, and
/// policy randomness never interleave.
enum class StreamPurpose : std::uint64_t { kArrivals = 1, kService = 2, kPolicy = 3 };

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Deterministic pseudorandom stream. All sampling goes through explicit
/// hand-rolled transforms on mt19937_64 output, so sequences are
/// bit-identical across standard libraries and platforms.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed) : engine_(seed) {}

  /// Substream for (seed, replication, purpose).
  static RngStream derive(std::uint64_t seed, std::uint64_t replication, StreamPurpose purpose) {
    std::uint64_t s = splitmix64(seed);
    s = splitmix64(s ^ replication);
    s = splitmix64(s ^ static_cast<std::uint64_t>(purpose));
    return RngStream(s);
  }

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform double in [0, 1) with 53 bits of precision.
  double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  /// Uniform integer in [0, n), unbiased via rejection.
  std::uint64_t uniform_below(std::uint64_t n) {
    const std::uint64_t threshold = (0ULL - n) % n;  // 2^64 mod n
    for (;;) {
      const std::uint64_t r = next_u64();
      if (r >= threshold) return r % n;
    }
  }

  double exponential(double rate) { return -std::log1p(-uniform01()) / rate; }

  /// Standard normal via Box-Muller, one value per call pair.
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1 = uniform01();
    while (u1 == 0.0) u1 = uniform01();
    const double u2 = uniform01();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * M_PI * u2;
    spare_ = r * std::sin(theta);
    has_spare_ = true;
    return r * std::cos(theta);
  }

  /// Index draw proportional to non-negative weights; zero-weight entries
  /// are never returned.
  std::size_t weighted_index(const std::vector<double>& weights) {
    double total = 0.0;
    for (double w : weights) total += w;
    const double target = uniform01() * total;
    double acc = 0.0;
    std::size_t last_positive = weights.size();
    for (std::size_t i = 0; i < weights.size(); ++i) {
      if (weights[i] <= 0.0) continue;
      acc += weights[i];
      last_positive = i;
      if (target < acc) return i;
    }
    return last_positive;  // rounding at the top edge
  }

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace halo
