#pragma once

// Seedable counter-based generator used by every stochastic component.
//
// The core is the SplitMix64 mixer (Steele, Lea & Flood): the state advances
// by a fixed odd increment, so the k-th output is a pure bijective hash of
// (seed + k * gamma). Pinning the algorithm here keeps simulation output
// reproducible across platforms and library versions, which std::mt19937
// plus std::normal_distribution would not guarantee.

#include <cstdint>
#include <cmath>

namespace riemcorr {

// SplitMix64 finalizer. Also used on its own to derive independent
// sub-stream seeds.
inline std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
    return mix64(z);
  }

  // Uniform double in [0, 1), 53 mantissa bits.
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Uniform double in (0, 1]; safe under log().
  double uniform_pos() { return 1.0 - uniform(); }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Standard normal via the polar Box-Muller (Marsaglia) method. The second
  // variate of each pair is cached, so draws come in deterministic order.
  double normal() {
    if (has_cached_) {
      has_cached_ = false;
      return cached_;
    }
    double u, v, s;
    do {
      u = 2.0 * uniform() - 1.0;
      v = 2.0 * uniform() - 1.0;
      s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double f = std::sqrt(-2.0 * std::log(s) / s);
    cached_ = v * f;
    has_cached_ = true;
    return u * f;
  }

  // Derive a generator for an independent sub-stream. Stream ids give
  // distinct, reproducible seeds from a single parent seed.
  Rng split(std::uint64_t stream) const {
    return Rng(mix64(state_ ^ (0x9E3779B97F4A7C15ull * (stream + 1))));
  }

 private:
  std::uint64_t state_;
  double cached_ = 0.0;
  bool has_cached_ = false;
};

// Per-cell seed for sweep grids: base-seed XOR a hash of (cell index, replication).
inline std::uint64_t cell_seed(std::uint64_t base_seed, std::uint64_t cell_index,
                               std::uint64_t replication) {
  return base_seed ^ mix64(0x9E3779B97F4A7C15ull * (cell_index + 1) +
                           0xD1B54A32D192ED03ull * (replication + 1));
}

}  // namespace riemcorr
