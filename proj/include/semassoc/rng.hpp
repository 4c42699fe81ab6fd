#pragma once

#include <cmath>
#include <cstdint>

namespace semassoc {

/// Deterministic PRNG with a fixed bit-level algorithm, so that seeded
/// corpora are byte-identical across platforms and standard-library versions
/// (std::uniform_real_distribution makes no such promise).
///
/// State advances with splitmix64; all distributions below are derived from
/// its output stream in a fixed order.
class Rng {
 public:
  explicit Rng(uint64_t seed) : state_(seed) {}

  uint64_t next_u64() {
    state_ += 0x9E3779B97F4A7C15ULL;
    uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  /// Uniform in [0, 1).
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  /// Uniform in [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Uniform integer in [0, n).
  uint64_t uniform_index(uint64_t n) { return n == 0 ? 0 : next_u64() % n; }

  bool bernoulli(double p) { return uniform() < p; }

  /// Standard normal via Box-Muller (one draw per call, fixed order).
  double normal() {
    double u1 = uniform();
    double u2 = uniform();
    if (u1 < 1e-300) u1 = 1e-300;
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
  }

  double normal(double mean, double sigma) { return mean + sigma * normal(); }

  /// Poisson by inversion; fine for the small rates used here.
  int poisson(double lambda) {
    if (lambda <= 0.0) return 0;
    double p = std::exp(-lambda);
    double c = p;
    double u = uniform();
    int k = 0;
    while (u > c && k < 1000) {
      ++k;
      p *= lambda / k;
      c += p;
    }
    return k;
  }

 private:
  uint64_t state_;
};

/// Mixes a stream index (e.g. a frame number) into a base seed.
inline uint64_t mix_seed(uint64_t seed, uint64_t index) {
  uint64_t z = seed ^ (0x9E3779B97F4A7C15ULL * (index + 1));
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace semassoc
