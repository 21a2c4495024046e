#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace awdpd {

// Deterministic random source. The mt19937_64 engine is fully specified by
// the standard; the distribution transforms below are hand-rolled because
// std:: distributions are implementation-defined and would break bitwise
// reproducibility across toolchains.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // uniform on [0, 1)
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  // uniform on (0, 1]
  double uniform_pos() {
    return (static_cast<double>(engine_() >> 11) + 1.0) * 0x1.0p-53;
  }

  bool bernoulli(double p) { return uniform() < p; }

  // standard normal via Box-Muller; second deviate cached
  double normal() {
    if (has_cached_) {
      has_cached_ = false;
      return cached_;
    }
    const double u1 = uniform_pos();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * M_PI * u2;
    cached_ = r * std::sin(a);
    has_cached_ = true;
    return r * std::cos(a);
  }

  double normal(double mean, double sd) { return mean + sd * normal(); }

  // uniform integer on [lo, hi], rejection sampled to avoid modulo bias
  std::uint64_t uniform_int(std::uint64_t lo, std::uint64_t hi) {
    const std::uint64_t range = hi - lo + 1;
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % range;
    std::uint64_t x;
    do {
      x = engine_();
    } while (x >= limit);
    return lo + x % range;
  }

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
  double cached_ = 0.0;
  bool has_cached_ = false;
};

// splitmix64 finalizer, used to derive independent substream seeds
inline std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Stream `index` of master seed `seed`; distinct indices give decorrelated
// generators so replications can run in any order (or concurrently) without
// changing results.
inline Rng substream(std::uint64_t seed, std::uint64_t index) {
  return Rng(mix64(mix64(seed) ^ mix64(index + 0x51f0d7a5ULL)));
}

}  // namespace awdpd
