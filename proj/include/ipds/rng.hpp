#pragma once

#include <cmath>
#include <cstdint>
#include <utility>

namespace ipds {

// Counter-keyed splitmix64 stream. Streams keyed by (seed, a, b) are
// independent of thread scheduling, which is what makes runs bitwise
// reproducible regardless of the worker count.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(mix(seed ^ 0x9e3779b97f4a7c15ull)) {}

  static Rng keyed(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
    std::uint64_t s = mix(seed + 0x9e3779b97f4a7c15ull);
    s = mix(s ^ (a + 0xbf58476d1ce4e5b9ull));
    s = mix(s ^ (b + 0x94d049bb133111ebull));
    return Rng(FromState{}, s);
  }

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  // Uniform in [0, 1) with 53-bit resolution.
  double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  // Uniform integer in [0, n), unbiased (rejection sampling).
  std::uint64_t below(std::uint64_t n) {
    if (n <= 1) return 0;
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t x;
    do {
      x = next();
    } while (x >= limit);
    return x % n;
  }

  // Standard normal via Box-Muller; consumes two uniforms per pair.
  std::pair<double, double> normal_pair() {
    double u1 = 1.0 - uniform01();  // (0, 1], keeps log finite
    double u2 = uniform01();
    double r = std::sqrt(-2.0 * std::log(u1));
    return {r * std::cos(2.0 * M_PI * u2), r * std::sin(2.0 * M_PI * u2)};
  }

  double normal() { return normal_pair().first; }

 private:
  struct FromState {};
  Rng(FromState, std::uint64_t s) : state_(s) {}

  static std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  std::uint64_t state_;
};

}  // namespace ipds
