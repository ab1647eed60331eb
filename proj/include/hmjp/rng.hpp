#ifndef HMJP_RNG_HPP
#define HMJP_RNG_HPP

#include <cmath>
#include <cstdint>
#include <initializer_list>

namespace hmjp {

// Deterministic random streams. Every consumer derives its own substream
// from a master seed and a key path (e.g. {STREAM_AUG, iteration, interval}),
// so results do not depend on scheduling or thread count.
class Rng {
public:
  explicit Rng(std::uint64_t seed) {
    std::uint64_t x = seed;
    for (auto &w : state_) w = splitmix64(x);
    // avoid the all-zero state (cannot happen after splitmix of any seed,
    // but keep the guard cheap and explicit)
    if ((state_[0] | state_[1] | state_[2] | state_[3]) == 0) state_[0] = 1;
  }

  // Hash-derive a substream: fold each key into the master seed.
  static Rng derive(std::uint64_t master, std::initializer_list<std::uint64_t> path) {
    std::uint64_t h = master;
    for (std::uint64_t k : path) h = mix(h, k);
    return Rng(h);
  }

  std::uint64_t next_u64() {
    const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  // Uniform on the open interval (0,1): never 0, never 1.
  double uniform01() {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  }

  // Uniform on [a,b).
  double uniform(double a, double b) {
    return a + (b - a) * static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // Unit-rate exponential, strictly positive.
  double exponential() { return -std::log(uniform01()); }

  // Standard normal (Box-Muller; consumes two uniforms per call).
  double normal() {
    const double u = uniform01();
    const double v = uniform01();
    return std::sqrt(-2.0 * std::log(u)) * std::cos(6.283185307179586476925286766559 * v);
  }

  // Gamma(shape, rate) by Marsaglia-Tsang, boosted for shape < 1.
  double gamma(double shape, double rate) {
    if (shape < 1.0) {
      const double u = uniform01();
      return gamma(shape + 1.0, rate) * std::pow(u, 1.0 / shape);
    }
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
      double x, v;
      do {
        x = normal();
        v = 1.0 + c * x;
      } while (v <= 0.0);
      v = v * v * v;
      const double u = uniform01();
      if (u < 1.0 - 0.0331 * x * x * x * x) return d * v / rate;
      if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v / rate;
    }
  }

  // Bernoulli(p): true with probability p.
  bool bernoulli(double p) { return uniform01() < p; }

private:
  static std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }

  static std::uint64_t splitmix64(std::uint64_t &x) {
    std::uint64_t z = (x += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  static std::uint64_t mix(std::uint64_t h, std::uint64_t k) {
    std::uint64_t z = h ^ (k + 0x9E3779B97F4A7C15ULL + (h << 6) + (h >> 2));
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  std::uint64_t state_[4];
};

// Stream tags for substream derivation (keys into Rng::derive).
enum StreamTag : std::uint64_t {
  STREAM_SIM = 1,     // path / panel simulation, keyed by subject
  STREAM_AUG = 2,     // data augmentation, keyed by (iteration, interval)
  STREAM_PARAM = 3,   // sequential parameter updates within a chain
  STREAM_INIT = 4,    // initial-state draws
  STREAM_TEST = 99    // test harness use
};

} // namespace hmjp

#endif
