#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

namespace funnelkit {

// Deterministic 64-bit generator (splitmix64). Bit-stable across platforms
// and cheap to seed, so parallel loops can derive one independent stream per
// trial from a master seed and reproduce results regardless of scheduling.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  // Uniform in [0, 1).
  double next_double() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  // Uniform in (0, 1]; safe as a log argument.
  double next_open() { return (static_cast<double>(next() >> 11) + 1.0) * 0x1.0p-53; }

  // Uniform integer in [0, n); n >= 1. Rejection keeps it unbiased.
  std::uint64_t next_below(std::uint64_t n) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t v = next();
    while (v >= limit) v = next();
    return v % n;
  }

  double exponential() { return -std::log(next_open()); }

  double normal() {
    const double u1 = next_open();
    const double u2 = next_double();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925287 * u2);
  }

  // Marsaglia-Tsang; shape < 1 boosted via gamma(shape+1) * u^(1/shape).
  double gamma(double shape) {
    if (shape < 1.0) {
      const double u = next_open();
      return gamma(shape + 1.0) * std::pow(u, 1.0 / shape);
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
      const double u = next_open();
      if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
      if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
    }
  }

 private:
  std::uint64_t state_;
};

// Per-stream seed derivation: mixes the master seed with the stream index so
// each trial/instance gets a decorrelated, reproducible generator.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) {
  SplitMix64 g(master ^ (stream * 0xd1342543de82ef95ull + 0x9e3779b97f4a7c15ull));
  return g.next();
}

// Symmetric Dirichlet(alpha) sample; alpha = 1 is uniform on the simplex.
inline std::vector<double> random_pmf(SplitMix64& rng, std::size_t n, double alpha = 1.0) {
  std::vector<double> p(n);
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    p[i] = (alpha == 1.0) ? rng.exponential() : rng.gamma(alpha);
    total += p[i];
  }
  for (double& v : p) v /= total;
  return p;
}

}  // namespace funnelkit
