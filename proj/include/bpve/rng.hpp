#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

#include "bpve/math_detail.hpp"

namespace bpve {

// splitmix64 (Steele/Lea/Flood mixing constants): 64-bit state, one
// multiply-xor-shift chain per output.  Small, fast, and -- because the
// state is a plain counter under a finalizer -- trivially splittable into
// independent per-replication streams.
struct SplitMix64 {
  std::uint64_t state = 0;

  explicit SplitMix64(std::uint64_t s = 0) : state(s) {}

  std::uint64_t next() {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  // Uniform on the open interval (0,1): ((x >> 11) + 0.5) * 2^-53.
  // Never 0 or 1, so logs of uniforms are always finite.
  double uniform_open01() {
    return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53;
  }
};

// Stream for replication r of a run seeded with `seed`: the splitmix64
// output function applied to seed + (r+1) * golden-gamma.  Distinct
// replications get well-separated states independent of execution order.
inline SplitMix64 replication_stream(std::uint64_t seed, std::uint64_t r) {
  std::uint64_t z = seed + (r + 1) * 0x9E3779B97F4A7C15ull;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return SplitMix64(z ^ (z >> 31));
}

// Geometric on {0,1,2,...} with P(X=k) = p q^k, sampled by inversion:
// X = floor(log U / log q).  One uniform per draw, no rejection, identical
// output on any platform with a faithful log.
inline std::uint64_t sample_geometric(double p, SplitMix64& rng) {
  if (p >= 1.0) return 0;
  const double u = rng.uniform_open01();
  return static_cast<std::uint64_t>(std::log(u) / std::log1p(-p));
}

inline double sample_standard_normal(SplitMix64& rng) {
  const double u1 = rng.uniform_open01();
  const double u2 = rng.uniform_open01();
  return std::sqrt(-2.0 * std::log(u1)) *
         std::cos(2.0 * std::numbers::pi * u2);
}

// Marsaglia-Tsang squeeze method; requires shape >= 1, unit scale.
inline double sample_gamma(double shape, SplitMix64& rng) {
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x, v;
    do {
      x = sample_standard_normal(rng);
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = rng.uniform_open01();
    const double x2 = x * x;
    if (u < 1.0 - 0.0331 * x2 * x2) return d * v;
    if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) return d * v;
  }
}

inline std::uint64_t sample_poisson(double mean, SplitMix64& rng) {
  if (mean < 12.0) {
    // product-of-uniforms count-down
    const double limit = std::exp(-mean);
    std::uint64_t k = 0;
    double prod = rng.uniform_open01();
    while (prod > limit) {
      ++k;
      prod *= rng.uniform_open01();
    }
    return k;
  }
  // rejection from a Cauchy envelope around the mode
  const double sq = std::sqrt(2.0 * mean);
  const double log_mean = std::log(mean);
  const double g = mean * log_mean - detail::log_gamma(mean + 1.0);
  for (;;) {
    double y, em;
    do {
      y = std::tan(std::numbers::pi * rng.uniform_open01());
      em = sq * y + mean;
    } while (em < 0.0);
    em = std::floor(em);
    const double t =
        0.9 * (1.0 + y * y) *
        std::exp(em * log_mean - detail::log_gamma(em + 1.0) - g);
    if (rng.uniform_open01() <= t) return static_cast<std::uint64_t>(em);
  }
}

// Sum of r independent geometric(p) draws, each by inversion.
inline std::uint64_t sample_negative_binomial_sum(std::uint64_t r, double p,
                                                  SplitMix64& rng) {
  std::uint64_t total = 0;
  for (std::uint64_t i = 0; i < r; ++i) total += sample_geometric(p, rng);
  return total;
}

// Same distribution through the exact gamma-Poisson mixture:
// NB(r, p) = Poisson(Lambda), Lambda ~ Gamma(r, scale q/p).  O(1) per draw,
// which is what makes large-population simulation tractable.
inline std::uint64_t sample_negative_binomial_mixture(std::uint64_t r, double p,
                                                      SplitMix64& rng) {
  const double lambda =
      sample_gamma(static_cast<double>(r), rng) * ((1.0 - p) / p);
  return sample_poisson(lambda, rng);
}

}  // namespace bpve
