#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>

namespace bpve::detail {

// log(n!) without libm's lgamma (whose signgam side channel is not
// thread-safe on common libcs).  Exact-summation table for small n,
// Stirling series beyond; worst-case relative error ~1e-15.
inline double log_factorial(std::uint64_t n) {
  static const std::array<double, 1024> table = [] {
    std::array<double, 1024> t{};
    t[0] = 0.0;
    for (std::size_t i = 1; i < t.size(); ++i)
      t[i] = t[i - 1] + std::log(static_cast<double>(i));
    return t;
  }();
  if (n < table.size()) return table[n];
  const double x = static_cast<double>(n);
  const double inv = 1.0 / x;
  const double inv2 = inv * inv;
  return (x + 0.5) * std::log(x) - x + 0.91893853320467274178  // 0.5*log(2*pi)
         + inv * (1.0 / 12.0 - inv2 * (1.0 / 360.0 - inv2 / 1260.0));
}

// log Gamma(x) for real x >= 1: shift x above 12 by the recurrence, then a
// four-term Stirling series (absolute error < 2e-13).
inline double log_gamma(double x) {
  double shift = 0.0;
  while (x < 12.0) {
    shift -= std::log(x);
    x += 1.0;
  }
  const double inv = 1.0 / x;
  const double inv2 = inv * inv;
  return shift + (x - 0.5) * std::log(x) - x + 0.91893853320467274178 +
         inv * (1.0 / 12.0 -
                inv2 * (1.0 / 360.0 - inv2 * (1.0 / 1260.0 - inv2 / 1680.0)));
}

inline double log_binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return -std::numeric_limits<double>::infinity();
  return log_factorial(n) - log_factorial(k) - log_factorial(n - k);
}

// binom(n, k) as a double; switches to the log form once the product
// recurrence would overflow.
inline double binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0.0;
  if (k > n - k) k = n - k;
  if (n > 1000) return std::exp(log_binomial(n, k));
  double b = 1.0;
  for (std::uint64_t i = 1; i <= k; ++i)
    b = b * static_cast<double>(n - k + i) / static_cast<double>(i);
  return b;
}

}  // namespace bpve::detail
