#pragma once

#include <cmath>
#include <limits>

namespace bpve {

// Positive quantity carried both as a plain double and as its natural log.
//
// The prefix values D(n) = 1 + sum of offspring-mean products outgrow double
// range on supercritical stretches (m_k bounded away from 1), so every
// recursion below keeps the log slot alive past the point where the linear
// slot saturates. The linear slot is exact while it lasts; the log slot is
// maintained by  log(1 + m*d) = log m + log d + log1p(exp(-(log m + log d))),
// which stays accurate for arbitrarily large values.
struct DualReal {
  double value = 1.0;      // +infinity once overflowed
  double log_value = 0.0;  // always valid
  bool overflowed = false;

  static constexpr double overflow_threshold = 1e300;

  static DualReal one() { return DualReal{}; }

  static DualReal from_value(double v) {
    DualReal d;
    d.value = v;
    d.log_value = std::log(v);
    return d;
  }
};

// next = 1 + mean * d, where mean >= 1 (so next > d).
inline DualReal dual_advance(const DualReal& d, double mean, double log_mean) {
  DualReal out;
  const double t = log_mean + d.log_value;
  out.log_value = t + std::log1p(std::exp(-t));
  if (!d.overflowed) {
    const double v = 1.0 + mean * d.value;
    if (v <= DualReal::overflow_threshold) {
      out.value = v;
      return out;
    }
  }
  out.value = std::numeric_limits<double>::infinity();
  out.overflowed = true;
  return out;
}

// a / b; falls back to exp(log a - log b) when either side saturated.
inline double dual_ratio(const DualReal& a, const DualReal& b) {
  if (!a.overflowed && !b.overflowed) return a.value / b.value;
  return std::exp(a.log_value - b.log_value);
}

inline double dual_reciprocal(const DualReal& d) {
  if (!d.overflowed) return 1.0 / d.value;
  return std::exp(-d.log_value);
}

// log(d - 1); requires d > 1.
inline double dual_log_minus_one(const DualReal& d) {
  if (!d.overflowed) return std::log(d.value - 1.0);
  return d.log_value + std::log1p(-std::exp(-d.log_value));
}

}  // namespace bpve
