#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "bpve/dtable.hpp"
#include "bpve/dual_real.hpp"
#include "bpve/math_detail.hpp"

namespace bpve {

// Conditional generating function of the population n steps after time k,
// given level a at time k:
//
//   G(s) = B(s)^a * A(s),
//   A(s) = 1 / (alpha0 - alpha1 s),            alpha0 = D(k+1, k+n)
//   B(s) = (beta0 - beta1 s) / (alpha0 - alpha1 s),  beta0 = D(k+2, k+n)
//
// with alpha1 = alpha0 - 1, beta1 = beta0 - 1.  (The minus signs follow from
// substituting 1 - s into the windowed mean-product sums; a plus sign here
// would not reduce to the plain geometric law at a = 0.)
//
// Useful identities: alpha0 - beta0 = m_{k+1} * ... * m_{k+n}, and B admits
// the nonnegative power series  B(s) = b0 + b1 * s / (1 - rho*s)  with
// b0 = beta0/alpha0, b1 = (alpha0-beta0)/alpha0^2, rho = alpha1/alpha0.

namespace detail {

struct ConditionalWindows {
  DualReal alpha0;  // D(k+1, k+n)
  DualReal beta0;   // D(k+2, k+n)
  double log_mean_product;  // log(m_{k+1} * ... * m_{k+n}) = log(alpha0-beta0)
};

// [s^a] B(s)^a A(s), the probability of returning to level a after the
// window.  Expanding B^a by the binomial theorem around b0 and collecting
// the geometric factors gives the closed form
//
//   P = (1/alpha0) * sum_{i=0..a} binom(a,i)^2 * x^(a-i) * y^i,
//   x = (beta0/alpha0) * (alpha1/alpha0),   y = (alpha0-beta0) / alpha0^2,
//
// every term of which is nonnegative, so the evaluation is cancellation-free
// for any window.  Falls back to log space once alpha0 saturates.
inline double return_probability(const ConditionalWindows& w, std::uint64_t a) {
  const DualReal& al = w.alpha0;
  if (!al.overflowed) {
    const double inv_alpha = 1.0 / al.value;
    if (a == 0) return inv_alpha;
    const double x = (w.beta0.value * inv_alpha) * ((al.value - 1.0) * inv_alpha);
    const double y = (std::exp(w.log_mean_product) * inv_alpha) * inv_alpha;
    double sum = 0.0;
    for (std::uint64_t i = 0; i <= a; ++i) {
      const double c = detail::binomial(a, i);
      sum += c * c * std::pow(x, static_cast<double>(a - i)) *
             std::pow(y, static_cast<double>(i));
    }
    return sum * inv_alpha;
  }
  const double log_alpha = al.log_value;
  if (a == 0) return std::exp(-log_alpha);
  const double log_x =
      w.beta0.log_value + dual_log_minus_one(al) - 2.0 * log_alpha;
  const double log_y = w.log_mean_product - 2.0 * log_alpha;
  double sum = 0.0;
  for (std::uint64_t i = 0; i <= a; ++i) {
    sum += std::exp(2.0 * detail::log_binomial(a, i) +
                    static_cast<double>(a - i) * log_x +
                    static_cast<double>(i) * log_y - log_alpha);
  }
  return sum;
}

}  // namespace detail

// P(Z_{k+n} = a | Z_k = a) for n >= 1.
inline double level_return_probability(const DTable& table, std::uint64_t k,
                                       std::uint64_t n, std::uint64_t a) {
  if (n < 1) throw std::invalid_argument("level_return_probability requires n >= 1");
  detail::ConditionalWindows w;
  w.alpha0 = table.d_window(k + 1, k + n);
  w.beta0 = table.d_window(k + 2, k + n);
  w.log_mean_product = table.prefix_log_mean(k + n) - table.prefix_log_mean(k);
  return detail::return_probability(w, a);
}

// Truncated conditional law P(Z_{k+n} = j | Z_k = a), j = 0..j_max.
struct ConditionalKernel {
  std::uint64_t start_time = 0;  // k
  std::uint64_t horizon = 1;     // n
  std::uint64_t level = 0;       // a
  std::vector<double> coefficients;

  double total_mass() const {
    double s = 0.0;
    for (double c : coefficients) s += c;
    return s;
  }
};

inline std::uint64_t default_truncation(std::uint64_t a) {
  return a + 50 * std::max<std::uint64_t>(1, a);
}

// Power-series expansion of B(s)^a A(s) at degree <= j_max: the geometric
// series of A, then a successive convolutions with the (nonnegative) series
// of B.  All coefficients stay nonnegative, so no cancellation occurs.
inline ConditionalKernel conditional_distribution(const DTable& table,
                                                  std::uint64_t k,
                                                  std::uint64_t n,
                                                  std::uint64_t a,
                                                  std::uint64_t j_max) {
  if (n < 1) throw std::invalid_argument("conditional_distribution requires n >= 1");
  const DualReal alpha0 = table.d_window(k + 1, k + n);
  const DualReal beta0 = table.d_window(k + 2, k + n);
  const double log_prod =
      table.prefix_log_mean(k + n) - table.prefix_log_mean(k);

  double rho, inv_alpha, b0, b1;
  if (!alpha0.overflowed) {
    inv_alpha = 1.0 / alpha0.value;
    rho = (alpha0.value - 1.0) * inv_alpha;
    b0 = beta0.value * inv_alpha;
    b1 = (std::exp(log_prod) * inv_alpha) * inv_alpha;
  } else {
    inv_alpha = std::exp(-alpha0.log_value);
    rho = std::exp(dual_log_minus_one(alpha0) - alpha0.log_value);
    b0 = std::exp(beta0.log_value - alpha0.log_value);
    b1 = std::exp(log_prod - 2.0 * alpha0.log_value);
  }

  const std::size_t len = static_cast<std::size_t>(j_max) + 1;
  std::vector<double> series(len);
  series[0] = inv_alpha;
  for (std::size_t l = 1; l < len; ++l) series[l] = series[l - 1] * rho;

  if (a > 0) {
    std::vector<double> b(len);
    b[0] = b0;
    if (len > 1) b[1] = b1;
    for (std::size_t l = 2; l < len; ++l) b[l] = b[l - 1] * rho;

    std::vector<double> next(len);
    for (std::uint64_t rep = 0; rep < a; ++rep) {
      std::fill(next.begin(), next.end(), 0.0);
      for (std::size_t i = 0; i < len; ++i) {
        if (series[i] == 0.0) continue;
        const std::size_t stop = len - i;
        for (std::size_t j = 0; j < stop; ++j)
          next[i + j] += series[i] * b[j];
      }
      series.swap(next);
    }
  }

  ConditionalKernel kernel;
  kernel.start_time = k;
  kernel.horizon = n;
  kernel.level = a;
  kernel.coefficients = std::move(series);
  return kernel;
}

// Closed form of P(Z_{n+k} = a | Z_k = a) in the critical homogeneous case
// p = 1/2, where D(k, n) = n - k + 2:
//
//   sum_{j=0}^{a} (a+j)!/(j! j! (a-j)!) (n/(n+1))^{2j} ((1-n)/(n+1))^{a-j} / (n+1)
//
// The (n/(n+1))^j factor enters squared; both derivative factors of the
// generating function contribute one copy.  The sum alternates for n > 1, so
// it is accumulated in extended precision to keep ~1e-13 relative accuracy
// up to a ~ 10.
inline double homogeneous_conditional(std::uint64_t n, std::uint64_t a) {
  if (n < 1) throw std::invalid_argument("homogeneous_conditional requires n >= 1");
  const long double nn = static_cast<long double>(n);
  const long double r = nn / (nn + 1.0L);                 // n/(n+1)
  const long double s_mag = (nn - 1.0L) / (nn + 1.0L);    // |1-n|/(n+1)
  long double coeff = 1.0L;  // (a+j)!/(j! j! (a-j)!) at j = 0
  long double sum = 0.0L;
  for (std::uint64_t j = 0; j <= a; ++j) {
    if (j > 0) {
      coeff *= static_cast<long double>(a + j) *
               static_cast<long double>(a - j + 1) /
               (static_cast<long double>(j) * static_cast<long double>(j));
    }
    const std::uint64_t e = a - j;
    long double term = coeff * std::pow(r, 2.0L * static_cast<long double>(j));
    if (e > 0) {
      term *= std::pow(s_mag, static_cast<long double>(e));
      if (e % 2 == 1) term = -term;  // (1-n) <= 0 for n >= 1
    }
    sum += term;
  }
  return static_cast<double>(sum / (nn + 1.0L));
}

// P(Z_{t1} = a, ..., Z_{tm} = a) by the Markov factorisation: the marginal at
// the first time and a level-return factor across each gap.
inline double joint_level_probability(const DTable& table,
                                      std::span<const std::uint64_t> times,
                                      std::uint64_t a) {
  if (times.empty())
    throw std::invalid_argument("joint_level_probability requires nonempty times");
  if (times[0] < 1)
    throw std::invalid_argument("joint_level_probability requires times >= 1");
  for (std::size_t i = 1; i < times.size(); ++i)
    if (times[i] <= times[i - 1])
      throw std::invalid_argument("joint_level_probability requires strictly increasing times");
  double p = table.level_probability(times[0], a);
  for (std::size_t i = 1; i < times.size(); ++i)
    p *= level_return_probability(table, times[i - 1], times[i] - times[i - 1], a);
  return p;
}

// Normalised dependence of {Z_k = a} and {Z_{k+n} = a}:
//
//   D(k+1,k+n)/D(k+n) * P(Z_{k+n}=a, Z_k=a) / (P(Z_{k+n}=a) P(Z_k=a))
//
// which tends to 1 when the environment means tend to 1 and k, n grow.
// Identically 1 in the critical homogeneous case at a = 0.
inline double dependence_ratio(const DTable& table, std::uint64_t k,
                               std::uint64_t n, std::uint64_t a) {
  if (k < 1 || n < 1) throw std::invalid_argument("dependence_ratio requires k, n >= 1");
  const double window_factor =
      dual_ratio(table.d_window(k + 1, k + n), table.d(k + n));
  const double conditional = level_return_probability(table, k, n, a);
  const double marginal = table.level_probability(k + n, a);
  return window_factor * conditional / marginal;
}

// D(k, k+n) / D(k+1, k+n), the one-step window contraction; > 1 always and
// close to 1 for late windows of a near-critical environment.
inline double window_ratio(const DTable& table, std::uint64_t k, std::uint64_t n) {
  if (k < 1 || n < 1) throw std::invalid_argument("window_ratio requires k, n >= 1");
  return dual_ratio(table.d_window(k, k + n), table.d_window(k + 1, k + n));
}

}  // namespace bpve
