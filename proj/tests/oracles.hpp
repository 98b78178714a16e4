#pragma once

// Test-only oracles.  Each one reaches the quantity under test by a route
// that never touches the library's prefix-table recursions: direct pmf
// evolution of the chain, characteristic-function products on the unit
// circle, exact rational arithmetic on the conditional generating function,
// and plain enumeration.

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "bpve/environment.hpp"

namespace oracles {

using Rational = boost::multiprecision::cpp_rational;

inline Rational rational_pow(Rational base, unsigned e) {
  Rational r = 1;
  while (e) {
    if (e & 1) r *= base;
    base *= base;
    e >>= 1;
  }
  return r;
}

// --- forward pmf evolution ---------------------------------------------------
//
// v_t(y) = P(Z_t = y) evolved step by step: the next generation is the total
// offspring of 1 + Z_t parents, each geometric(p).  The mixture
// W = sum_z v(z) g^{*z} is accumulated by Horner, and every convolution with
// the geometric pmf g uses its tail recurrence
//     (g * c)(y) = p c(y) + q (g * c)(y - 1),
// so a step costs O(support^2).  Supports are sized from the running mean so
// that the mass dropped per step stays below tail_eps.
inline std::vector<double> evolve_pmf(const bpve::EnvironmentSpec& env,
                                      std::uint64_t n,
                                      double tail_eps = 1e-12) {
  std::vector<double> v{1.0};  // Z_0 = 0
  for (std::uint64_t t = 1; t <= n; ++t) {
    const double p = env.p_at(t);
    const double q = 1.0 - p;
    const double m = q / p;

    double mean = 0.0;
    for (std::size_t y = 0; y < v.size(); ++y)
      mean += static_cast<double>(y) * v[y];
    const double next_mean = m * (1.0 + mean);
    const double span = -std::log(tail_eps) - std::log(p);  // tail units of the law
    std::size_t len =
        static_cast<std::size_t>((next_mean + 1.0) * span) + 64;

    auto convolve_geometric = [&](std::vector<double>& c) {
      double carry = 0.0;
      for (std::size_t y = 0; y < c.size(); ++y) {
        carry = p * c[y] + q * carry;
        c[y] = carry;
      }
    };

    std::vector<double> w(len, 0.0);
    for (std::size_t z = v.size(); z-- > 0;) {
      convolve_geometric(w);
      w[0] += v[z];
    }
    convolve_geometric(w);  // the immigrant's own offspring

    // trim the stored support at cumulative mass 1 - tail_eps
    double cum = 0.0;
    std::size_t keep = w.size();
    for (std::size_t y = 0; y < w.size(); ++y) {
      cum += w[y];
      if (cum >= 1.0 - tail_eps) {
        keep = y + 1;
        break;
      }
    }
    w.resize(keep);
    v = std::move(w);
  }
  return v;
}

// --- characteristic-function route ------------------------------------------
//
// F_t(s) = E s^{Z_t} satisfies F_t(s) = f_t(s) F_{t-1}(f_t(s)), which unrolls
// into the product of the composed maps f_k(f_{k+1}(...f_n(s))).  Those are
// evaluated numerically on the unit circle by the backward scalar sweep
// x <- f_k(x) (one Moebius step per k), and the pmf is recovered with an
// inverse FFT.  Aliasing is the folded tail mass: grid_size must comfortably
// exceed the support carrying 1 - 1e-13 of the law.
namespace detail {

inline void inverse_fft(std::vector<std::complex<double>>& a) {
  const std::size_t n = a.size();
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  for (std::size_t len = 2; len <= n; len <<= 1) {
    // negative twiddle: recovers p_a = (1/M) sum_j F(w^j) w^{-ja}
    const double ang = -2.0 * std::numbers::pi / static_cast<double>(len);
    const std::complex<double> wl(std::cos(ang), std::sin(ang));
    for (std::size_t i = 0; i < n; i += len) {
      std::complex<double> w(1.0, 0.0);
      for (std::size_t j = 0; j < len / 2; ++j) {
        const auto u = a[i + j];
        const auto t = a[i + j + len / 2] * w;
        a[i + j] = u + t;
        a[i + j + len / 2] = u - t;
        w *= wl;
      }
    }
  }
  for (auto& x : a) x /= static_cast<double>(n);
}

}  // namespace detail

inline std::vector<double> pmf_by_characteristic_function(
    const bpve::EnvironmentSpec& env, std::uint64_t n, std::size_t grid_size) {
  std::size_t m = 1;
  while (m < grid_size) m <<= 1;
  std::vector<std::complex<double>> values(m);
  for (std::size_t j = 0; j < m; ++j) {
    const double ang = 2.0 * std::numbers::pi * static_cast<double>(j) /
                       static_cast<double>(m);
    std::complex<double> x(std::cos(ang), std::sin(ang));
    std::complex<double> product(1.0, 0.0);
    for (std::uint64_t k = n; k >= 1; --k) {
      const double p = env.p_at(k);
      x = p / (1.0 - (1.0 - p) * x);
      product *= x;
    }
    values[j] = product;
  }
  detail::inverse_fft(values);
  std::vector<double> pmf(m);
  for (std::size_t i = 0; i < m; ++i) pmf[i] = values[i].real();
  return pmf;
}

// --- exact rational conditional law -------------------------------------------
//
// P(Z_{k+n} = a | Z_k = a) from the derivative form of the conditional
// generating function B(s)^a A(s), evaluated in exact rational arithmetic.
// `means` holds m_{k+1} .. m_{k+n} as rationals; the window sums and the
// derivative coefficients
//     A^{(i)}(0)/i!   = alpha1^i / alpha0^{i+1}
//     B^{(l)}(0)/l!   = (alpha0 - beta0) alpha1^{l-1} / alpha0^{l+1}
// are assembled exactly and combined by the Leibniz rule.
inline Rational conditional_by_derivatives(const std::vector<Rational>& means,
                                           std::uint64_t a) {
  const std::size_t n = means.size();
  Rational alpha0 = 1, beta0 = 1;
  for (std::size_t j = 0; j < n; ++j) {
    Rational prod = 1;
    for (std::size_t i = j; i < n; ++i) prod *= means[i];
    alpha0 += prod;
    if (j >= 1) beta0 += prod;  // beta's window starts one step later
  }
  const Rational alpha1 = alpha0 - 1;

  // series of A and of B up to degree a
  std::vector<Rational> A(a + 1), B(a + 1);
  Rational apow = 1;
  for (std::size_t i = 0; i <= a; ++i) {
    A[i] = apow / rational_pow(alpha0, static_cast<unsigned>(i + 1));
    apow *= alpha1;
  }
  B[0] = beta0 / alpha0;
  for (std::size_t l = 1; l <= a; ++l)
    B[l] = (alpha0 - beta0) * rational_pow(alpha1, static_cast<unsigned>(l - 1)) /
           rational_pow(alpha0, static_cast<unsigned>(l + 1));

  // g = B^a by exact truncated convolution
  std::vector<Rational> g(a + 1);
  g[0] = 1;
  for (std::uint64_t rep = 0; rep < a; ++rep) {
    std::vector<Rational> next(a + 1);
    for (std::size_t i = 0; i <= a; ++i)
      for (std::size_t j = 0; i + j <= a; ++j) next[i + j] += g[i] * B[j];
    g = std::move(next);
  }

  Rational sum = 0;
  for (std::size_t j = 0; j <= a; ++j) sum += A[a - j] * g[j];
  return sum;
}

// Exact rational marginal P(Z_n = a) from the population-mean structure:
// with T = 1 + sum of suffix mean-products, P = (1 - 1/T)^a / T.
inline Rational marginal_by_rationals(const std::vector<Rational>& means,
                                      std::uint64_t a) {
  const std::size_t n = means.size();
  Rational t = 1;
  for (std::size_t j = 0; j < n; ++j) {
    Rational pr = 1;
    for (std::size_t i = j; i < n; ++i) pr *= means[i];
    t += pr;
  }
  return rational_pow(t - 1, static_cast<unsigned>(a)) /
         rational_pow(t, static_cast<unsigned>(a + 1));
}

inline std::vector<Rational> rational_means(const bpve::EnvironmentSpec& env,
                                            std::uint64_t from,
                                            std::uint64_t to) {
  // exact means for environments whose p is a dyadic/simple rational; the
  // callers use p = 1/2 or p = 3/8-style values representable in double
  std::vector<Rational> ms;
  for (std::uint64_t k = from; k <= to; ++k) {
    const Rational p(env.p_at(k));  // exact value of the stored double
    ms.push_back((Rational(1) - p) / p);
  }
  return ms;
}

// --- enumeration oracles -------------------------------------------------------

inline std::uint64_t count_compositions(std::uint64_t a, std::uint64_t j) {
  if (j == 1) return 1;
  std::uint64_t total = 0;
  for (std::uint64_t first = 1; first + (j - 1) <= a; ++first)
    total += count_compositions(a - first, j - 1);
  return total;
}

// E|C ∩ [1,n]|^k by explicit tuple enumeration with exact rational joint
// probabilities (Markov products of the rational marginal and conditionals).
inline Rational moment_by_enumeration(const bpve::EnvironmentSpec& env,
                                      std::uint64_t n, std::uint64_t a,
                                      int k) {
  // G(m) = sum over 1 <= j_1 < ... < j_m <= n of the joint probability
  std::vector<Rational> g(static_cast<std::size_t>(k) + 1);
  std::vector<std::uint64_t> tuple;
  auto joint = [&](const std::vector<std::uint64_t>& times) {
    Rational p = marginal_by_rationals(rational_means(env, 1, times[0]), a);
    for (std::size_t i = 1; i < times.size(); ++i)
      p *= conditional_by_derivatives(
          rational_means(env, times[i - 1] + 1, times[i]), a);
    return p;
  };
  auto recurse = [&](auto&& self, std::uint64_t next, int depth) -> void {
    if (depth > 0) g[depth] += joint(tuple);
    if (depth == k) return;
    for (std::uint64_t j = next; j <= n; ++j) {
      tuple.push_back(j);
      self(self, j + 1, depth + 1);
      tuple.pop_back();
    }
  };
  recurse(recurse, 1, 0);

  Rational moment = 0;
  Rational m_factorial = 1;
  for (int m = 1; m <= k; ++m) {
    m_factorial *= m;
    // binom(k-1, m-1)
    Rational c = 1;
    for (int i = 1; i <= m - 1; ++i) c = c * (k - m + i) / i;
    moment += c * m_factorial * g[m];
  }
  return moment;
}

// literal O(k n^2) dynamic program for the gap-reciprocal sums
inline double gap_sum_dp(std::uint64_t n, int k, std::uint64_t l) {
  std::vector<double> h(n + 1, 0.0);
  for (std::uint64_t j = l; j <= n; ++j) h[j] = 1.0 / static_cast<double>(j);
  for (int level = 2; level <= k; ++level) {
    std::vector<double> next(n + 1, 0.0);
    for (std::uint64_t j = 1; j <= n; ++j)
      for (std::uint64_t jp = 1; jp + l < j; ++jp)
        next[j] += h[jp] / static_cast<double>(j - jp);
    h = std::move(next);
  }
  double s = 0.0;
  for (std::uint64_t j = 1; j <= n; ++j) s += h[j];
  return s / std::pow(std::log(static_cast<double>(n)), k);
}

inline double harmonic(std::uint64_t n) {
  double s = 0.0;
  for (std::uint64_t j = 1; j <= n; ++j) s += 1.0 / static_cast<double>(j);
  return s;
}

}  // namespace oracles
