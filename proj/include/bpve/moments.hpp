#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "bpve/conditional.hpp"
#include "bpve/dtable.hpp"
#include "bpve/math_detail.hpp"

namespace bpve {

// Exact moments of the visit count |C ∩ [1,n]| of level a, C = {t : Z_t = a}.
//
// Writing the k-th power of the indicator sum through ordered time tuples,
//
//   E|C ∩ [1,n]|^k = sum_{m=1}^{k} binom(k-1, m-1) m! G(m, n),
//   G(m, n) = sum_{1 <= j_1 < ... < j_m <= n} P(Z_{j_1} = a, ..., Z_{j_m} = a),
//
// (the binomial counts the compositions of k into m positive parts), and the
// joint probabilities factorise over the Markov chain, so G accumulates by
// the forward recursion
//
//   h_1(j)     = P(Z_j = a)
//   h_{i+1}(j) = sum_{j' < j} h_i(j') P(Z_j = a | Z_{j'} = a)
//   G(m, n)    = sum_{j <= n} h_m(j).
//
// The pair sweep keeps the two conditional windows D(j'+1, j), D(j'+2, j) as
// running dual-representation recursions, so each of the O(n^2) conditional
// values costs O(a) with no table storage.
inline std::vector<double> visit_count_moments(const DTable& table,
                                               std::uint64_t n, std::uint64_t a,
                                               int k_max) {
  if (n < 1) throw std::invalid_argument("visit_count_moments requires n >= 1");
  if (k_max < 1 || k_max > 4)
    throw std::invalid_argument("visit_count_moments supports moment order 1..4");
  if (k_max >= 2 && n > 10000)
    throw std::invalid_argument(
        "visit_count_moments: order >= 2 limited to n <= 10000 (O(n^2) sweep)");

  table.reserve(n);
  const std::size_t levels = static_cast<std::size_t>(k_max);
  std::vector<std::vector<double>> h(levels, std::vector<double>(n + 1, 0.0));
  for (std::uint64_t j = 1; j <= n; ++j)
    h[0][j] = table.level_probability(j, a);

  if (levels > 1) {
    for (std::uint64_t jp = 1; jp + 1 <= n; ++jp) {
      detail::ConditionalWindows w;
      w.alpha0 = DualReal::one();
      w.beta0 = DualReal::one();
      const double base_prefix = table.prefix_log_mean(jp);
      for (std::uint64_t j = jp + 1; j <= n; ++j) {
        w.alpha0 = dual_advance(w.alpha0, table.mean(j), table.log_mean(j));
        if (j > jp + 1)
          w.beta0 = dual_advance(w.beta0, table.mean(j), table.log_mean(j));
        w.log_mean_product = table.prefix_log_mean(j) - base_prefix;
        const double c = detail::return_probability(w, a);
        for (std::size_t i = 0; i + 1 < levels; ++i)
          h[i + 1][j] += h[i][jp] * c;
      }
    }
  }

  std::vector<double> g(levels + 1, 0.0);
  for (std::size_t m = 1; m <= levels; ++m)
    for (std::uint64_t j = 1; j <= n; ++j) g[m] += h[m - 1][j];

  std::vector<double> moments(levels);
  double m_factorial = 1.0;
  for (int k = 1; k <= k_max; ++k) {
    double sum = 0.0;
    m_factorial = 1.0;
    for (int m = 1; m <= k; ++m) {
      m_factorial *= m;
      sum += detail::binomial(k - 1, m - 1) * m_factorial * g[m];
    }
    moments[k - 1] = sum;
  }
  return moments;
}

inline double visit_count_moment(const DTable& table, std::uint64_t n,
                                 std::uint64_t a, int k) {
  return visit_count_moments(table, n, a, k).back();
}

// (1/log^k n) * sum over l <= j_1 < ... < j_k <= n with gaps > l of
// 1 / (j_1 (j_2-j_1) ... (j_k-j_{k-1})); tends to 1 as n grows, for any
// fixed minimum gap l.
//
// k = 1, 2 reduce to harmonic prefix sums and run in O(n); k = 3 keeps one
// quadratic pass and is capped at n <= 30000.
inline double gap_reciprocal_sum(std::uint64_t n, int k, std::uint64_t l) {
  if (k < 1 || k > 3)
    throw std::invalid_argument("gap_reciprocal_sum supports k = 1..3");
  if (l < 1) throw std::invalid_argument("gap_reciprocal_sum requires l >= 1");
  if (n < 2 || n < l * static_cast<std::uint64_t>(k + 1))
    throw std::invalid_argument("gap_reciprocal_sum requires n >= max(2, l*(k+1))");
  if (k == 3 && n > 30000)
    throw std::invalid_argument("gap_reciprocal_sum: k = 3 limited to n <= 30000");

  const double log_n = std::log(static_cast<double>(n));

  if (k == 1) {
    double s = 0.0;
    for (std::uint64_t j = l; j <= n; ++j) s += 1.0 / static_cast<double>(j);
    return s / log_n;
  }

  // harmonic prefix H[i] = sum_{d<=i} 1/d
  std::vector<double> H(n + 1, 0.0);
  for (std::uint64_t i = 1; i <= n; ++i)
    H[i] = H[i - 1] + 1.0 / static_cast<double>(i);

  if (k == 2) {
    double s = 0.0;
    for (std::uint64_t j1 = l; j1 + l + 1 <= n; ++j1)
      s += (H[n - j1] - H[l]) / static_cast<double>(j1);
    return s / (log_n * log_n);
  }

  // k == 3: T2[j2] = sum over j1 of 1/(j1 (j2-j1)); last gap folds into
  // a harmonic difference.
  double s = 0.0;
  for (std::uint64_t j2 = 2 * l + 1; j2 + l + 1 <= n; ++j2) {
    double t2 = 0.0;
    for (std::uint64_t j1 = l; j1 + l + 1 <= j2; ++j1)
      t2 += 1.0 / (static_cast<double>(j1) * static_cast<double>(j2 - j1));
    s += t2 * (H[n - j2] - H[l]);
  }
  return s / (log_n * log_n * log_n);
}

}  // namespace bpve
