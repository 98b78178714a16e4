#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include <boost/math/special_functions/gamma.hpp>

namespace bpve {

inline double exponential_cdf(double t) {
  return t <= 0.0 ? 0.0 : -std::expm1(-t);
}

// Kolmogorov-Smirnov statistic of a sample against a continuous CDF.
template <typename Cdf>
double ks_statistic(std::vector<double> samples, Cdf&& cdf) {
  if (samples.empty())
    throw std::invalid_argument("ks_statistic requires a nonempty sample");
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double d = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double f = cdf(samples[i]);
    d = std::max(d, f - static_cast<double>(i) / n);
    d = std::max(d, static_cast<double>(i + 1) / n - f);
  }
  return d;
}

inline double chi_square_pvalue(double statistic, double degrees_of_freedom) {
  return boost::math::gamma_q(degrees_of_freedom / 2.0, statistic / 2.0);
}

struct ChiSquareResult {
  double statistic = 0.0;
  double degrees_of_freedom = 0.0;
  double p_value = 1.0;
  std::size_t bins = 0;
};

// Pearson chi-square with greedy pooling: consecutive cells merge until each
// pooled cell has expected count >= min_expected; a trailing remainder folds
// into the last cell.  Cell order is the caller's.
inline ChiSquareResult pooled_chi_square(const std::vector<double>& expected,
                                         const std::vector<std::uint64_t>& observed,
                                         double min_expected = 5.0) {
  if (expected.size() != observed.size() || expected.empty())
    throw std::invalid_argument("pooled_chi_square: mismatched or empty cells");
  std::vector<double> exp_bins;
  std::vector<double> obs_bins;
  double e = 0.0, o = 0.0;
  for (std::size_t i = 0; i < expected.size(); ++i) {
    e += expected[i];
    o += static_cast<double>(observed[i]);
    if (e >= min_expected) {
      exp_bins.push_back(e);
      obs_bins.push_back(o);
      e = o = 0.0;
    }
  }
  if (e > 0.0 || o > 0.0) {
    if (exp_bins.empty()) {
      exp_bins.push_back(e);
      obs_bins.push_back(o);
    } else {
      exp_bins.back() += e;
      obs_bins.back() += o;
    }
  }
  ChiSquareResult r;
  r.bins = exp_bins.size();
  if (r.bins < 2)
    throw std::invalid_argument("pooled_chi_square: fewer than two pooled bins");
  for (std::size_t i = 0; i < exp_bins.size(); ++i) {
    const double diff = obs_bins[i] - exp_bins[i];
    r.statistic += diff * diff / exp_bins[i];
  }
  r.degrees_of_freedom = static_cast<double>(r.bins - 1);
  r.p_value = chi_square_pvalue(r.statistic, r.degrees_of_freedom);
  return r;
}

inline double sample_mean(const std::vector<double>& xs) {
  double s = 0.0;
  for (double x : xs) s += x;
  return xs.empty() ? 0.0 : s / static_cast<double>(xs.size());
}

inline double sample_variance(const std::vector<double>& xs) {
  if (xs.size() < 2) return 0.0;
  const double m = sample_mean(xs);
  double s = 0.0;
  for (double x : xs) s += (x - m) * (x - m);
  return s / static_cast<double>(xs.size() - 1);
}

}  // namespace bpve
