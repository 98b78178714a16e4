#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <mutex>
#include <ostream>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "bpve/dual_real.hpp"
#include "bpve/environment.hpp"

namespace bpve {

// Prefix and window sums of offspring-mean products:
//
//   D(k, n) = 1 + sum_{j=k}^{n} m_j * m_{j+1} * ... * m_n,     D(n) = D(1, n)
//
// computed by the forward recursion D(k, j) = 1 + m_j * D(k, j-1) with the
// empty-window convention D(k, k-1) = 1.  1/D(n) is the success parameter of
// the geometric law of the population at time n, so everything downstream
// (level probabilities, conditional kernels, moments) reads these values.
//
// Prefix values and per-index means are cached and grown on demand; growth is
// not thread-safe, so call reserve(n) up to the largest horizon before
// sharing a table across threads.  Window values are memoised under a lock.
class DTable {
 public:
  explicit DTable(EnvironmentSpec env) : env_(std::move(env)) {
    d_.push_back(DualReal::one());  // D(0) = 1 (empty sum)
    means_.push_back(1.0);
    log_means_.push_back(0.0);
    prefix_log_means_.push_back(0.0);
  }

  DTable(const DTable&) = delete;
  DTable& operator=(const DTable&) = delete;

  const EnvironmentSpec& env() const { return env_; }

  void reserve(std::uint64_t n) const { ensure(n); }

  // D(n) for n >= 0.
  DualReal d(std::uint64_t n) const {
    ensure(n);
    return d_[n];
  }

  double log_d(std::uint64_t n) const { return d(n).log_value; }

  double mean(std::uint64_t k) const {
    ensure(k);
    return means_[k];
  }

  double log_mean(std::uint64_t k) const {
    ensure(k);
    return log_means_[k];
  }

  // sum_{j<=n} log m_j; differences give log of windowed mean products.
  double prefix_log_mean(std::uint64_t n) const {
    ensure(n);
    return prefix_log_means_[n];
  }

  // D(k, n) for 1 <= k <= n + 1; k = n + 1 is the empty window (= 1).
  DualReal d_window(std::uint64_t k, std::uint64_t n) const {
    if (k < 1 || k > n + 1)
      throw std::invalid_argument("d_window requires 1 <= k <= n+1");
    if (k == 1) return d(n);
    if (k == n + 1) return DualReal::one();
    {
      std::lock_guard<std::mutex> lock(window_mutex_);
      auto it = window_cache_.find(window_key(k, n));
      if (it != window_cache_.end()) return it->second;
    }
    ensure(n);
    DualReal w = DualReal::one();
    for (std::uint64_t j = k; j <= n; ++j)
      w = dual_advance(w, means_[j], log_means_[j]);
    {
      std::lock_guard<std::mutex> lock(window_mutex_);
      window_cache_.emplace(window_key(k, n), w);
    }
    return w;
  }

  // P(Z_n = a) = (1 - 1/D(n))^a / D(n).  Evaluated through log D(n) so that
  // large D (including saturated linear slots) and large a stay accurate.
  double level_probability(std::uint64_t n, std::uint64_t a) const {
    const DualReal dn = d(n);
    const double inv = dual_reciprocal(dn);
    if (a == 0) return inv;
    const double log_one_minus_inv =
        dn.overflowed ? std::log1p(-std::exp(-dn.log_value)) : std::log1p(-inv);
    return std::exp(static_cast<double>(a) * log_one_minus_inv - dn.log_value);
  }

  // Rows "n,D,logD" for n = 1..n_max; a saturated linear slot prints "inf".
  void write_csv(std::ostream& out, std::uint64_t n_max) const {
    ensure(n_max);
    out << "n,D,logD\n";
    char buf[64];
    for (std::uint64_t n = 1; n <= n_max; ++n) {
      out << n << ',';
      if (d_[n].overflowed) {
        out << "inf";
      } else {
        std::snprintf(buf, sizeof buf, "%.17g", d_[n].value);
        out << buf;
      }
      std::snprintf(buf, sizeof buf, "%.17g", d_[n].log_value);
      out << ',' << buf << '\n';
    }
  }

 private:
  static std::uint64_t window_key(std::uint64_t k, std::uint64_t n) {
    return (k << 32) | n;
  }

  void ensure(std::uint64_t n) const {
    while (d_.size() <= n) {
      const std::uint64_t k = d_.size();
      const double m = env_.mean_at(k);
      const double lm = env_.log_mean_at(k);
      means_.push_back(m);
      log_means_.push_back(lm);
      prefix_log_means_.push_back(prefix_log_means_.back() + lm);
      d_.push_back(dual_advance(d_.back(), m, lm));
    }
  }

  EnvironmentSpec env_;
  mutable std::vector<DualReal> d_;
  mutable std::vector<double> means_;
  mutable std::vector<double> log_means_;
  mutable std::vector<double> prefix_log_means_;
  mutable std::unordered_map<std::uint64_t, DualReal> window_cache_;
  mutable std::mutex window_mutex_;
};

}  // namespace bpve
