#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace bpve {

enum class EnvironmentKind { homogeneous, poly_critical, explicit_list };

// Success-probability sequence {p_k} of the geometric offspring laws
// f_k(s) = p_k / (1 - q_k s).   Every p_k lies in (0, 1/2], so the offspring
// mean m_k = q_k / p_k is >= 1, with equality exactly when p_k = 1/2.
//
// Three rules are supported:
//   homogeneous       p_k = p for all k
//   poly_critical     p_k = 1/2 for k <= i0, and 1/2 - B/(4k) for k > i0
//   explicit_list     p_k read from a finite list, constant tail afterwards
//
// All validation happens at construction; p_at / mean_at never fail.
// Instances are immutable and safe to share across threads.
class EnvironmentSpec {
 public:
  static EnvironmentSpec homogeneous(double p) {
    require_probability(p, "p");
    EnvironmentSpec env;
    env.kind_ = EnvironmentKind::homogeneous;
    env.p_ = p;
    return env;
  }

  // i0 defaults to ceil(B) + 1, which always satisfies B / (4*i0) < 1/2.
  static EnvironmentSpec poly_critical(double B,
                                       std::optional<std::uint64_t> i0 = {}) {
    if (!(B >= 0.0) || !std::isfinite(B))
      throw std::invalid_argument("environment field B must be a finite nonnegative real");
    EnvironmentSpec env;
    env.kind_ = EnvironmentKind::poly_critical;
    env.growth_ = B;
    env.i0_ = i0 ? *i0 : static_cast<std::uint64_t>(std::ceil(B)) + 1;
    if (env.i0_ < 1)
      throw std::invalid_argument("environment field i0 must be a positive integer");
    if (!(B / (4.0 * static_cast<double>(env.i0_)) < 0.5))
      throw std::invalid_argument("environment field i0 too small: B/(4*i0) must be < 1/2");
    return env;
  }

  static EnvironmentSpec explicit_list(std::vector<double> ps, double tail = 0.5) {
    for (std::size_t i = 0; i < ps.size(); ++i)
      require_probability(ps[i], "ps[" + std::to_string(i) + "]");
    require_probability(tail, "tail");
    EnvironmentSpec env;
    env.kind_ = EnvironmentKind::explicit_list;
    env.ps_ = std::move(ps);
    env.tail_ = tail;
    return env;
  }

  EnvironmentKind kind() const { return kind_; }

  double p_at(std::uint64_t k) const {
    switch (kind_) {
      case EnvironmentKind::homogeneous:
        return p_;
      case EnvironmentKind::poly_critical:
        if (k <= i0_) return 0.5;
        return 0.5 - growth_ / (4.0 * static_cast<double>(k));
      case EnvironmentKind::explicit_list:
        if (k >= 1 && k <= ps_.size()) return ps_[k - 1];
        return tail_;
    }
    return 0.5;  // unreachable
  }

  // m_k = q_k / p_k = (1 - p_k) / p_k  >= 1.
  double mean_at(std::uint64_t k) const {
    const double p = p_at(k);
    return (1.0 - p) / p;
  }

  double log_mean_at(std::uint64_t k) const {
    const double p = p_at(k);
    // log((1-p)/p) = log1p(1-2p) - log1p(-(1-2p)) evaluated stably near p=1/2
    const double u = 1.0 - 2.0 * p;
    return std::log1p(u) - std::log1p(-u);
  }

  // Accessors for the variant payloads (meaningful for the matching kind).
  double homogeneous_p() const { return p_; }
  double growth_exponent() const { return growth_; }
  std::uint64_t critical_prefix() const { return i0_; }
  const std::vector<double>& listed_ps() const { return ps_; }
  double tail_p() const { return tail_; }

  bool operator==(const EnvironmentSpec& other) const {
    if (kind_ != other.kind_) return false;
    switch (kind_) {
      case EnvironmentKind::homogeneous:
        return p_ == other.p_;
      case EnvironmentKind::poly_critical:
        return growth_ == other.growth_ && i0_ == other.i0_;
      case EnvironmentKind::explicit_list:
        return ps_ == other.ps_ && tail_ == other.tail_;
    }
    return false;
  }

 private:
  EnvironmentSpec() = default;

  static void require_probability(double p, const std::string& field) {
    if (!(p > 0.0) || !(p <= 0.5) || !std::isfinite(p))
      throw std::invalid_argument("environment field " + field +
                                  " must lie in (0, 1/2], got " + std::to_string(p));
  }

  EnvironmentKind kind_ = EnvironmentKind::homogeneous;
  double p_ = 0.5;
  double growth_ = 0.0;
  std::uint64_t i0_ = 1;
  std::vector<double> ps_;
  double tail_ = 0.5;
};

}  // namespace bpve
