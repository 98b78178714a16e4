#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <thread>
#include <utility>
#include <vector>

#include "bpve/environment.hpp"
#include "bpve/rng.hpp"

namespace bpve {

// Chain under simulation: Z_0 = 0 and, at each time t >= 1, every one of the
// 1 + Z_{t-1} individuals (the immigrant plus the previous generation)
// reproduces independently with the geometric(p_t) law.  A trajectory records
// the times t in [1, n] with Z_t = a.
//
// Z_0 = 0 puts time 0 in the level set exactly when a = 0; visit counts here
// cover [1, n] only and never include it.
inline constexpr bool time_zero_in_level_set(std::uint64_t a) { return a == 0; }

struct SimulationConfig {
  EnvironmentSpec env = EnvironmentSpec::homogeneous(0.5);
  std::uint64_t horizon = 1;      // n
  std::uint64_t level = 0;        // a
  std::uint64_t replications = 1;
  std::uint64_t seed = 0;
  std::uint64_t population_cap = 1000000000;
  bool record_visit_times = false;
  unsigned workers = 1;
  // Generations of at most this many parents reproduce by per-individual
  // geometric inversion; larger ones draw the generation total from the
  // distributionally identical gamma-Poisson mixture, keeping the cost of a
  // step O(1) instead of O(population).  Results depend on this value (the
  // draws differ), not the sampled law; set to UINT64_MAX to force
  // per-individual sampling throughout.
  std::uint64_t mixture_threshold = 256;
};

struct LevelHitRecord {
  std::uint64_t replication = 0;
  std::uint64_t visit_count = 0;
  std::vector<std::uint64_t> visit_times;  // filled only when requested
  std::uint64_t final_population = 0;
  bool capped = false;
};

struct EnsembleSummary {
  std::uint64_t replications = 0;
  std::uint64_t capped_count = 0;
  double mean_visit_count = 0.0;      // over non-capped replications
  double visit_count_variance = 0.0;  // unbiased, over non-capped
  double se_mean = 0.0;
  double se_variance = 0.0;
  // final population -> replication count, non-capped only, ascending
  std::vector<std::pair<std::uint64_t, std::uint64_t>> final_population_histogram;
};

struct Ensemble {
  std::vector<LevelHitRecord> records;  // indexed by replication
  EnsembleSummary summary;
};

inline void validate(const SimulationConfig& cfg) {
  if (cfg.replications < 1)
    throw std::invalid_argument("simulation requires replications >= 1");
  if (cfg.horizon < 1)
    throw std::invalid_argument("simulation requires horizon >= 1");
  if (cfg.population_cap < 1 || cfg.population_cap > (1ull << 62))
    throw std::invalid_argument("population_cap out of range");
}

// One generation: the total offspring of 1 + z_prev individuals, each an
// independent geometric(p) draw by inversion.
inline std::uint64_t step(std::uint64_t z_prev, double p, SplitMix64& rng) {
  return sample_negative_binomial_sum(z_prev + 1, p, rng);
}

namespace detail {

inline std::uint64_t advance_population(std::uint64_t z_prev, double p,
                                        const SimulationConfig& cfg,
                                        SplitMix64& rng) {
  const std::uint64_t parents = z_prev + 1;
  if (parents <= cfg.mixture_threshold) return step(z_prev, p, rng);
  const double lambda =
      sample_gamma(static_cast<double>(parents), rng) * ((1.0 - p) / p);
  // Poisson mass at or below the cap is below e^{-0.15 lambda} here, so the
  // draw is skipped once the outcome "capped" is certain at ~1e-13.
  if (lambda >= 2.0 * static_cast<double>(cfg.population_cap) + 200.0)
    return cfg.population_cap + 1;
  return sample_poisson(lambda, rng);
}

}  // namespace detail

// Replication r of the configured ensemble.  The generator state is derived
// from (seed, r) alone, so any execution order or worker layout produces the
// same record.
inline LevelHitRecord run_replication(const SimulationConfig& cfg,
                                      std::uint64_t r) {
  SplitMix64 rng = replication_stream(cfg.seed, r);
  LevelHitRecord rec;
  rec.replication = r;
  std::uint64_t z = 0;
  for (std::uint64_t t = 1; t <= cfg.horizon; ++t) {
    z = detail::advance_population(z, cfg.env.p_at(t), cfg, rng);
    if (z > cfg.population_cap) {
      rec.capped = true;
      break;
    }
    if (z == cfg.level) {
      ++rec.visit_count;
      if (cfg.record_visit_times) rec.visit_times.push_back(t);
    }
  }
  rec.final_population = z;
  return rec;
}

namespace detail {

inline EnsembleSummary summarize(const std::vector<LevelHitRecord>& records) {
  EnsembleSummary s;
  s.replications = records.size();
  std::map<std::uint64_t, std::uint64_t> hist;
  std::uint64_t n = 0;
  double sum = 0.0;
  for (const auto& rec : records) {
    if (rec.capped) {
      ++s.capped_count;
      continue;
    }
    ++n;
    sum += static_cast<double>(rec.visit_count);
    ++hist[rec.final_population];
  }
  s.final_population_histogram.assign(hist.begin(), hist.end());
  if (n == 0) return s;
  s.mean_visit_count = sum / static_cast<double>(n);
  if (n < 2) return s;
  double m2 = 0.0, m4 = 0.0;
  for (const auto& rec : records) {
    if (rec.capped) continue;
    const double d = static_cast<double>(rec.visit_count) - s.mean_visit_count;
    const double d2 = d * d;
    m2 += d2;
    m4 += d2 * d2;
  }
  const double nd = static_cast<double>(n);
  s.visit_count_variance = m2 / (nd - 1.0);
  s.se_mean = std::sqrt(s.visit_count_variance / nd);
  m4 /= nd;
  const double var_of_var =
      (m4 - s.visit_count_variance * s.visit_count_variance * (nd - 3.0) /
                (nd - 1.0)) /
      nd;
  s.se_variance = std::sqrt(std::max(0.0, var_of_var));
  return s;
}

}  // namespace detail

// Runs all replications and aggregates them.  Records land in slots indexed
// by replication and the summary is reduced in index order afterwards, so
// the output is bit-identical for any worker count.
inline Ensemble run_ensemble(const SimulationConfig& cfg) {
  validate(cfg);
  Ensemble out;
  out.records.resize(cfg.replications);
  const unsigned workers =
      std::max(1u, std::min<unsigned>(cfg.workers, std::thread::hardware_concurrency() * 4 + 4));
  if (workers == 1 || cfg.replications == 1) {
    for (std::uint64_t r = 0; r < cfg.replications; ++r)
      out.records[r] = run_replication(cfg, r);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
      const std::uint64_t lo = cfg.replications * w / workers;
      const std::uint64_t hi = cfg.replications * (w + 1) / workers;
      pool.emplace_back([&cfg, &out, lo, hi] {
        for (std::uint64_t r = lo; r < hi; ++r)
          out.records[r] = run_replication(cfg, r);
      });
    }
    for (auto& t : pool) t.join();
  }
  out.summary = detail::summarize(out.records);
  return out;
}

}  // namespace bpve
