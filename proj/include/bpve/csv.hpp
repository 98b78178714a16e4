#pragma once

#include <cstdio>
#include <ostream>
#include <string>
#include <vector>

#include "bpve/analysis.hpp"
#include "bpve/conditional.hpp"
#include "bpve/dtable.hpp"
#include "bpve/simulator.hpp"

namespace bpve {

// 17 significant digits: doubles survive a write/parse round trip.
inline std::string format_float(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

inline void write_level_pmf_csv(std::ostream& out, const DTable& table,
                                std::uint64_t n, std::uint64_t a_max) {
  out << "a,probability\n";
  for (std::uint64_t a = 0; a <= a_max; ++a)
    out << a << ',' << format_float(table.level_probability(n, a)) << '\n';
}

inline void write_conditional_csv(std::ostream& out,
                                  const ConditionalKernel& kernel) {
  out << "j,probability\n";
  for (std::size_t j = 0; j < kernel.coefficients.size(); ++j)
    out << j << ',' << format_float(kernel.coefficients[j]) << '\n';
}

inline void write_moments_csv(std::ostream& out,
                              const std::vector<double>& moments) {
  out << "k,moment\n";
  for (std::size_t k = 0; k < moments.size(); ++k)
    out << (k + 1) << ',' << format_float(moments[k]) << '\n';
}

inline void write_ensemble_csv(std::ostream& out,
                               const std::vector<LevelHitRecord>& records) {
  out << "rep,visit_count,final_population,capped\n";
  for (const auto& rec : records)
    out << rec.replication << ',' << rec.visit_count << ','
        << rec.final_population << ',' << (rec.capped ? 1 : 0) << '\n';
}

inline void write_visit_times_csv(std::ostream& out,
                                  const std::vector<LevelHitRecord>& records) {
  out << "rep,t\n";
  for (const auto& rec : records)
    for (std::uint64_t t : rec.visit_times) out << rec.replication << ',' << t << '\n';
}

inline void write_expected_count_csv(std::ostream& out,
                                     const std::vector<ExpectedCountRow>& rows) {
  out << "n,exact,prediction,ratio\n";
  for (const auto& row : rows)
    out << row.n << ',' << format_float(row.exact) << ','
        << format_float(row.prediction) << ',' << format_float(row.ratio) << '\n';
}

inline void write_limit_law_csv(std::ostream& out, const LimitLawReport& report) {
  out << "n,ks,mean_over_logn,second_moment_over_logn2\n";
  for (const auto& row : report.rows)
    out << row.n << ',' << format_float(row.ks) << ','
        << format_float(row.mean_over_logn) << ','
        << format_float(row.second_moment_over_logn2) << '\n';
}

}  // namespace bpve
