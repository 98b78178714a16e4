#pragma once

#include <algorithm>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "bpve/analysis.hpp"
#include "bpve/environment.hpp"
#include "bpve/simulator.hpp"

namespace bpve {

using Json = nlohmann::ordered_json;

// --- environment ------------------------------------------------------------
//
// {"kind":"homogeneous","p":0.5}
// {"kind":"poly_critical","B":0.5,"i0":2}        (i0 optional)
// {"kind":"explicit","ps":[0.4,0.5],"tail":0.5}  (tail optional)
//
// Unknown fields are rejected so that a typo never silently selects a
// default.

inline Json environment_to_json(const EnvironmentSpec& env) {
  Json j;
  switch (env.kind()) {
    case EnvironmentKind::homogeneous:
      j["kind"] = "homogeneous";
      j["p"] = env.homogeneous_p();
      break;
    case EnvironmentKind::poly_critical:
      j["kind"] = "poly_critical";
      j["B"] = env.growth_exponent();
      j["i0"] = env.critical_prefix();
      break;
    case EnvironmentKind::explicit_list:
      j["kind"] = "explicit";
      j["ps"] = env.listed_ps();
      j["tail"] = env.tail_p();
      break;
  }
  return j;
}

inline EnvironmentSpec environment_from_json(const Json& j) {
  if (!j.is_object())
    throw std::invalid_argument("environment JSON must be an object");
  if (!j.contains("kind") || !j.at("kind").is_string())
    throw std::invalid_argument("environment field kind missing or not a string");
  const std::string kind = j.at("kind").get<std::string>();

  auto reject_unknown = [&](std::initializer_list<const char*> allowed) {
    for (const auto& item : j.items()) {
      const std::string& key = item.key();
      if (key == "kind") continue;
      if (std::find_if(allowed.begin(), allowed.end(), [&](const char* a) {
            return key == a;
          }) == allowed.end())
        throw std::invalid_argument("environment field " + key +
                                    " not recognised for kind " + kind);
    }
  };
  auto number_field = [&](const char* field) -> double {
    if (!j.contains(field))
      throw std::invalid_argument(std::string("environment field ") + field + " missing");
    if (!j.at(field).is_number())
      throw std::invalid_argument(std::string("environment field ") + field +
                                  " must be a number");
    return j.at(field).get<double>();
  };

  if (kind == "homogeneous") {
    reject_unknown({"p"});
    return EnvironmentSpec::homogeneous(number_field("p"));
  }
  if (kind == "poly_critical") {
    reject_unknown({"B", "i0"});
    std::optional<std::uint64_t> i0;
    if (j.contains("i0")) {
      if (!j.at("i0").is_number_unsigned() || j.at("i0").get<std::uint64_t>() < 1)
        throw std::invalid_argument("environment field i0 must be a positive integer");
      i0 = j.at("i0").get<std::uint64_t>();
    }
    return EnvironmentSpec::poly_critical(number_field("B"), i0);
  }
  if (kind == "explicit") {
    reject_unknown({"ps", "tail"});
    if (!j.contains("ps") || !j.at("ps").is_array())
      throw std::invalid_argument("environment field ps missing or not an array");
    std::vector<double> ps;
    for (const auto& v : j.at("ps")) {
      if (!v.is_number())
        throw std::invalid_argument("environment field ps must contain numbers only");
      ps.push_back(v.get<double>());
    }
    const double tail = j.contains("tail") ? number_field("tail") : 0.5;
    return EnvironmentSpec::explicit_list(std::move(ps), tail);
  }
  throw std::invalid_argument(
      "environment field kind must be one of homogeneous, poly_critical, explicit");
}

inline EnvironmentSpec environment_from_string(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw std::invalid_argument(std::string("environment JSON malformed: ") + e.what());
  }
  return environment_from_json(j);
}

// --- reports -----------------------------------------------------------------

inline Json classification_to_json(const ClassificationVerdict& v) {
  Json j;
  j["verdict"] = to_string(v.verdict);
  j["basis"] = to_string(v.basis);
  Json d;
  d["partial_sum_horizon"] = v.diagnostics.partial_sum_horizon;
  d["partial_sum"] = v.diagnostics.partial_sum;
  d["growth_ratio"] = v.diagnostics.growth_ratio;
  d["growth_bound_certified"] = v.diagnostics.growth_bound_certified;
  if (v.diagnostics.p_limit)
    d["p_limit"] = *v.diagnostics.p_limit;
  else
    d["p_limit"] = nullptr;
  d["note"] = v.diagnostics.note;
  j["diagnostics"] = std::move(d);
  return j;
}

inline Json limit_law_report_to_json(const LimitLawReport& r) {
  Json j;
  j["replications"] = r.replications;
  j["level"] = r.level;
  Json rows = Json::array();
  for (const auto& row : r.rows) {
    Json e;
    e["n"] = row.n;
    e["ks"] = row.ks;
    e["mean_over_logn"] = row.mean_over_logn;
    e["second_moment_over_logn2"] = row.second_moment_over_logn2;
    if (row.exact_mean_over_logn) {
      e["exact_mean_over_logn"] = *row.exact_mean_over_logn;
      e["exact_second_moment_over_logn2"] = *row.exact_second_moment_over_logn2;
    }
    e["capped"] = row.capped;
    rows.push_back(std::move(e));
  }
  j["rows"] = std::move(rows);
  j["has_trends"] = r.has_trends;
  if (r.has_trends) {
    j["ks_trend_nonincreasing"] = r.ks_trend_nonincreasing;
    j["moment_trend_nonincreasing"] = r.moment_trend_nonincreasing;
  }
  return j;
}

inline Json summary_to_json(const EnsembleSummary& s) {
  Json j;
  j["replications"] = s.replications;
  j["capped_count"] = s.capped_count;
  j["mean_visit_count"] = s.mean_visit_count;
  j["visit_count_variance"] = s.visit_count_variance;
  j["se_mean"] = s.se_mean;
  j["se_variance"] = s.se_variance;
  // final-population histogram, truncated at 99.99% of non-capped mass
  std::uint64_t total = 0;
  for (const auto& [value, count] : s.final_population_histogram) total += count;
  Json hist = Json::array();
  std::uint64_t covered = 0;
  std::uint64_t omitted = 0;
  for (const auto& [value, count] : s.final_population_histogram) {
    if (static_cast<double>(covered) >= 0.9999 * static_cast<double>(total)) {
      omitted += count;
      continue;
    }
    hist.push_back(Json::array({value, count}));
    covered += count;
  }
  j["final_population_histogram"] = std::move(hist);
  j["histogram_omitted"] = omitted;
  return j;
}

// --- run manifest -------------------------------------------------------------
//
// Every CLI command emits one: the fully resolved configuration plus the list
// of files it wrote.  Re-running the recorded command configuration
// reproduces those files byte for byte (the manifest itself carries timing
// and is not part of that guarantee).

struct RunManifest {
  std::string command;
  Json configuration;
  std::uint64_t seed = 0;
  std::string version;
  double duration_seconds = 0.0;
  std::vector<std::string> outputs;
};

inline Json manifest_to_json(const RunManifest& m) {
  Json j;
  j["command"] = m.command;
  j["configuration"] = m.configuration;
  j["seed"] = m.seed;
  j["version"] = m.version;
  j["duration_seconds"] = m.duration_seconds;
  j["outputs"] = m.outputs;
  return j;
}

inline RunManifest manifest_from_json(const Json& j) {
  RunManifest m;
  m.command = j.at("command").get<std::string>();
  m.configuration = j.at("configuration");
  m.seed = j.at("seed").get<std::uint64_t>();
  m.version = j.at("version").get<std::string>();
  m.duration_seconds = j.at("duration_seconds").get<double>();
  for (const auto& o : j.at("outputs")) m.outputs.push_back(o.get<std::string>());
  return m;
}

}  // namespace bpve
