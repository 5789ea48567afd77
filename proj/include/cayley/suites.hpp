#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

namespace cayley {

/// One verification suite. Every sample contributes a slack oriented so that
/// the property holds iff slack >= -tol; residual checks use slack = -residual.
struct SuiteResult {
  std::string name;
  std::string statement;
  std::int64_t samples = 0;
  double min_slack = 0.0;
  double tol = 0.0;
  bool passed = true;
  /// Suite-specific extras (worst configuration, per-case minima, estimates).
  nlohmann::json details = nlohmann::json::object();
};

struct SuiteOptions {
  std::uint64_t seed = 1;
  std::int64_t samples = 1000;
  double alpha = 0.25;
  /// Largest geodesic parameter used by geometry suites.
  double tmax = 10.0;
  int atoms_max = 64;
};

/// Octonion identities, alternativity, Moufang identities, the
/// non-associativity witness.
std::vector<SuiteResult> run_identities(const SuiteOptions& opts);
/// Models, distance, geodesics, hinges, Busemann functions, Cayley lines.
std::vector<SuiteResult> run_geometry(const SuiteOptions& opts);
/// Boundary forms, block reduction and every inequality at opts.alpha.
std::vector<SuiteResult> run_lemmas(const SuiteOptions& opts);

nlohmann::json to_json(const SuiteResult& s);
SuiteResult suite_from_json(const nlohmann::json& j);

bool all_passed(const std::vector<SuiteResult>& suites);

}  // namespace cayley
