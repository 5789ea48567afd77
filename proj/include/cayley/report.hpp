#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "cayley/suites.hpp"

namespace cayley {

enum class Outcome { kPass, kFail, kViolation };
std::string to_string(Outcome o);

struct RunManifest {
  std::string command;
  /// Effective parameters, stored as strings so that key order and
  /// formatting are fixed.
  std::map<std::string, std::string> parameters;
  std::uint64_t seed = 1;
  /// ISO-8601 UTC; empty unless timestamps were requested.
  std::string started;
  std::string finished;
  Outcome outcome = Outcome::kPass;
  std::vector<std::string> artifact_paths;
};

nlohmann::json to_json(const RunManifest& m);

/// {manifest, suites: [...]}
nlohmann::json suite_document(const RunManifest& m, const std::vector<SuiteResult>& suites);

/// Plain-text "key = value" lines; '#' starts a comment, blank lines are
/// skipped. Throws std::invalid_argument naming the offending line.
std::map<std::string, std::string> parse_config(std::string_view text);

/// One row of a merged report.
struct ReportRow {
  std::string name;
  std::string statement;
  int runs = 0;
  std::int64_t samples = 0;
  /// -inf when some run recorded a non-finite slack.
  double min_slack = 0.0;
  double tol = 0.0;
  bool passed = true;
};

struct MergedReport {
  std::vector<ReportRow> rows;  ///< sorted by name
  /// Smallest sharp-constant estimate across suites and sharp_K searches.
  std::optional<double> k_hat;
  int documents = 0;
};

/// Merges suite and search documents. Rows with the same name combine by
/// minimum slack, summed samples and conjunction of pass flags. Search
/// documents contribute a row "search:<objective>:<parametrization>".
/// Throws std::invalid_argument when a document does not follow the schema.
MergedReport merge_documents(const std::vector<nlohmann::json>& docs);

nlohmann::json to_json(const MergedReport& r);
/// Header "name,runs,samples,min_slack,tol,passed", one line per row, and a
/// final "k_hat" line when an estimate exists.
std::string to_csv(const MergedReport& r);
std::string to_csv(const std::vector<SuiteResult>& suites);

/// Shortest round-trip decimal representation.
std::string format_double(double x);

}  // namespace cayley
