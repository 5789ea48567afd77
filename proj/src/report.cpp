#include "cayley/report.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace cayley {

using nlohmann::json;

std::string to_string(Outcome o) {
  switch (o) {
    case Outcome::kPass: return "pass";
    case Outcome::kFail: return "fail";
    case Outcome::kViolation: return "violation";
  }
  return "fail";
}

json to_json(const RunManifest& m) {
  json params = json::object();
  for (const auto& [k, v] : m.parameters) params[k] = v;
  auto stamp = [](const std::string& s) { return s.empty() ? json(nullptr) : json(s); };
  return {{"command", m.command},         {"parameters", params},
          {"seed", m.seed},               {"started", stamp(m.started)},
          {"finished", stamp(m.finished)}, {"outcome", to_string(m.outcome)},
          {"artifact_paths", m.artifact_paths}};
}

json suite_document(const RunManifest& m, const std::vector<SuiteResult>& suites) {
  json arr = json::array();
  for (const SuiteResult& s : suites) arr.push_back(to_json(s));
  return {{"manifest", to_json(m)}, {"suites", arr}};
}

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace

std::map<std::string, std::string> parse_config(std::string_view text) {
  std::map<std::string, std::string> out;
  int lineno = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    const std::string key(trim(line.substr(0, std::min(eq, line.size()))));
    if (eq == std::string_view::npos || key.empty())
      throw std::invalid_argument("config line " + std::to_string(lineno) + ": expected 'key = value'");
    out[key] = std::string(trim(line.substr(eq + 1)));
  }
  return out;
}

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, r.ptr);
}

namespace {

double slack_of(const json& v) {
  return v.is_null() ? -std::numeric_limits<double>::infinity() : v.get<double>();
}

void merge_row(std::map<std::string, ReportRow>& rows, ReportRow row) {
  auto [it, fresh] = rows.try_emplace(row.name, row);
  if (fresh) return;
  ReportRow& r = it->second;
  r.runs += row.runs;
  r.samples += row.samples;
  r.min_slack = std::min(r.min_slack, row.min_slack);
  r.tol = std::min(r.tol, row.tol);
  r.passed = r.passed && row.passed;
}

void take_k(std::optional<double>& k, double v) {
  if (std::isfinite(v)) k = k ? std::min(*k, v) : v;
}

}  // namespace

MergedReport merge_documents(const std::vector<json>& docs) {
  MergedReport out;
  std::map<std::string, ReportRow> rows;
  for (std::size_t i = 0; i < docs.size(); ++i) {
    const json& d = docs[i];
    const std::string where = "document " + std::to_string(i + 1);
    try {
      if (!d.is_object() || !d.contains("manifest") || !d.at("manifest").is_object())
        throw std::invalid_argument("missing manifest");
      if (d.contains("suites")) {
        for (const json& s : d.at("suites")) {
          const SuiteResult r = suite_from_json(s);
          merge_row(rows, {r.name, r.statement, 1, r.samples, r.min_slack, r.tol, r.passed});
          if (r.name == "sharp_constant") take_k(out.k_hat, r.min_slack);
        }
      } else if (d.contains("search")) {
        const json& s = d.at("search");
        const json& p = d.at("manifest").at("parameters");
        const std::string objective = p.at("objective").get<std::string>();
        const std::string name = "search:" + objective + ":" + p.at("parametrization").get<std::string>();
        const double best = slack_of(s.at("best_slack"));
        merge_row(rows, {name, "adversarial minimum of the objective", 1, s.at("evaluations").get<std::int64_t>(),
                         best, 0.0, !s.at("violation").get<bool>()});
        if (objective == "sharp_K") take_k(out.k_hat, best);
      } else {
        throw std::invalid_argument("expected 'suites' or 'search'");
      }
    } catch (const json::exception& e) {
      throw std::invalid_argument(where + ": " + e.what());
    } catch (const std::invalid_argument& e) {
      throw std::invalid_argument(where + ": " + e.what());
    }
    ++out.documents;
  }
  for (auto& [name, row] : rows) out.rows.push_back(row);
  return out;
}

json to_json(const MergedReport& r) {
  auto num = [](double x) { return std::isfinite(x) ? json(x) : json(nullptr); };
  json rows = json::array();
  for (const ReportRow& row : r.rows)
    rows.push_back({{"name", row.name},
                    {"statement", row.statement},
                    {"runs", row.runs},
                    {"samples", row.samples},
                    {"min_slack", num(row.min_slack)},
                    {"tol", row.tol},
                    {"passed", row.passed}});
  return {{"documents", r.documents}, {"rows", rows}, {"k_hat", r.k_hat ? json(*r.k_hat) : json(nullptr)}};
}

std::string to_csv(const MergedReport& r) {
  std::ostringstream os;
  os << "name,runs,samples,min_slack,tol,passed\n";
  for (const ReportRow& row : r.rows)
    os << row.name << ',' << row.runs << ',' << row.samples << ',' << format_double(row.min_slack) << ','
       << format_double(row.tol) << ',' << (row.passed ? "true" : "false") << '\n';
  if (r.k_hat) os << "k_hat,,," << format_double(*r.k_hat) << ",,\n";
  return os.str();
}

std::string to_csv(const std::vector<SuiteResult>& suites) {
  std::ostringstream os;
  os << "name,samples,min_slack,tol,passed\n";
  for (const SuiteResult& s : suites)
    os << s.name << ',' << s.samples << ',' << format_double(s.min_slack) << ',' << format_double(s.tol) << ','
       << (s.passed ? "true" : "false") << '\n';
  return os.str();
}

}  // namespace cayley
