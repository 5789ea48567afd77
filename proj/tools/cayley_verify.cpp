// cayley_verify: verification suites, adversarial searches and report merging.
//
// Exit codes: 0 pass, 1 certified violation, 2 usage or input error.

#include <chrono>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <functional>
#include <future>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "cayley/report.hpp"
#include "cayley/search.hpp"
#include "cayley/suites.hpp"

namespace {

using nlohmann::json;
using namespace cayley;

constexpr int kExitPass = 0;
constexpr int kExitViolation = 1;
constexpr int kExitUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Common {
  std::uint64_t seed = 1;
  std::int64_t samples = 1000;
  int atoms = 64;
  double alpha = 0.25;
  double tol = -1.0;  // < 0: keep per-suite tolerances
  double tmax = 10.0;
  std::string out;
  std::string format = "json";
  std::string config;
  bool timestamps = false;
};

std::string now_iso() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::uint64_t default_seed() {
  const char* env = std::getenv("CAYLEY_SEED");
  if (env == nullptr || *env == '\0') return 1;
  try {
    std::size_t pos = 0;
    const unsigned long long v = std::stoull(env, &pos);
    if (pos != std::string(env).size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw UsageError(std::string("CAYLEY_SEED is not an unsigned integer: ") + env);
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void emit(const Common& c, const std::string& text) {
  if (c.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(c.out, std::ios::binary);
  if (!f) throw UsageError("cannot write " + c.out);
  f << text;
}

RunManifest start_manifest(const Common& c, std::string command) {
  RunManifest m;
  m.command = std::move(command);
  m.seed = c.seed;
  if (c.timestamps) m.started = now_iso();
  if (!c.out.empty()) m.artifact_paths.push_back(c.out);
  return m;
}

void print_summary(const std::vector<SuiteResult>& suites) {
  for (const SuiteResult& s : suites)
    std::cout << (s.passed ? "PASS " : "FAIL ") << s.name << "  samples=" << s.samples
              << "  min_slack=" << format_double(s.min_slack) << "  tol=" << format_double(s.tol) << '\n';
}

// --- suites ----------------------------------------------------------------

using Runner = std::function<std::vector<SuiteResult>(const SuiteOptions&)>;

int run_suites(const Common& c, const std::string& command, const std::vector<Runner>& runners) {
  if (c.samples < 1) throw UsageError("--samples must be at least 1");
  if (!(c.alpha >= 0.0 && c.alpha <= 1.0)) throw UsageError("--alpha must lie in [0, 1]");
  if (!(c.tmax > 0.0 && c.tmax <= 15.0)) throw UsageError("--tmax must lie in (0, 15]");
  if (c.atoms < 1 || c.atoms > 4096) throw UsageError("--atoms must lie in [1, 4096]");
  if (c.format != "json" && c.format != "csv") throw UsageError("--format must be json or csv");

  SuiteOptions o;
  o.seed = c.seed;
  o.samples = c.samples;
  o.alpha = c.alpha;
  o.tmax = c.tmax;
  o.atoms_max = c.atoms;

  RunManifest m = start_manifest(c, command);
  m.parameters = {{"samples", std::to_string(c.samples)}, {"alpha", format_double(c.alpha)},
                  {"tmax", format_double(c.tmax)},        {"atoms", std::to_string(c.atoms)},
                  {"tol", c.tol < 0 ? "default" : format_double(c.tol)}};

  // Suite groups are independent; results are concatenated in group order.
  std::vector<std::future<std::vector<SuiteResult>>> jobs;
  for (const Runner& r : runners) jobs.push_back(std::async(std::launch::async, r, o));
  std::vector<SuiteResult> suites;
  for (auto& j : jobs) {
    auto part = j.get();
    suites.insert(suites.end(), part.begin(), part.end());
  }
  if (c.tol >= 0.0)
    for (SuiteResult& s : suites) {
      s.tol = std::min(s.tol, c.tol);
      s.passed = s.min_slack >= -s.tol;
    }

  const bool ok = all_passed(suites);
  m.outcome = ok ? Outcome::kPass : Outcome::kViolation;
  if (c.timestamps) m.finished = now_iso();

  if (c.format == "csv") emit(c, to_csv(suites));
  else emit(c, suite_document(m, suites).dump(2) + "\n");
  if (!c.out.empty()) print_summary(suites);
  return ok ? kExitPass : kExitViolation;
}

// --- search ----------------------------------------------------------------

struct SearchFlags {
  std::string budget, objective, parametrization, step, restarts, init, atoms_range;
};

template <class T>
T parse_number(const std::string& key, const std::string& v) {
  std::istringstream in(v);
  T x{};
  in >> x;
  if (in.fail() || !in.eof()) throw UsageError("bad value for " + key + ": '" + v + "'");
  return x;
}

int run_search(const Common& c, const CLI::App& app, const SearchFlags& f) {
  std::map<std::string, std::string> kv;
  if (!c.config.empty()) {
    try {
      kv = parse_config(read_file(c.config));
    } catch (const std::invalid_argument& e) {
      throw UsageError(c.config + ": " + e.what());
    }
  }
  auto set = [&](const char* flag, const std::string& key, const std::string& value) {
    if (app.count(flag) > 0) kv[key] = value;
  };
  set("--seed", "seed", std::to_string(c.seed));
  set("--alpha", "alpha", format_double(c.alpha));
  set("--budget", "budget", f.budget);
  set("--objective", "objective", f.objective);
  set("--parametrization", "parametrization", f.parametrization);
  set("--step", "step", f.step);
  set("--restarts", "restarts", f.restarts);
  set("--init", "init", f.init);
  set("--atoms", "atoms", f.atoms_range);
  if (c.format != "json" && c.format != "csv") throw UsageError("--format must be json or csv");

  SearchConfig cfg;
  cfg.seed = c.seed;
  for (const auto& [k, v] : kv) {
    if (k == "seed") cfg.seed = parse_number<std::uint64_t>(k, v);
    else if (k == "budget") cfg.budget = parse_number<std::int64_t>(k, v);
    else if (k == "step") cfg.step = parse_number<double>(k, v);
    else if (k == "alpha") cfg.alpha = parse_number<double>(k, v);
    else if (k == "restarts") cfg.restarts = parse_number<int>(k, v);
    else if (k == "objective") {
      try {
        cfg.objective = parse_objective(v);
      } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
      }
    } else if (k == "parametrization") {
      try {
        cfg.parametrization = parse_parametrization(v);
      } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
      }
    } else if (k == "init") {
      if (v == "random") cfg.init = MeasureInit::kRandom;
      else if (v == "cayley_line") cfg.init = MeasureInit::kCayleyLine;
      else throw UsageError("init must be random or cayley_line");
    } else if (k == "atoms") {
      // "N" (upper bound) or "LO-HI"
      const auto dash = v.find('-');
      if (dash == std::string::npos) {
        cfg.atoms_max = parse_number<int>(k, v);
      } else {
        cfg.atoms_min = parse_number<int>(k, v.substr(0, dash));
        cfg.atoms_max = parse_number<int>(k, v.substr(dash + 1));
      }
    } else {
      throw UsageError("unknown config key '" + k + "'");
    }
  }
  try {
    validate(cfg);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }

  Common eff = c;
  eff.seed = cfg.seed;
  RunManifest m = start_manifest(eff, "search");
  m.parameters = {{"budget", std::to_string(cfg.budget)},
                  {"objective", to_string(cfg.objective)},
                  {"parametrization", to_string(cfg.parametrization)},
                  {"atoms", std::to_string(cfg.atoms_min) + "-" + std::to_string(cfg.atoms_max)},
                  {"step", format_double(cfg.step)},
                  {"alpha", format_double(cfg.alpha)},
                  {"restarts", std::to_string(cfg.restarts)},
                  {"init", cfg.init == MeasureInit::kRandom ? "random" : "cayley_line"}};
  if (!c.config.empty()) m.parameters["config"] = c.config;

  const SearchResult r = minimize_slack(cfg);
  m.outcome = r.violation ? Outcome::kViolation : Outcome::kPass;
  if (c.timestamps) m.finished = now_iso();

  if (c.format == "csv") {
    std::ostringstream os;
    os << "objective,parametrization,evaluations,best_slack,certified_slack,violation\n"
       << to_string(cfg.objective) << ',' << to_string(cfg.parametrization) << ',' << r.evaluations << ','
       << format_double(r.best_slack) << ',' << format_double(r.certified.slack) << ','
       << (r.violation ? "true" : "false") << '\n';
    emit(c, os.str());
  } else {
    emit(c, json{{"manifest", to_json(m)}, {"search", to_json(r)}}.dump(2) + "\n");
  }
  if (!c.out.empty())
    std::cout << (r.violation ? "VIOLATION " : "PASS ") << to_string(cfg.objective) << '/'
              << to_string(cfg.parametrization) << "  evaluations=" << r.evaluations
              << "  best=" << format_double(r.best_slack) << '\n';
  return r.violation ? kExitViolation : kExitPass;
}

// --- report ----------------------------------------------------------------

int run_report(const Common& c, const std::vector<std::string>& inputs) {
  if (inputs.empty()) throw UsageError("report: no input documents");
  if (c.format != "json" && c.format != "csv") throw UsageError("--format must be json or csv");
  std::vector<json> docs;
  for (const std::string& p : inputs) {
    try {
      docs.push_back(json::parse(read_file(p)));
    } catch (const json::parse_error& e) {
      throw UsageError(p + ": " + e.what());
    }
  }
  MergedReport r;
  try {
    r = merge_documents(docs);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  const bool ok = std::all_of(r.rows.begin(), r.rows.end(), [](const ReportRow& row) { return row.passed; });
  if (c.format == "csv") {
    emit(c, to_csv(r));
  } else {
    RunManifest m = start_manifest(c, "report");
    m.parameters["inputs"] = std::to_string(inputs.size());
    m.outcome = ok ? Outcome::kPass : Outcome::kViolation;
    if (c.timestamps) m.finished = now_iso();
    json doc = to_json(r);
    doc["manifest"] = to_json(m);
    doc["inputs"] = inputs;
    emit(c, doc.dump(2) + "\n");
  }
  return ok ? kExitPass : kExitViolation;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Verification suites and adversarial searches for Cayley hyperbolic space inequalities"};
  app.require_subcommand(1);
  Common c;
  SearchFlags sf;
  std::vector<std::string> inputs;

  try {
    c.seed = default_seed();
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--seed", c.seed, "RNG seed (default: $CAYLEY_SEED or 1)");
    sub->add_option("--out", c.out, "write the report here instead of stdout");
    sub->add_option("--format", c.format, "json or csv");
    sub->add_flag("--timestamps", c.timestamps, "record wall-clock start/finish in the manifest");
  };
  auto add_suite = [&](CLI::App* sub) {
    add_common(sub);
    sub->add_option("--samples", c.samples, "samples per suite");
    sub->add_option("--tol", c.tol, "cap every suite tolerance at this value");
  };

  CLI::App* ids = app.add_subcommand("identities", "octonion identities and the associator witness");
  add_suite(ids);
  CLI::App* geo = app.add_subcommand("geometry", "distance, geodesics, hinges, Busemann functions, Cayley lines");
  add_suite(geo);
  geo->add_option("--tmax", c.tmax, "largest geodesic parameter");
  CLI::App* lem = app.add_subcommand("lemmas", "boundary forms and every inequality at the given alpha");
  add_suite(lem);
  lem->add_option("--alpha", c.alpha, "coupling parameter in [0, 1]");
  lem->add_option("--atoms", c.atoms, "largest number of atoms per random measure");
  CLI::App* all = app.add_subcommand("all", "identities, geometry and lemmas in parallel");
  add_suite(all);
  all->add_option("--tmax", c.tmax, "largest geodesic parameter");
  all->add_option("--alpha", c.alpha, "coupling parameter in [0, 1]");
  all->add_option("--atoms", c.atoms, "largest number of atoms per random measure");

  CLI::App* srch = app.add_subcommand("search", "adversarial slack minimization");
  add_common(srch);
  srch->add_option("--config", c.config, "key = value file; flags override");
  srch->add_option("--alpha", c.alpha, "coupling parameter for key_lemma objectives");
  srch->add_option("--budget", sf.budget, "objective evaluations");
  srch->add_option("--objective", sf.objective, "main_ratio, key_lemma_1, key_lemma_2 or sharp_K");
  srch->add_option("--parametrization", sf.parametrization, "measure or blockform");
  srch->add_option("--step", sf.step, "initial perturbation scale");
  srch->add_option("--restarts", sf.restarts, "number of restarts (0: automatic)");
  srch->add_option("--init", sf.init, "random or cayley_line");
  srch->add_option("--atoms", sf.atoms_range, "atom count N or range LO-HI");

  CLI::App* rep = app.add_subcommand("report", "merge run documents into a summary table");
  add_common(rep);
  rep->add_option("inputs", inputs, "JSON documents written by the other commands");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (ids->parsed()) return run_suites(c, "identities", {run_identities});
    if (geo->parsed()) return run_suites(c, "geometry", {run_geometry});
    if (lem->parsed()) return run_suites(c, "lemmas", {run_lemmas});
    if (all->parsed()) return run_suites(c, "all", {run_identities, run_geometry, run_lemmas});
    if (srch->parsed()) return run_search(c, *srch, sf);
    if (rep->parsed()) return run_report(c, inputs);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    // Anything else is an input problem surfaced by the library (bad files,
    // out-of-domain arguments); the exit contract has no other code.
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}
