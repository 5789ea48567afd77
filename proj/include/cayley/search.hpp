#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "cayley/boundary_forms.hpp"
#include "cayley/linalg.hpp"

namespace cayley {

enum class Objective { kMainRatio, kKeyLemma1, kKeyLemma2, kSharpK };
enum class Parametrization { kMeasure, kBlockForm };
enum class MeasureInit { kRandom, kCayleyLine };

std::string to_string(Objective o);
std::string to_string(Parametrization p);
/// Throws std::invalid_argument for unknown names.
Objective parse_objective(const std::string& s);
Parametrization parse_parametrization(const std::string& s);

struct SearchConfig {
  std::uint64_t seed = 1;
  /// Objective evaluations, certification excluded.
  std::int64_t budget = 10000;
  int atoms_min = 1;
  int atoms_max = 64;
  Objective objective = Objective::kMainRatio;
  Parametrization parametrization = Parametrization::kMeasure;
  double step = 0.3;
  double alpha = 0.25;
  /// 0 picks budget / 5000, clamped to [1, 50].
  int restarts = 0;
  /// kCayleyLine starts every restart from atoms within 1e-3 of one line.
  MeasureInit init = MeasureInit::kRandom;
};

/// Throws std::invalid_argument on budget < 1, step <= 0, a bad atom range,
/// or alpha outside [0, 1].
void validate(const SearchConfig& cfg);

/// Value minimized by the search, per objective:
///   main_ratio, key_lemma_1/2: ln(larger side / smaller side), signed like
///     the slack (log margin);
///   sharp_K: (1 - ratio/(4/22)^16) / sum (nu_i - 1/16)^2.
/// In every case a negative value means the inequality failed.
struct Evaluation {
  double value = 0.0;
  /// Absolute slack (for sharp_K: same as value).
  double slack = 0.0;
  bool defined = true;
  bool passed = true;
};

struct SearchResult {
  nlohmann::json best_config;
  double best_slack = 0.0;
  /// Absolute slack of the best configuration.
  double best_abs_slack = 0.0;
  /// Re-evaluation of the best configuration with kCertifyJacobi.
  Evaluation certified;
  /// A certified failure of the inequality.
  bool violation = false;
  /// (evaluation index, best so far), one entry per improvement.
  std::vector<std::pair<std::int64_t, double>> trace;
  std::int64_t evaluations = 0;
};

/// Random restarts of a Gaussian-perturbation annealer with geometric step and
/// temperature decay. Restart r draws from Rng(seed, r); results are merged in
/// restart order, so the outcome depends only on the config.
SearchResult minimize_slack(const SearchConfig& cfg);

/// Evaluates an objective on a serialized configuration (as in
/// SearchResult::best_config).
Evaluation evaluate_config(const nlohmann::json& config, Objective objective, double alpha,
                           JacobiOptions opts = {});

nlohmann::json to_json(const DiscreteMeasure& m);
nlohmann::json to_json(const BlockForm& bf);
nlohmann::json to_json(const SearchResult& r);
/// Both throw std::invalid_argument when the document does not match the
/// layout written by to_json.
DiscreteMeasure measure_from_json(const nlohmann::json& j);
BlockForm blockform_from_json(const nlohmann::json& j);

/// Unconstrained block data: A and B symmetric 8x8, C 8x8, lambda in [0, 1]
/// and mu = 1 - lambda.
struct RawBlock {
  Matrix a{8, 8};
  Matrix b{8, 8};
  Matrix c{8, 8};
  double lambda = 0.5;
};

struct Projection {
  std::optional<BlockForm> form;  ///< empty when rejected
  int rounds = 0;
  double defect = 0.0;
};

/// Alternating projections onto {H >= 0}, {Hhat - H >= 0} and the trace
/// constraints tr A = lambda, tr B = mu, at most 100 rounds, stopping once
/// the largest violation is below 1e-10. Admissible input comes back
/// unchanged up to the diagonalizing rotation of A and B. Throws
/// std::invalid_argument for lambda outside [0, 1] or wrong shapes.
Projection project_blockform(const RawBlock& raw);

/// Largest constraint violation of raw block data (0 when admissible).
double raw_defect(const RawBlock& raw);

}  // namespace cayley
