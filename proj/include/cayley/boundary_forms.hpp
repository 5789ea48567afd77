#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <vector>

#include "cayley/cayley_space.hpp"
#include "cayley/linalg.hpp"

namespace cayley {

struct Atom {
  TangentVec dir;  ///< unit
  double weight;   ///< > 0
};

/// Finitely supported probability measure on the unit sphere S^15.
struct DiscreteMeasure {
  std::vector<Atom> atoms;

  /// Normalizes directions and weights. Throws std::invalid_argument on an
  /// empty list, a non-positive weight, or a zero direction.
  static DiscreteMeasure from_atoms(std::vector<Atom> atoms);
};

/// Plain text, one atom per line: "w x1 ... x16". Blank lines and text after
/// '#' are ignored. Weights and directions are normalized on load.
DiscreteMeasure load_measure(const std::filesystem::path& path);
DiscreteMeasure parse_measure(std::string_view text);
void save_measure(const DiscreteMeasure& m, const std::filesystem::path& path);

/// H = sum w v v^T and Hhat = sum w P_Cay(v), both 16x16. tr H = 1 and
/// tr Hhat = 8.
struct FormPair {
  Matrix h;
  Matrix hhat;
};

FormPair build_forms(const DiscreteMeasure& m);

/// H and Hhat - H in an orthonormal basis adapted to the eigenspaces of Hhat:
///   H = [[A, C], [C^T, B]],  Hhat = diag(lambda Id_8, mu Id_8).
/// A and B are diagonal (stored as their diagonals, descending).
struct BlockForm {
  std::array<double, 8> a{};
  std::array<double, 8> b{};
  Matrix c{8, 8};
  double lambda = 0.5;
  double mu = 0.5;
  /// 16x16 orthogonal matrix whose columns are the adapted basis (empty for
  /// forms that were not produced by block_reduce).
  Matrix basis;
  /// Factor applied to the eigenvalues of Hhat so that lambda + mu = 1.
  double hhat_scale = 1.0;

  Matrix a_mat() const;
  Matrix b_mat() const;
  /// [[A, C], [C^T, B]]
  Matrix h() const;
  /// diag(lambda Id, mu Id)
  Matrix hhat() const;
};

struct BlockDefect {
  double trace_a = 0.0;        ///< |tr A - lambda|
  double trace_b = 0.0;        ///< |tr B - mu|
  double mass = 0.0;           ///< |lambda + mu - 1|
  double min_eig_h = 0.0;      ///< smallest eigenvalue of H
  double min_eig_gap = 0.0;    ///< smallest eigenvalue of Hhat - H
};
BlockDefect block_defect(const BlockForm& bf);
/// Trace defects <= 1e-8 and both blocks PSD to -1e-9.
bool admissible(const BlockForm& bf);

/// Reduces a FormPair to block shape. Throws std::domain_error if the
/// spectrum of Hhat does not split into two clusters of eight (relative
/// tolerance 1e-9).
BlockForm block_reduce(const FormPair& fp, JacobiOptions opts = {});

/// n_atoms uniform directions on S^15 with Dirichlet(1) weights. Throws
/// std::invalid_argument for n_atoms == 0.
DiscreteMeasure sample_measure(std::uint64_t seed, std::size_t n_atoms);

class Rng;

struct BlockSampleOptions {
  /// Dirichlet concentration of the block spectra, log-uniform in this range.
  double concentration_lo = 0.05;
  double concentration_hi = 20.0;
  /// Probability of C = 0.
  double zero_coupling = 0.1;
  /// C is scaled to u^p times the largest admissible size, u uniform.
  double coupling_power = 0.3;
};

/// Random admissible BlockForm with lambda in [1/2, 1), mu = 1 - lambda.
/// The coupling has the shape diag(sqrt(a(lambda - a))) G diag(sqrt(b(mu - b)))
/// for Gaussian G, scaled so that H and Hhat - H stay PSD.
BlockForm sample_blockform(Rng& rng, const BlockSampleOptions& opts = {});

}  // namespace cayley
