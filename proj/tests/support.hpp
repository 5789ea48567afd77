#pragma once

#include <cmath>

#include "cayley/boundary_forms.hpp"
#include "cayley/cayley_space.hpp"
#include "cayley/linalg.hpp"
#include "cayley/random.hpp"

namespace cayley::test {

inline TangentVec random_unit(Rng& rng) {
  return normalized(TangentVec{rng.normal_octonion(), rng.normal_octonion()});
}

inline double dist(const Octonion& x, const Octonion& y) { return (x - y).norm(); }

/// +-e_k for k = 0..15, equal weights: H = Id/16, the equality case.
inline DiscreteMeasure uniform_fixture() {
  std::vector<Atom> atoms;
  for (std::size_t k = 0; k < 16; ++k)
    for (double s : {1.0, -1.0}) {
      Vec16 d{};
      d[k] = s;
      atoms.push_back(Atom{TangentVec::from_array(d), 1.0});
    }
  return DiscreteMeasure::from_atoms(std::move(atoms));
}

/// Haar-ish orthogonal n x n matrix: eigenvectors of a Gaussian symmetric
/// matrix.
inline Matrix random_orthogonal(Rng& rng, std::size_t n) {
  Matrix g(n, n);
  for (double& x : g.data()) x = rng.normal();
  return eigen_sym((g + g.transpose()) * 0.5).vectors;
}

}  // namespace cayley::test
