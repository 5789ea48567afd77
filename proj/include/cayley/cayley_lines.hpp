#pragma once

#include <array>

#include "cayley/cayley_space.hpp"
#include "cayley/linalg.hpp"
#include "cayley/octonion.hpp"

namespace cayley {

/// The Cayley line through a nonzero (a, b): the 8-dimensional subspace
/// O.(1, a^{-1} b) = {(x, x a^{-1} b)}, or O.(0, 1) when a = 0.
///
/// frame[t] = phi(e_t), where phi : O -> line is the isometric chart
///   phi(x) = (x, x c) / sqrt(1 + |c|^2),   c = a^{-1} b   if |a| >= |b|
///   phi(x) = (x d, x) / sqrt(1 + |d|^2),   d = b^{-1} a   otherwise.
/// Both charts describe the same set; the choice only avoids dividing by the
/// smaller component.
struct CayleyLine {
  std::array<TangentVec, 8> frame;
  bool second_chart = false;  ///< true when parametrized as (x d, x)
  Octonion coef;              ///< c (first chart) or d (second chart)

  /// phi(x)
  TangentVec embed(const Octonion& x) const;
  /// phi^{-1}(orthogonal projection of w onto the line)
  Octonion coordinates(const TangentVec& w) const;
  /// 16x8 matrix with the frame as columns.
  Matrix frame_matrix() const;
};

/// Throws std::invalid_argument when |v| <= 1e-12.
CayleyLine cay_line(const TangentVec& v);

/// Orthogonal projector onto cay_line(v), 16x16.
Matrix proj_cay(const TangentVec& v);
Matrix proj_cay(const CayleyLine& line);

/// The Cayley line orthogonal to cay_line(v): O.(-conj(c), 1) in the first
/// chart, O.(1, -conj(d)) in the second.
CayleyLine complement_line(const TangentVec& v);

/// Largest Gram-matrix deviation from the identity of the frame.
double frame_orthonormality_defect(const CayleyLine& line);

/// J_t = phi o L_{e_t} o phi^{-1} on cay_line(v), extended by 0 on the
/// orthogonal complement; returned as 16x16 matrices. J_0 is the projector.
/// Throws std::invalid_argument unless | |v| - 1 | <= 1e-9.
std::array<Matrix, 8> j_maps(const TangentVec& v);

/// J_x applied to a vector of the line: phi(x phi^{-1}(w)).
TangentVec j_apply(const CayleyLine& line, const Octonion& x, const TangentVec& w);

/// Distance from w to the span of the line (Euclidean residual).
double line_residual(const CayleyLine& line, const TangentVec& w);

struct AssociatorWitness {
  Octonion a, b, c;
  std::array<int, 3> indices{};
  double norm = 0.0;  ///< |(ab)c - a(bc)|
};

/// Scans all basis triples (e_i, e_j, e_k) in lexicographic order and returns
/// the first one whose associator has maximal norm.
AssociatorWitness no_global_j_witness();

}  // namespace cayley
