#include "cayley/cayley_lines.hpp"

#include <cmath>
#include <stdexcept>

namespace cayley {
namespace {

CayleyLine make_line(bool second_chart, const Octonion& coef) {
  CayleyLine line;
  line.second_chart = second_chart;
  line.coef = coef;
  for (std::size_t t = 0; t < 8; ++t) line.frame[t] = line.embed(Octonion::unit(t));

  // The chart is already isometric; one modified Gram-Schmidt pass removes
  // the rounding left over from the products.
  for (std::size_t t = 0; t < 8; ++t) {
    for (std::size_t s = 0; s < t; ++s) line.frame[t] -= line.frame[s] * inner(line.frame[s], line.frame[t]);
    line.frame[t] = normalized(line.frame[t]);
  }
  return line;
}

}  // namespace

TangentVec CayleyLine::embed(const Octonion& x) const {
  const double k = 1.0 / std::sqrt(1.0 + coef.norm2());
  if (second_chart) return TangentVec{(x * coef) * k, x * k};
  return TangentVec{x * k, (x * coef) * k};
}

Octonion CayleyLine::coordinates(const TangentVec& w) const {
  Octonion x;
  for (std::size_t t = 0; t < 8; ++t) x[t] = inner(frame[t], w);
  return x;
}

Matrix CayleyLine::frame_matrix() const {
  Matrix f(16, 8);
  for (std::size_t t = 0; t < 8; ++t) {
    const Vec16 col = frame[t].to_array();
    for (std::size_t r = 0; r < 16; ++r) f(r, t) = col[r];
  }
  return f;
}

CayleyLine cay_line(const TangentVec& v) {
  if (!(v.norm() > 1e-12)) throw std::invalid_argument("cay_line: zero vector has no Cayley line");
  if (v.u.norm2() >= v.v.norm2()) return make_line(false, inverse(v.u) * v.v);
  return make_line(true, inverse(v.v) * v.u);
}

Matrix proj_cay(const CayleyLine& line) {
  Matrix p(16, 16);
  for (const TangentVec& f : line.frame) p.add_outer(f.to_array(), 1.0);
  return p;
}

Matrix proj_cay(const TangentVec& v) { return proj_cay(cay_line(v)); }

CayleyLine complement_line(const TangentVec& v) {
  const CayleyLine line = cay_line(v);
  // {(x, xc)}^perp = {(-x conj(c), x)} and {(xd, x)}^perp = {(x, -x conj(d))}.
  return make_line(!line.second_chart, -line.coef.conj());
}

double frame_orthonormality_defect(const CayleyLine& line) {
  double m = 0.0;
  for (std::size_t s = 0; s < 8; ++s)
    for (std::size_t t = 0; t < 8; ++t)
      m = std::max(m, std::abs(inner(line.frame[s], line.frame[t]) - (s == t ? 1.0 : 0.0)));
  return m;
}

std::array<Matrix, 8> j_maps(const TangentVec& v) {
  if (std::abs(v.norm() - 1.0) > 1e-9) throw std::invalid_argument("j_maps: v must be a unit vector");
  const CayleyLine line = cay_line(v);
  const Matrix f = line.frame_matrix();
  std::array<Matrix, 8> out;
  for (std::size_t t = 0; t < 8; ++t) {
    // 8x8 matrix of x -> e_t x in the standard basis.
    Matrix left(8, 8);
    const Octonion et = Octonion::unit(t);
    for (std::size_t k = 0; k < 8; ++k) {
      const Octonion col = et * Octonion::unit(k);
      for (std::size_t r = 0; r < 8; ++r) left(r, k) = col[r];
    }
    out[t] = f * left * f.transpose();
  }
  return out;
}

TangentVec j_apply(const CayleyLine& line, const Octonion& x, const TangentVec& w) {
  return line.embed(x * line.coordinates(w));
}

double line_residual(const CayleyLine& line, const TangentVec& w) {
  TangentVec r = w;
  for (const TangentVec& f : line.frame) r -= f * inner(f, w);
  return r.norm();
}

AssociatorWitness no_global_j_witness() {
  AssociatorWitness best;
  for (int i = 0; i < 8; ++i)
    for (int j = 0; j < 8; ++j)
      for (int k = 0; k < 8; ++k) {
        const Octonion a = Octonion::unit(i), b = Octonion::unit(j), c = Octonion::unit(k);
        const double n = associator(a, b, c).norm();
        if (n > best.norm) best = AssociatorWitness{a, b, c, {i, j, k}, n};
      }
  return best;
}

}  // namespace cayley
