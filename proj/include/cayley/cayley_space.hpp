#pragma once

#include <array>
#include <span>

#include "cayley/linalg.hpp"
#include "cayley/octonion.hpp"

namespace cayley {

using Vec16 = std::array<double, 16>;

/// A pair (u, v) in O^2 = R^16, read as a tangent vector at the base point
/// through the normal-coordinate chart. Coordinates 0..7 are u, 8..15 are v.
struct TangentVec {
  Octonion u;
  Octonion v;

  static TangentVec from_array(std::span<const double> x);
  Vec16 to_array() const;

  double norm2() const { return u.norm2() + v.norm2(); }
  double norm() const;

  TangentVec& operator+=(const TangentVec& o);
  TangentVec& operator-=(const TangentVec& o);
  TangentVec& operator*=(double s);
};

TangentVec operator+(TangentVec a, const TangentVec& b);
TangentVec operator-(TangentVec a, const TangentVec& b);
TangentVec operator*(TangentVec a, double s);
TangentVec operator*(double s, TangentVec a);
double inner(const TangentVec& x, const TangentVec& y);
/// x / |x|; throws std::invalid_argument for |x| <= 1e-12.
TangentVec normalized(const TangentVec& x);

/// Vector model: theta^2 - |a|^2 - |b|^2 = 1, theta >= 1.
struct PointVec {
  double theta = 1.0;
  Octonion a;
  Octonion b;

  /// theta^2 - |a|^2 - |b|^2 - 1
  double defect() const;
};

/// 3x3 octonionic matrix. Points of the matrix model are the trace-one
/// idempotents X with I X^* I = X, X_11 > 0, I = diag(1, -1, -1).
struct OctMatrix3 {
  std::array<Octonion, 9> e{};

  Octonion& operator()(int i, int j) { return e[3 * i + j]; }
  const Octonion& operator()(int i, int j) const { return e[3 * i + j]; }
};
using PointMat = OctMatrix3;

OctMatrix3 operator*(const OctMatrix3& x, const OctMatrix3& y);
OctMatrix3 operator+(const OctMatrix3& x, const OctMatrix3& y);
OctMatrix3 operator-(const OctMatrix3& x, const OctMatrix3& y);
/// Entrywise conjugate transpose.
OctMatrix3 adjoint(const OctMatrix3& x);
double max_abs_diff(const OctMatrix3& x, const OctMatrix3& y);

/// Ideal boundary point, given by the unit initial direction of the ray from
/// the base point.
struct BoundaryPoint {
  TangentVec dir;

  /// Normalizes `d`; throws std::invalid_argument if d is (numerically) zero.
  static BoundaryPoint from_direction(const TangentVec& d);
};

PointVec base_point();

/// X_ij = s_i conj(v_i) v_j with v = (theta, a, b), s = (1, -1, -1).
PointMat vec_to_mat(const PointVec& p);

struct MembershipDefect {
  double hermitian = 0.0;    ///< |I X^* I - X|
  double idempotent = 0.0;   ///< |X^2 - X|
  double trace = 0.0;        ///< |tr X - 1|
  double corner = 0.0;       ///< max(0, 1 - X_11)
  double max() const;
};
MembershipDefect membership_defect(const PointMat& x);

/// Inverse of vec_to_mat. Throws std::domain_error when the membership
/// defect exceeds 1e-8.
PointVec mat_to_vec(const PointMat& x);

/// (XY + YX) / 2.
OctMatrix3 jordan(const OctMatrix3& x, const OctMatrix3& y);
/// Real part of the trace.
double real_trace(const OctMatrix3& x);
/// Re tr(X o Y), computed without forming the product.
double real_trace_jordan(const OctMatrix3& x, const OctMatrix3& y);

/// cosh(2d) = tr(XY + YX) - 1. Arguments within 1e-9 below 1 are clamped;
/// anything lower throws std::domain_error.
double distance(const PointMat& x, const PointMat& y);
double distance(const PointVec& x, const PointVec& y);

/// (cosh t, a sinh t, b sinh t) for v = (a, b). Throws std::invalid_argument
/// when | |v| - 1 | > 1e-9.
PointVec geodesic(const TangentVec& v, double t);

/// chi(w) = geodesic(w/|w|, |w|), chi(0) = base point.
PointVec normal_coords(const TangentVec& w);
/// chi^{-1}.
TangentVec inverse_normal_coords(const PointVec& p);
/// 17x16 Jacobian of chi at w, in (theta, a, b) coordinates.
Matrix normal_coords_jacobian(const TangentVec& w);

/// Riemannian metric of the space written in normal coordinates at w.
/// Identity at w = 0.
Matrix metric_in_normal_coords(const TangentVec& w);

struct HingeCosine {
  double trace_form;    ///< cosh(2d) from the matrix model
  double closed_form;   ///< cosh 2t1 cosh 2t2 - sinh 2t1 sinh 2t2 <J_b v, J_c v>
};

/// Two rays from the base point along J_b v and J_c v (left multiplication
/// transported into the Cayley line of v), lengths t1, t2. Both values of
/// cosh(2d) are returned. Throws std::invalid_argument for t outside (0, 15]
/// and std::runtime_error if the two values differ by more than 1e-8
/// relative.
HingeCosine hinge_cosine_cayley(const Octonion& b, const Octonion& c, const TangentVec& v, double t1,
                                double t2);

/// Closed form B(x) = 1/2 ln Re tr(X o N), N = I n^* n with n = (1, dir).
double busemann(const PointVec& x, const BoundaryPoint& theta);
/// d(x, gamma_theta(t)) - t.
double busemann_limit(const PointVec& x, const BoundaryPoint& theta, double t = 20.0);
/// Differential of B o chi at w = chi^{-1}(x), as a coordinate covector.
Vec16 busemann_covector(const PointVec& x, const BoundaryPoint& theta);
/// Riemannian gradient of B at x in the normal coordinates of x0; unit in
/// the metric of metric_in_normal_coords. Equal to -dir at the base point.
TangentVec busemann_grad(const PointVec& x, const BoundaryPoint& theta);
/// Hess B at the base point: Id - 2 d d^T + P_Cay(d), d = -dir.
Matrix busemann_hessian(const BoundaryPoint& theta);

}  // namespace cayley
