#include "cayley/cayley_space.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "cayley/cayley_lines.hpp"

namespace cayley {

TangentVec TangentVec::from_array(std::span<const double> x) {
  if (x.size() != 16) throw std::invalid_argument("TangentVec needs 16 coordinates");
  TangentVec t;
  for (std::size_t i = 0; i < 8; ++i) {
    t.u[i] = x[i];
    t.v[i] = x[8 + i];
  }
  return t;
}

Vec16 TangentVec::to_array() const {
  Vec16 x{};
  for (std::size_t i = 0; i < 8; ++i) {
    x[i] = u[i];
    x[8 + i] = v[i];
  }
  return x;
}

double TangentVec::norm() const { return std::sqrt(norm2()); }

TangentVec& TangentVec::operator+=(const TangentVec& o) {
  u += o.u;
  v += o.v;
  return *this;
}

TangentVec& TangentVec::operator-=(const TangentVec& o) {
  u -= o.u;
  v -= o.v;
  return *this;
}

TangentVec& TangentVec::operator*=(double s) {
  u *= s;
  v *= s;
  return *this;
}

TangentVec operator+(TangentVec a, const TangentVec& b) { return a += b; }
TangentVec operator-(TangentVec a, const TangentVec& b) { return a -= b; }
TangentVec operator*(TangentVec a, double s) { return a *= s; }
TangentVec operator*(double s, TangentVec a) { return a *= s; }

double inner(const TangentVec& x, const TangentVec& y) { return inner(x.u, y.u) + inner(x.v, y.v); }

TangentVec normalized(const TangentVec& x) {
  const double n = x.norm();
  if (!(n > 1e-12)) throw std::invalid_argument("cannot normalize a zero tangent vector");
  return x * (1.0 / n);
}

double PointVec::defect() const { return theta * theta - a.norm2() - b.norm2() - 1.0; }

OctMatrix3 operator*(const OctMatrix3& x, const OctMatrix3& y) {
  OctMatrix3 z;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k) z(i, j) += x(i, k) * y(k, j);
  return z;
}

OctMatrix3 operator+(const OctMatrix3& x, const OctMatrix3& y) {
  OctMatrix3 z;
  for (std::size_t i = 0; i < 9; ++i) z.e[i] = x.e[i] + y.e[i];
  return z;
}

OctMatrix3 operator-(const OctMatrix3& x, const OctMatrix3& y) {
  OctMatrix3 z;
  for (std::size_t i = 0; i < 9; ++i) z.e[i] = x.e[i] - y.e[i];
  return z;
}

OctMatrix3 adjoint(const OctMatrix3& x) {
  OctMatrix3 z;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) z(i, j) = x(j, i).conj();
  return z;
}

double max_abs_diff(const OctMatrix3& x, const OctMatrix3& y) {
  double m = 0.0;
  for (std::size_t i = 0; i < 9; ++i) m = std::max(m, max_abs_diff(x.e[i], y.e[i]));
  return m;
}

BoundaryPoint BoundaryPoint::from_direction(const TangentVec& d) { return BoundaryPoint{normalized(d)}; }

PointVec base_point() { return PointVec{1.0, Octonion{}, Octonion{}}; }

namespace {

constexpr std::array<double, 3> kSign{1.0, -1.0, -1.0};

// I_{1,2} v^* v for any v = (theta, a, b); theta need not satisfy the
// hyperboloid equation.
OctMatrix3 outer_form(double theta, const Octonion& a, const Octonion& b) {
  const std::array<Octonion, 3> v{Octonion::real(theta), a, b};
  OctMatrix3 x;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) x(i, j) = kSign[i] * (v[i].conj() * v[j]);
  return x;
}

OctMatrix3 outer_form(std::span<const double> w17) {
  Octonion a, b;
  for (std::size_t i = 0; i < 8; ++i) {
    a[i] = w17[1 + i];
    b[i] = w17[9 + i];
  }
  return outer_form(w17[0], a, b);
}

// Re(xy) = x0 y0 - sum_{i>0} x_i y_i.
double re_mul(const Octonion& x, const Octonion& y) {
  double s = x[0] * y[0];
  for (std::size_t i = 1; i < Octonion::kDim; ++i) s -= x[i] * y[i];
  return s;
}

std::array<double, 17> to17(const PointVec& p) {
  std::array<double, 17> w{};
  w[0] = p.theta;
  for (std::size_t i = 0; i < 8; ++i) {
    w[1 + i] = p.a[i];
    w[9 + i] = p.b[i];
  }
  return w;
}

// Symmetric 17x17 matrix of the quadratic form w -> Re tr(X o I w^* w).
Matrix polarize(const OctMatrix3& x) {
  constexpr std::size_t n = 17;
  std::array<double, n> w{};
  auto q = [&]() { return real_trace_jordan(x, outer_form(w)); };
  std::array<double, n> diag{};
  for (std::size_t i = 0; i < n; ++i) {
    w.fill(0.0);
    w[i] = 1.0;
    diag[i] = q();
  }
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    m(i, i) = diag[i];
    for (std::size_t j = i + 1; j < n; ++j) {
      w.fill(0.0);
      w[i] = 1.0;
      w[j] = 1.0;
      const double off = 0.5 * (q() - diag[i] - diag[j]);
      m(i, j) = off;
      m(j, i) = off;
    }
  }
  return m;
}

// sinh(r)/r
double sinhc(double r) {
  if (r < 1e-4) return 1.0 + r * r / 6.0;
  return std::sinh(r) / r;
}

// (r cosh r - sinh r) / r^3
double sinhc_slope(double r) {
  if (r < 0.1) {
    const double r2 = r * r;
    return 1.0 / 3.0 + r2 / 30.0 + r2 * r2 / 840.0 + r2 * r2 * r2 / 45360.0;
  }
  return (r * std::cosh(r) - std::sinh(r)) / (r * r * r);
}

// cosh(2d) - 1, clamped at 0.
double clamp_acosh_excess(double q) {
  if (q < -1e-9) throw std::domain_error("distance: arccosh argument below 1");
  return std::max(q, 0.0);
}

}  // namespace

PointMat vec_to_mat(const PointVec& p) { return outer_form(p.theta, p.a, p.b); }

double MembershipDefect::max() const { return std::max({hermitian, idempotent, trace, corner}); }

MembershipDefect membership_defect(const PointMat& x) {
  OctMatrix3 conj_x = adjoint(x);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) conj_x(i, j) *= kSign[i] * kSign[j];
  MembershipDefect d;
  d.hermitian = max_abs_diff(conj_x, x);
  d.idempotent = max_abs_diff(x * x, x);
  d.trace = std::abs(real_trace(x) - 1.0);
  for (int i = 0; i < 3; ++i) d.trace = std::max(d.trace, x(i, i).im().norm());
  d.corner = std::max(0.0, 1.0 - x(0, 0).re());
  return d;
}

PointVec mat_to_vec(const PointMat& x) {
  const MembershipDefect d = membership_defect(x);
  // Entries grow like cosh^2 of the distance to x0; compare relatively.
  const double scale = std::max(1.0, x(0, 0).re());
  if (d.max() > 1e-8 * scale)
    throw std::domain_error("mat_to_vec: matrix is not a point of the matrix model");
  PointVec p;
  p.theta = std::sqrt(x(0, 0).re());
  p.a = x(0, 1) / p.theta;
  p.b = x(0, 2) / p.theta;
  return p;
}

OctMatrix3 jordan(const OctMatrix3& x, const OctMatrix3& y) {
  OctMatrix3 z = x * y + y * x;
  for (auto& e : z.e) e *= 0.5;
  return z;
}

double real_trace(const OctMatrix3& x) { return x(0, 0).re() + x(1, 1).re() + x(2, 2).re(); }

double real_trace_jordan(const OctMatrix3& x, const OctMatrix3& y) {
  // Re(ab) = Re(ba), so Re tr(XY) = Re tr(YX) = Re tr(X o Y).
  double s = 0.0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) s += re_mul(x(i, j), y(j, i));
  return s;
}

double distance(const PointMat& x, const PointMat& y) {
  const double c = 2.0 * real_trace_jordan(x, y) - 1.0;
  if (c > 3.0) return 0.5 * std::acosh(c);
  // Near the diagonal: tr X^2 = tr Y^2 = 1 gives cosh(2d) - 1 = -Re tr((Y - X)^2)
  // = 2 sinh(d)^2, which keeps d(x, x) = 0 and full accuracy for nearby points.
  // (Far apart the product form is better: its error is eps |X| |Y|, not eps |Y|^2.)
  const OctMatrix3 diff = y - x;
  return std::asinh(std::sqrt(0.5 * clamp_acosh_excess(-real_trace_jordan(diff, diff))));
}

double distance(const PointVec& x, const PointVec& y) { return distance(vec_to_mat(x), vec_to_mat(y)); }

PointVec geodesic(const TangentVec& v, double t) {
  if (std::abs(v.norm() - 1.0) > 1e-9) throw std::invalid_argument("geodesic: direction must be a unit vector");
  const double s = std::sinh(t);
  return PointVec{std::cosh(t), v.u * s, v.v * s};
}

PointVec normal_coords(const TangentVec& w) {
  const double r = w.norm();
  const double s = sinhc(r);
  return PointVec{std::cosh(r), w.u * s, w.v * s};
}

TangentVec inverse_normal_coords(const PointVec& p) {
  const double sh = std::sqrt(p.a.norm2() + p.b.norm2());
  const double r = std::asinh(sh);
  const double k = 1.0 / sinhc(r);
  return TangentVec{p.a * k, p.b * k};
}

Matrix normal_coords_jacobian(const TangentVec& w) {
  const double r = w.norm();
  const double s = sinhc(r);
  const double g = sinhc_slope(r);
  const Vec16 x = w.to_array();
  Matrix j(17, 16);
  for (std::size_t c = 0; c < 16; ++c) {
    j(0, c) = s * x[c];
    for (std::size_t k = 0; k < 16; ++k) j(1 + k, c) = g * x[k] * x[c];
    j(1 + c, c) += s;
  }
  return j;
}

Matrix metric_in_normal_coords(const TangentVec& w) {
  const PointVec p = normal_coords(w);
  Matrix q = polarize(vec_to_mat(p));
  // Subtract the Minkowski form diag(1, -1, ..., -1).
  q(0, 0) -= 1.0;
  for (std::size_t i = 1; i < 17; ++i) q(i, i) += 1.0;
  const Matrix dchi = normal_coords_jacobian(w);
  return (dchi.transpose() * q * dchi).symmetrized();
}

HingeCosine hinge_cosine_cayley(const Octonion& b, const Octonion& c, const TangentVec& v, double t1,
                                double t2) {
  if (!(t1 > 0.0 && t1 <= 15.0 && t2 > 0.0 && t2 <= 15.0))
    throw std::invalid_argument("hinge_cosine_cayley: t1, t2 must lie in (0, 15]");
  if (std::abs(b.norm() - 1.0) > 1e-9 || std::abs(c.norm() - 1.0) > 1e-9)
    throw std::invalid_argument("hinge_cosine_cayley: b and c must be unit octonions");
  const CayleyLine line = cay_line(v);
  const TangentVec rb = j_apply(line, b, v);
  const TangentVec rc = j_apply(line, c, v);

  HingeCosine h;
  h.trace_form =
      2.0 * real_trace_jordan(vec_to_mat(geodesic(rb, t1)), vec_to_mat(geodesic(rc, t2))) - 1.0;
  // cosh 2t1 cosh 2t2 - sinh 2t1 sinh 2t2 cos w
  //   = cosh 2(t1 - t2) + sinh 2t1 sinh 2t2 (1 - cos w), 1 - cos w = |rb - rc|^2 / 2.
  h.closed_form =
      std::cosh(2.0 * (t1 - t2)) + std::sinh(2.0 * t1) * std::sinh(2.0 * t2) * 0.5 * (rb - rc).norm2();
  if (std::abs(h.trace_form - h.closed_form) > 1e-8 * std::abs(h.closed_form))
    throw std::runtime_error("hinge_cosine_cayley: trace and closed form disagree");
  return h;
}

double busemann(const PointVec& x, const BoundaryPoint& theta) {
  const OctMatrix3 n = outer_form(1.0, theta.dir.u, theta.dir.v);
  return 0.5 * std::log(real_trace_jordan(vec_to_mat(x), n));
}

double busemann_limit(const PointVec& x, const BoundaryPoint& theta, double t) {
  return distance(x, geodesic(theta.dir, t)) - t;
}

Vec16 busemann_covector(const PointVec& x, const BoundaryPoint& theta) {
  const TangentVec w = inverse_normal_coords(x);
  const auto v = to17(normal_coords(w));
  const Matrix nmat = polarize(outer_form(1.0, theta.dir.u, theta.dir.v));
  const std::vector<double> nv = nmat * std::span<const double>(v);
  const double n = dot(v, nv);
  const std::vector<double> g = normal_coords_jacobian(w).transpose() * std::span<const double>(nv);
  Vec16 out{};
  for (std::size_t i = 0; i < 16; ++i) out[i] = g[i] / n;
  return out;
}

TangentVec busemann_grad(const PointVec& x, const BoundaryPoint& theta) {
  const Vec16 cov = busemann_covector(x, theta);
  const Matrix g = metric_in_normal_coords(inverse_normal_coords(x));
  return TangentVec::from_array(solve_spd(g, cov));
}

Matrix busemann_hessian(const BoundaryPoint& theta) {
  const Vec16 d = theta.dir.to_array();
  Matrix h = Matrix::identity(16);
  h.add_outer(d, -2.0);
  h += proj_cay(theta.dir);
  return h.symmetrized();
}

}  // namespace cayley
