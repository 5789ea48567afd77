#include "cayley/octonion.hpp"

#include <cmath>
#include <ostream>
#include <stdexcept>

namespace cayley {
namespace {

using Quat = std::array<double, 4>;

Quat qmul(const Quat& a, const Quat& b) {
  return {a[0] * b[0] - a[1] * b[1] - a[2] * b[2] - a[3] * b[3],
          a[0] * b[1] + a[1] * b[0] + a[2] * b[3] - a[3] * b[2],
          a[0] * b[2] - a[1] * b[3] + a[2] * b[0] + a[3] * b[1],
          a[0] * b[3] + a[1] * b[2] - a[2] * b[1] + a[3] * b[0]};
}

Quat qconj(const Quat& a) { return {a[0], -a[1], -a[2], -a[3]}; }

}  // namespace

Octonion Octonion::unit(std::size_t i) {
  if (i >= kDim) throw std::out_of_range("octonion basis index out of range");
  Octonion x;
  x.c_[i] = 1.0;
  return x;
}

Octonion Octonion::im() const {
  Octonion x = *this;
  x.c_[0] = 0.0;
  return x;
}

Octonion Octonion::conj() const {
  Octonion x;
  x.c_[0] = c_[0];
  for (std::size_t i = 1; i < kDim; ++i) x.c_[i] = -c_[i];
  return x;
}

double Octonion::norm2() const {
  double s = 0.0;
  for (double v : c_) s += v * v;
  return s;
}

double Octonion::norm() const { return std::sqrt(norm2()); }

Octonion& Octonion::operator+=(const Octonion& o) {
  for (std::size_t i = 0; i < kDim; ++i) c_[i] += o.c_[i];
  return *this;
}

Octonion& Octonion::operator-=(const Octonion& o) {
  for (std::size_t i = 0; i < kDim; ++i) c_[i] -= o.c_[i];
  return *this;
}

Octonion& Octonion::operator*=(double s) {
  for (double& v : c_) v *= s;
  return *this;
}

Octonion& Octonion::operator/=(double s) {
  for (double& v : c_) v /= s;
  return *this;
}

Octonion operator+(Octonion a, const Octonion& b) { return a += b; }
Octonion operator-(Octonion a, const Octonion& b) { return a -= b; }
Octonion operator-(const Octonion& a) { return a * -1.0; }
Octonion operator*(Octonion a, double s) { return a *= s; }
Octonion operator*(double s, Octonion a) { return a *= s; }
Octonion operator/(Octonion a, double s) { return a /= s; }

Octonion operator*(const Octonion& x, const Octonion& y) {
  const Quat a{x[0], x[1], x[2], x[3]};
  const Quat b{x[4], x[5], x[6], x[7]};
  const Quat c{y[0], y[1], y[2], y[3]};
  const Quat d{y[4], y[5], y[6], y[7]};

  const Quat ac = qmul(a, c);
  const Quat dbar_b = qmul(qconj(d), b);
  const Quat da = qmul(d, a);
  const Quat b_cbar = qmul(b, qconj(c));

  Octonion z;
  for (std::size_t i = 0; i < 4; ++i) {
    z[i] = ac[i] - dbar_b[i];
    z[i + 4] = da[i] + b_cbar[i];
  }
  return z;
}

double inner(const Octonion& x, const Octonion& y) {
  double s = 0.0;
  for (std::size_t i = 0; i < Octonion::kDim; ++i) s += x[i] * y[i];
  return s;
}

Octonion inverse(const Octonion& x) {
  const double n2 = x.norm2();
  if (std::sqrt(n2) < 1e-300) throw std::domain_error("octonion inverse: division by zero");
  return x.conj() / n2;
}

Octonion associator(const Octonion& a, const Octonion& b, const Octonion& c) {
  return (a * b) * c - a * (b * c);
}

double max_abs_diff(const Octonion& x, const Octonion& y) {
  double m = 0.0;
  for (std::size_t i = 0; i < Octonion::kDim; ++i) m = std::max(m, std::abs(x[i] - y[i]));
  return m;
}

std::ostream& operator<<(std::ostream& os, const Octonion& x) {
  os << '(';
  for (std::size_t i = 0; i < Octonion::kDim; ++i) {
    if (i) os << ", ";
    os << x[i];
  }
  return os << ')';
}

}  // namespace cayley
