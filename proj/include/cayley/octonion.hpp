#pragma once

#include <array>
#include <cstddef>
#include <iosfwd>

namespace cayley {

/// Real octonion x = x0 e0 + x1 e1 + ... + x7 e7 with e0 = 1.
///
/// The product is the Cayley-Dickson double of Hamilton's quaternions:
/// writing x = (p, q) with p = (x0..x3), q = (x4..x7),
///
///     (a, b)(c, d) = (ac - conj(d) b, d a + b conj(c)).
///
/// The resulting e_i e_j table is written out in docs/multiplication_table.md.
class Octonion {
 public:
  static constexpr std::size_t kDim = 8;

  constexpr Octonion() = default;
  constexpr explicit Octonion(const std::array<double, kDim>& coords) : c_(coords) {}

  static constexpr Octonion real(double r) {
    Octonion x;
    x.c_[0] = r;
    return x;
  }

  /// Standard basis element e_i, 0 <= i < 8.
  static Octonion unit(std::size_t i);

  constexpr double operator[](std::size_t i) const { return c_[i]; }
  constexpr double& operator[](std::size_t i) { return c_[i]; }
  constexpr const std::array<double, kDim>& coords() const { return c_; }

  constexpr double re() const { return c_[0]; }
  Octonion im() const;

  Octonion conj() const;
  double norm2() const;
  double norm() const;

  Octonion& operator+=(const Octonion& o);
  Octonion& operator-=(const Octonion& o);
  Octonion& operator*=(double s);
  Octonion& operator/=(double s);

  friend bool operator==(const Octonion&, const Octonion&) = default;

 private:
  std::array<double, kDim> c_{};
};

Octonion operator+(Octonion a, const Octonion& b);
Octonion operator-(Octonion a, const Octonion& b);
Octonion operator-(const Octonion& a);
Octonion operator*(Octonion a, double s);
Octonion operator*(double s, Octonion a);
Octonion operator/(Octonion a, double s);

/// Octonion product (non-associative, non-commutative).
Octonion operator*(const Octonion& x, const Octonion& y);
inline Octonion mul(const Octonion& x, const Octonion& y) { return x * y; }

inline Octonion conj(const Octonion& x) { return x.conj(); }

/// Euclidean inner product of the coordinate vectors.
double inner(const Octonion& x, const Octonion& y);

/// conj(x)/|x|^2. Throws std::domain_error when |x| < 1e-300.
Octonion inverse(const Octonion& x);

/// (ab)c - a(bc).
Octonion associator(const Octonion& a, const Octonion& b, const Octonion& c);

/// Largest absolute coordinate difference.
double max_abs_diff(const Octonion& x, const Octonion& y);

std::ostream& operator<<(std::ostream& os, const Octonion& x);

}  // namespace cayley
