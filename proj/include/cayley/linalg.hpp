#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

namespace cayley {

/// Small dense row-major matrix. Dimensions in this project never exceed 17.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  static Matrix identity(std::size_t n);
  static Matrix diagonal(std::span<const double> d);
  /// u v^T
  static Matrix outer(std::span<const double> u, std::span<const double> v);
  /// Matrix whose columns are the given vectors (all of equal length).
  static Matrix from_columns(const std::vector<std::vector<double>>& cols);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool square() const { return rows_ == cols_; }

  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<double> data() { return data_; }
  std::span<const double> data() const { return data_; }

  std::vector<double> column(std::size_t c) const;
  std::vector<double> diag() const;
  Matrix transpose() const;
  Matrix block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const;
  void set_block(std::size_t r0, std::size_t c0, const Matrix& m);
  double trace() const;
  double max_abs() const;
  double frobenius() const;
  /// (M + M^T)/2
  Matrix symmetrized() const;

  Matrix& operator+=(const Matrix& o);
  Matrix& operator-=(const Matrix& o);
  Matrix& operator*=(double s);
  /// this += s * u u^T
  void add_outer(std::span<const double> u, double s);

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

Matrix operator+(Matrix a, const Matrix& b);
Matrix operator-(Matrix a, const Matrix& b);
Matrix operator*(Matrix a, double s);
Matrix operator*(double s, Matrix a);
Matrix operator*(const Matrix& a, const Matrix& b);
std::vector<double> operator*(const Matrix& a, std::span<const double> x);

/// Largest absolute entrywise difference; matrices must share a shape.
double max_abs_diff(const Matrix& a, const Matrix& b);

/// a^T b for vectors.
double dot(std::span<const double> a, std::span<const double> b);
double norm(std::span<const double> a);

/// Block-diagonal [[a, 0], [0, b]].
Matrix block_diag(const Matrix& a, const Matrix& b);
/// [[a, b], [c, d]]
Matrix assemble_blocks(const Matrix& a, const Matrix& b, const Matrix& c, const Matrix& d);

struct JacobiOptions {
  int max_sweeps = 30;
  /// Stop once the off-diagonal Frobenius norm drops below rel_tol * |M|_F.
  double rel_tol = 1e-17;
};

/// Certification setting: fixed 50 sweeps worth of budget, tolerance at the
/// subnormal floor so the iteration only stops once rotations are no-ops.
inline constexpr JacobiOptions kCertifyJacobi{50, 0.0};

struct SymmetricEigen {
  std::vector<double> values;  ///< descending
  Matrix vectors;              ///< column i pairs with values[i]
  int sweeps = 0;
};

/// Cyclic Jacobi eigen-decomposition of a symmetric matrix.
SymmetricEigen eigen_sym(const Matrix& m, JacobiOptions opts = {});
/// Eigenvalues only (descending); skips eigenvector accumulation.
std::vector<double> eigenvalues_sym(const Matrix& m, JacobiOptions opts = {});

/// Determinant of a symmetric matrix as the product of its eigenvalues.
double det_sym(const Matrix& m, JacobiOptions opts = {});
double min_eigenvalue(const Matrix& m, JacobiOptions opts = {});
double max_eigenvalue(const Matrix& m, JacobiOptions opts = {});

/// Moore-Penrose pseudo-inverse of a symmetric matrix: eigenvalues with
/// |e| <= rel_threshold * max|e| are treated as zero.
Matrix pinv_sym(const Matrix& m, double rel_threshold = 1e-10);
/// Inverse of a symmetric non-singular matrix via its eigen-decomposition.
Matrix inverse_sym(const Matrix& m);
/// Principal square root of a PSD matrix (negative eigenvalues clipped to 0).
Matrix sqrt_psd(const Matrix& m);
/// Nearest PSD matrix in Frobenius norm (eigenvalue clipping).
Matrix clip_psd(const Matrix& m, double floor = 0.0);

/// Determinant by LU with partial pivoting; used as an independent route.
double det_lu(Matrix m);

/// Solves M x = b for symmetric positive definite M (Cholesky).
/// Throws std::domain_error if M is not positive definite.
std::vector<double> solve_spd(const Matrix& m, std::span<const double> b);

std::ostream& operator<<(std::ostream& os, const Matrix& m);

}  // namespace cayley
