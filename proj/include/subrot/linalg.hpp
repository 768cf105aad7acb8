#pragma once

#include <cstddef>
#include <functional>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

#include "subrot/errors.hpp"

namespace subrot {

/// Row-major dense real matrix. Plain value type; no invariants beyond shape.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
  Matrix(std::initializer_list<std::initializer_list<double>> rows);

  static Matrix identity(std::size_t n);
  static Matrix diagonal(std::span<const double> diag);
  static Matrix diagonal(std::initializer_list<double> diag) { return diagonal(std::span<const double>(diag.begin(), diag.size())); }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool square() const noexcept { return rows_ == cols_; }

  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::span<double> data() noexcept { return data_; }
  std::span<const double> data() const noexcept { return data_; }
  std::span<const double> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }

  Matrix transposed() const;
  double max_abs() const noexcept;
  double frobenius() const noexcept;
  bool all_finite() const noexcept;

  Matrix& operator+=(const Matrix& other);
  Matrix& operator-=(const Matrix& other);
  Matrix& operator*=(double s);

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

Matrix operator+(Matrix a, const Matrix& b);
Matrix operator-(Matrix a, const Matrix& b);
Matrix operator*(double s, Matrix a);
Matrix operator*(const Matrix& a, const Matrix& b);
std::vector<double> operator*(const Matrix& a, std::span<const double> x);

/// Largest |a(i,j) - b(i,j)|; shapes must agree.
double max_abs_diff(const Matrix& a, const Matrix& b);

double dot(std::span<const double> x, std::span<const double> y);

/// Real symmetric matrix. Construction checks symmetry to
/// 1e-12 * max(1, max|entries|) and stores the symmetrized average.
class DenseSymmetric {
 public:
  DenseSymmetric() = default;
  explicit DenseSymmetric(Matrix m);
  DenseSymmetric(std::initializer_list<std::initializer_list<double>> rows)
      : DenseSymmetric(Matrix(rows)) {}

  static DenseSymmetric identity(std::size_t n) { return DenseSymmetric(Matrix::identity(n)); }
  static DenseSymmetric diagonal(std::span<const double> diag) {
    return DenseSymmetric(Matrix::diagonal(diag));
  }
  static DenseSymmetric diagonal(std::initializer_list<double> diag) {
    return DenseSymmetric(Matrix::diagonal(diag));
  }
  static DenseSymmetric zero(std::size_t n) { return DenseSymmetric(Matrix(n, n)); }
  /// Averages m with its transpose without the symmetry check.
  static DenseSymmetric symmetrize(const Matrix& m);

  std::size_t size() const noexcept { return m_.rows(); }
  double operator()(std::size_t i, std::size_t j) const { return m_(i, j); }
  const Matrix& matrix() const noexcept { return m_; }

 private:
  Matrix m_;
};

DenseSymmetric operator+(const DenseSymmetric& a, const DenseSymmetric& b);
DenseSymmetric operator-(const DenseSymmetric& a, const DenseSymmetric& b);
DenseSymmetric operator*(double s, const DenseSymmetric& a);

/// Rectangular real matrix with finite entries.
class DenseRect {
 public:
  DenseRect() = default;
  explicit DenseRect(Matrix m);
  DenseRect(std::initializer_list<std::initializer_list<double>> rows) : DenseRect(Matrix(rows)) {}

  std::size_t rows() const noexcept { return m_.rows(); }
  std::size_t cols() const noexcept { return m_.cols(); }
  double operator()(std::size_t i, std::size_t j) const { return m_(i, j); }
  const Matrix& matrix() const noexcept { return m_; }

 private:
  Matrix m_;
};

/// Eigenvalues ascending; column k of `basis` is the unit eigenvector of eigenvalue k.
struct SpectralDecomposition {
  std::vector<double> eigenvalues;
  Matrix basis;

  std::size_t size() const noexcept { return eigenvalues.size(); }
  /// max |lambda|, the operator norm of the source matrix.
  double spectral_radius() const noexcept;
  std::vector<double> eigenvector(std::size_t k) const;
};

struct OrthogonalProjection {
  DenseSymmetric matrix;
  std::size_t rank = 0;
  /// Orthonormal basis of the range (n x rank), columns from the eigenbasis.
  Matrix range_basis;
};

// Tolerances ---------------------------------------------------------------

inline constexpr double kDefaultSpectralTolFactor = 1e-9;

/// Relative factor of the single "touches a cut point / zero" tolerance.
/// Process-wide; set once at startup (CLI --tol-spec), read everywhere.
double spectral_tol_factor() noexcept;
void set_spectral_tol_factor(double factor);

/// eps_spec = factor * max(1, norm).
double spectral_tolerance(double norm) noexcept;

// Eigensolver --------------------------------------------------------------

struct JacobiOptions {
  double relative_tolerance = 1e-14;  // off-diagonal Frobenius mass vs ||M||_F
  int max_sweeps = 100;
};

/// Cyclic Jacobi, row-major sweep order. Eigenvectors are normalized so their
/// largest-magnitude component is positive (ties: lowest index).
SpectralDecomposition symmetric_eigendecomposition(const DenseSymmetric& m,
                                                   const JacobiOptions& options = {});

/// Same sweeps without accumulating the eigenbasis.
std::vector<double> symmetric_eigenvalues(const DenseSymmetric& m,
                                          const JacobiOptions& options = {});

// Spectral calculus --------------------------------------------------------

enum class SpectralGuard {
  None,
  NonZero,   // |lambda| > eps_spec
  Positive,  // lambda > eps_spec
};

struct SpectralFunction {
  std::function<double(double)> f;
  SpectralGuard guard = SpectralGuard::None;
  std::string name = "custom";
};

namespace spectral {
SpectralFunction identity();
SpectralFunction sign();
SpectralFunction abs();
SpectralFunction sqrt();
SpectralFunction inverse_sqrt();
SpectralFunction square();
SpectralFunction custom(std::function<double(double)> f, SpectralGuard guard = SpectralGuard::None);
}  // namespace spectral

/// basis * diag(f(lambda)) * basis^T, symmetrized.
DenseSymmetric apply_spectral_function(const SpectralDecomposition& d, const SpectralFunction& f);

/// Projection onto eigenvectors with lambda in (lo, hi); infinities allowed.
OrthogonalProjection spectral_projection(const SpectralDecomposition& d, double lo, double hi);

double operator_norm(const DenseSymmetric& m);
/// Largest singular value via the smaller Gram matrix.
double operator_norm(const DenseRect& m);

}  // namespace subrot
