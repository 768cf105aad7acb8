#include "subrot/linalg.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

namespace subrot {

// Matrix -------------------------------------------------------------------

Matrix::Matrix(std::initializer_list<std::initializer_list<double>> rows) {
  rows_ = rows.size();
  cols_ = rows_ == 0 ? 0 : rows.begin()->size();
  data_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    if (r.size() != cols_) throw Error(ErrorKind::InvalidInput, "ragged matrix literal");
    data_.insert(data_.end(), r.begin(), r.end());
  }
}

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Matrix Matrix::diagonal(std::span<const double> diag) {
  Matrix m(diag.size(), diag.size());
  for (std::size_t i = 0; i < diag.size(); ++i) m(i, i) = diag[i];
  return m;
}

Matrix Matrix::transposed() const {
  Matrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

double Matrix::max_abs() const noexcept {
  double m = 0.0;
  for (double x : data_) m = std::max(m, std::abs(x));
  return m;
}

double Matrix::frobenius() const noexcept {
  double s = 0.0;
  for (double x : data_) s += x * x;
  return std::sqrt(s);
}

bool Matrix::all_finite() const noexcept {
  return std::all_of(data_.begin(), data_.end(), [](double x) { return std::isfinite(x); });
}

static void require_same_shape(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw Error(ErrorKind::InvalidInput, "matrix shape mismatch");
}

Matrix& Matrix::operator+=(const Matrix& other) {
  require_same_shape(*this, other);
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += other.data_[k];
  return *this;
}

Matrix& Matrix::operator-=(const Matrix& other) {
  require_same_shape(*this, other);
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= other.data_[k];
  return *this;
}

Matrix& Matrix::operator*=(double s) {
  for (double& x : data_) x *= s;
  return *this;
}

Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
Matrix operator*(double s, Matrix a) { return a *= s; }

Matrix operator*(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) throw Error(ErrorKind::InvalidInput, "matrix product shape mismatch");
  Matrix c(a.rows(), b.cols());
  const std::size_t n = b.cols();
  for (std::size_t i = 0; i < a.rows(); ++i) {
    double* ci = c.data().data() + i * n;
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const double aik = a(i, k);
      if (aik == 0.0) continue;
      const double* bk = b.data().data() + k * n;
      for (std::size_t j = 0; j < n; ++j) ci[j] += aik * bk[j];
    }
  }
  return c;
}

std::vector<double> operator*(const Matrix& a, std::span<const double> x) {
  if (a.cols() != x.size()) throw Error(ErrorKind::InvalidInput, "matrix-vector shape mismatch");
  std::vector<double> y(a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) y[i] = dot(a.row(i), x);
  return y;
}

double max_abs_diff(const Matrix& a, const Matrix& b) {
  require_same_shape(a, b);
  double m = 0.0;
  for (std::size_t k = 0; k < a.data().size(); ++k)
    m = std::max(m, std::abs(a.data()[k] - b.data()[k]));
  return m;
}

double dot(std::span<const double> x, std::span<const double> y) {
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
  return s;
}

// DenseSymmetric / DenseRect -----------------------------------------------

DenseSymmetric::DenseSymmetric(Matrix m) {
  if (!m.square()) throw Error(ErrorKind::InvalidInput, "symmetric matrix must be square");
  if (!m.all_finite()) throw Error(ErrorKind::InvalidInput, "matrix has non-finite entries");
  const double tol = 1e-12 * std::max(1.0, m.max_abs());
  const std::size_t n = m.rows();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double asym = std::abs(m(i, j) - m(j, i));
      if (asym > tol) {
        std::ostringstream msg;
        msg << "matrix is not symmetric: |m(" << i << "," << j << ") - m(" << j << "," << i
            << ")| = " << asym;
        throw Error(ErrorKind::InvalidInput, msg.str(), asym);
      }
      const double avg = 0.5 * (m(i, j) + m(j, i));
      m(i, j) = avg;
      m(j, i) = avg;
    }
  }
  m_ = std::move(m);
}

DenseSymmetric DenseSymmetric::symmetrize(const Matrix& m) {
  if (!m.square()) throw Error(ErrorKind::InvalidInput, "symmetric matrix must be square");
  Matrix s = m;
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = i + 1; j < m.cols(); ++j) s(i, j) = s(j, i) = 0.5 * (m(i, j) + m(j, i));
  return DenseSymmetric(std::move(s));
}

DenseSymmetric operator+(const DenseSymmetric& a, const DenseSymmetric& b) {
  return DenseSymmetric(a.matrix() + b.matrix());
}
DenseSymmetric operator-(const DenseSymmetric& a, const DenseSymmetric& b) {
  return DenseSymmetric(a.matrix() - b.matrix());
}
DenseSymmetric operator*(double s, const DenseSymmetric& a) { return DenseSymmetric(s * a.matrix()); }

DenseRect::DenseRect(Matrix m) {
  if (!m.all_finite()) throw Error(ErrorKind::InvalidInput, "matrix has non-finite entries");
  m_ = std::move(m);
}

// SpectralDecomposition ----------------------------------------------------

double SpectralDecomposition::spectral_radius() const noexcept {
  double r = 0.0;
  for (double l : eigenvalues) r = std::max(r, std::abs(l));
  return r;
}

std::vector<double> SpectralDecomposition::eigenvector(std::size_t k) const {
  std::vector<double> v(basis.rows());
  for (std::size_t i = 0; i < basis.rows(); ++i) v[i] = basis(i, k);
  return v;
}

// Tolerances ---------------------------------------------------------------

namespace {
std::atomic<double> g_spec_tol_factor{kDefaultSpectralTolFactor};
}

double spectral_tol_factor() noexcept { return g_spec_tol_factor.load(std::memory_order_relaxed); }

void set_spectral_tol_factor(double factor) {
  if (!(factor > 0.0) || !std::isfinite(factor))
    throw Error(ErrorKind::Domain, "spectral tolerance factor must be positive", factor);
  g_spec_tol_factor.store(factor, std::memory_order_relaxed);
}

double spectral_tolerance(double norm) noexcept { return spectral_tol_factor() * std::max(1.0, norm); }

// Jacobi -------------------------------------------------------------------

namespace {

double off_diagonal_mass(const std::vector<double>& a, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (i != j) s += a[i * n + j] * a[i * n + j];
  return std::sqrt(s);
}

// Runs cyclic sweeps in place on the row-major array `a`; accumulates
// rotations into `v` when non-null.
void jacobi_sweeps(std::vector<double>& a, std::size_t n, double* v, const JacobiOptions& opt) {
  double fro = 0.0;
  for (double x : a) fro += x * x;
  fro = std::sqrt(fro);
  const double target = opt.relative_tolerance * fro;

  for (int sweep = 0;; ++sweep) {
    const double off = off_diagonal_mass(a, n);
    if (off <= target) return;
    if (sweep >= opt.max_sweeps) {
      std::ostringstream msg;
      msg << "Jacobi eigensolver did not converge after " << opt.max_sweeps
          << " sweeps; off-diagonal residual " << off;
      throw Error(ErrorKind::Convergence, msg.str(), off);
    }
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a[p * n + q];
        if (apq == 0.0) continue;
        const double app = a[p * n + p];
        const double aqq = a[q * n + q];
        // Entries below the diagonal's resolution are dropped after a few sweeps.
        const double g = 100.0 * std::abs(apq);
        if (sweep > 3 && std::abs(app) + g == std::abs(app) && std::abs(aqq) + g == std::abs(aqq)) {
          a[p * n + q] = a[q * n + p] = 0.0;
          continue;
        }
        const double theta = (aqq - app) / (2.0 * apq);
        double t;
        if (std::abs(theta) > 1e150) {
          t = 0.5 / theta;
        } else {
          t = 1.0 / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
          if (theta < 0.0) t = -t;
        }
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;

        a[p * n + p] = app - t * apq;
        a[q * n + q] = aqq + t * apq;
        a[p * n + q] = a[q * n + p] = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
          if (k == p || k == q) continue;
          const double akp = a[k * n + p];
          const double akq = a[k * n + q];
          const double nkp = c * akp - s * akq;
          const double nkq = s * akp + c * akq;
          a[k * n + p] = a[p * n + k] = nkp;
          a[k * n + q] = a[q * n + k] = nkq;
        }
        if (v != nullptr) {
          for (std::size_t k = 0; k < n; ++k) {
            const double vkp = v[k * n + p];
            const double vkq = v[k * n + q];
            v[k * n + p] = c * vkp - s * vkq;
            v[k * n + q] = s * vkp + c * vkq;
          }
        }
      }
    }
  }
}

}  // namespace

SpectralDecomposition symmetric_eigendecomposition(const DenseSymmetric& m, const JacobiOptions& options) {
  const std::size_t n = m.size();
  if (n == 0) throw Error(ErrorKind::InvalidInput, "eigendecomposition of an empty matrix");
  std::vector<double> a(m.matrix().data().begin(), m.matrix().data().end());
  Matrix v = Matrix::identity(n);
  jacobi_sweeps(a, n, v.data().data(), options);

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return a[i * n + i] < a[j * n + j]; });

  SpectralDecomposition d;
  d.eigenvalues.resize(n);
  d.basis = Matrix(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t src = order[k];
    d.eigenvalues[k] = a[src * n + src];
    // Sign convention: largest-magnitude component positive, first index wins ties.
    std::size_t arg = 0;
    double best = -1.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double mag = std::abs(v(i, src));
      if (mag > best) {
        best = mag;
        arg = i;
      }
    }
    const double flip = v(arg, src) < 0.0 ? -1.0 : 1.0;
    for (std::size_t i = 0; i < n; ++i) d.basis(i, k) = flip * v(i, src);
  }
  return d;
}

std::vector<double> symmetric_eigenvalues(const DenseSymmetric& m, const JacobiOptions& options) {
  const std::size_t n = m.size();
  if (n == 0) throw Error(ErrorKind::InvalidInput, "eigenvalues of an empty matrix");
  std::vector<double> a(m.matrix().data().begin(), m.matrix().data().end());
  jacobi_sweeps(a, n, nullptr, options);
  std::vector<double> ev(n);
  for (std::size_t k = 0; k < n; ++k) ev[k] = a[k * n + k];
  std::sort(ev.begin(), ev.end());
  return ev;
}

// Spectral calculus --------------------------------------------------------

namespace spectral {

SpectralFunction identity() { return {[](double x) { return x; }, SpectralGuard::None, "identity"}; }
SpectralFunction sign() {
  return {[](double x) { return x > 0.0 ? 1.0 : -1.0; }, SpectralGuard::NonZero, "sign"};
}
SpectralFunction abs() { return {[](double x) { return std::abs(x); }, SpectralGuard::None, "abs"}; }
SpectralFunction sqrt() {
  return {[](double x) { return std::sqrt(std::max(x, 0.0)); }, SpectralGuard::None, "sqrt"};
}
SpectralFunction inverse_sqrt() {
  return {[](double x) { return 1.0 / std::sqrt(x); }, SpectralGuard::Positive, "inverse_sqrt"};
}
SpectralFunction square() { return {[](double x) { return x * x; }, SpectralGuard::None, "square"}; }
SpectralFunction custom(std::function<double(double)> f, SpectralGuard guard) {
  return {std::move(f), guard, "custom"};
}

}  // namespace spectral

DenseSymmetric apply_spectral_function(const SpectralDecomposition& d, const SpectralFunction& f) {
  const std::size_t n = d.size();
  const double eps = spectral_tolerance(d.spectral_radius());
  std::vector<double> fl(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double l = d.eigenvalues[k];
    const bool forbidden = (f.guard == SpectralGuard::NonZero && std::abs(l) <= eps) ||
                           (f.guard == SpectralGuard::Positive && l <= eps);
    if (forbidden) {
      std::ostringstream msg;
      msg << "spectral function '" << f.name << "' evaluated at eigenvalue " << l
          << " inside the forbidden band (eps_spec = " << eps << ")";
      throw Error(ErrorKind::NearSingular, msg.str(), l);
    }
    fl[k] = f.f(l);
    if (!std::isfinite(fl[k]))
      throw Error(ErrorKind::NearSingular, "spectral function is not finite on the spectrum", l);
  }
  Matrix out(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < n; ++k) s += d.basis(i, k) * fl[k] * d.basis(j, k);
      out(i, j) = out(j, i) = s;
    }
  }
  return DenseSymmetric(std::move(out));
}

OrthogonalProjection spectral_projection(const SpectralDecomposition& d, double lo, double hi) {
  const std::size_t n = d.size();
  const double eps = spectral_tolerance(d.spectral_radius());
  std::vector<std::size_t> selected;
  for (std::size_t k = 0; k < n; ++k) {
    const double l = d.eigenvalues[k];
    for (double end : {lo, hi}) {
      if (std::isfinite(end) && std::abs(l - end) <= eps) {
        std::ostringstream msg;
        msg << "eigenvalue " << l << " lies within eps_spec = " << eps << " of the cut point " << end;
        throw Error(ErrorKind::AmbiguousCut, msg.str(), l);
      }
    }
    if (l > lo && l < hi) selected.push_back(k);
  }
  OrthogonalProjection p;
  p.rank = selected.size();
  p.range_basis = Matrix(n, p.rank);
  for (std::size_t c = 0; c < p.rank; ++c)
    for (std::size_t i = 0; i < n; ++i) p.range_basis(i, c) = d.basis(i, selected[c]);
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      double s = 0.0;
      for (std::size_t c = 0; c < p.rank; ++c) s += p.range_basis(i, c) * p.range_basis(j, c);
      m(i, j) = m(j, i) = s;
    }
  }
  p.matrix = DenseSymmetric(std::move(m));
  return p;
}

double operator_norm(const DenseSymmetric& m) {
  if (m.size() == 0) return 0.0;
  const auto ev = symmetric_eigenvalues(m);
  return std::max(std::abs(ev.front()), std::abs(ev.back()));
}

double operator_norm(const DenseRect& m) {
  if (m.rows() == 0 || m.cols() == 0) return 0.0;
  const Matrix& a = m.matrix();
  const bool tall = a.cols() <= a.rows();
  const std::size_t k = tall ? a.cols() : a.rows();
  Matrix gram(k, k);
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = i; j < k; ++j) {
      double s = 0.0;
      if (tall) {
        for (std::size_t r = 0; r < a.rows(); ++r) s += a(r, i) * a(r, j);
      } else {
        for (std::size_t c = 0; c < a.cols(); ++c) s += a(i, c) * a(j, c);
      }
      gram(i, j) = gram(j, i) = s;
    }
  }
  const auto ev = symmetric_eigenvalues(DenseSymmetric(std::move(gram)));
  return std::sqrt(std::max(ev.back(), 0.0));
}

}  // namespace subrot
