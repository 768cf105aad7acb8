#include "subrot/subspace.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace subrot {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Singular values of a (rows x cols) matrix, descending, via its smaller Gram matrix.
std::vector<double> singular_values(const Matrix& a) {
  const bool tall = a.cols() <= a.rows();
  const std::size_t k = tall ? a.cols() : a.rows();
  if (k == 0) return {};
  Matrix gram = tall ? a.transposed() * a : a * a.transposed();
  auto ev = symmetric_eigenvalues(DenseSymmetric::symmetrize(gram));
  std::vector<double> sv(k);
  for (std::size_t i = 0; i < k; ++i) sv[i] = std::sqrt(std::max(ev[k - 1 - i], 0.0));
  return sv;
}

}  // namespace

DenseSymmetric shifted(const DenseSymmetric& B, double mu) {
  Matrix m = B.matrix();
  for (std::size_t i = 0; i < m.rows(); ++i) m(i, i) -= mu;
  return DenseSymmetric(std::move(m));
}

GapProjections gap_projections(const AssembledPair& pair, const GapGeometry& geom) {
  const auto decompB = symmetric_eigendecomposition(pair.B);
  GapProjections out;
  if (geom.case_tag == GapCase::Central) {
    out.cut = 0.0;
    out.convention = "upper: E(0,+inf)";
    out.P = spectral_projection(pair.decompA, 0.0, kInf);
    out.Q = spectral_projection(decompB, 0.0, kInf);
  } else {
    out.cut = geom.case_tag == GapCase::CaseI ? 0.0 : 0.5 * (geom.alpha + geom.beta);
    out.convention = "lower: E(-inf,alpha]";
    out.P = spectral_projection(pair.decompA, -kInf, out.cut);
    out.Q = spectral_projection(decompB, -kInf, out.cut);
  }
  return out;
}

AngleReport projection_distance_and_angles(const OrthogonalProjection& P, const OrthogonalProjection& Q) {
  AngleReport r;
  r.rank_p = P.rank;
  r.rank_q = Q.rank;
  r.norm_diff = std::min(1.0, operator_norm(P.matrix - Q.matrix));

  // Cosines from the cross-Gram matrix, sines from the residual of projecting
  // one basis onto the other; small angles are read from the sines.
  const Matrix* x = &P.range_basis;
  const Matrix* y = &Q.range_basis;
  if (x->cols() > y->cols()) std::swap(x, y);
  const std::size_t r_min = x->cols();
  if (r_min == 0) return r;

  const Matrix cross = y->transposed() * *x;  // r_y x r_x
  auto cosines = singular_values(cross);      // descending
  const Matrix residual = *x - *y * cross;    // (I - Y Y^T) X
  auto sines = singular_values(residual);     // descending
  std::reverse(sines.begin(), sines.end());   // ascending

  r.principal_angles.resize(r_min);
  for (std::size_t i = 0; i < r_min; ++i) {
    const double c = std::min(1.0, cosines[i]);
    const double s = std::min(1.0, sines[i]);
    r.principal_angles[i] = c * c >= 0.5 ? std::asin(s) : std::acos(c);
  }
  std::sort(r.principal_angles.begin(), r.principal_angles.end());
  r.max_angle = r.principal_angles.back();
  return r;
}

double sign_difference_identity(const DenseSymmetric& J, const DenseSymmetric& B) {
  const auto signB = apply_spectral_function(symmetric_eigendecomposition(B), spectral::sign());
  return 0.5 * operator_norm(J - signB);
}

double sectoriality_check(const AssembledPair& pair, double mu, double theta_mu) {
  const auto signB = apply_spectral_function(symmetric_eigendecomposition(shifted(pair.B, mu)),
                                             spectral::sign());
  const Matrix u = pair.J.matrix() * signB.matrix();
  const auto sym = DenseSymmetric::symmetrize(u);
  return symmetric_eigenvalues(sym).front() - std::cos(theta_mu);
}

SignConstancy sign_constancy_scan(const AssembledPair& pair, const GapGeometry& geom, std::size_t k) {
  if (k < 2) throw Error(ErrorKind::Domain, "sign constancy scan needs at least 2 samples");
  SignConstancy out;
  std::vector<DenseSymmetric> signs;
  signs.reserve(k);
  const double lo = geom.guard_lo();
  const double hi = geom.guard_hi();
  for (std::size_t i = 0; i < k; ++i) {
    const double mu = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(k - 1);
    try {
      signs.push_back(apply_spectral_function(symmetric_eigendecomposition(shifted(pair.B, mu)),
                                              spectral::sign()));
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::NearSingular) throw;
      out.gap_failure = true;
    }
  }
  out.samples = signs.size();
  for (std::size_t i = 0; i < signs.size(); ++i)
    for (std::size_t j = i + 1; j < signs.size(); ++j)
      out.max_deviation = std::max(out.max_deviation, operator_norm(signs[i] - signs[j]));
  return out;
}

bool gap_persistence_check(const DenseSymmetric& B, const GapGeometry& geom) {
  const auto ev = symmetric_eigenvalues(B);
  const double eps = spectral_tolerance(std::max(std::abs(ev.front()), std::abs(ev.back())));
  return std::none_of(ev.begin(), ev.end(), [&](double l) {
    return l >= geom.alpha + eps && l <= geom.beta - eps;
  });
}

bool gap_persistence_check(const AssembledPair& pair, const GapGeometry& geom) {
  return gap_persistence_check(pair.B, geom);
}

}  // namespace subrot
