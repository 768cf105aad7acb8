#include "subrot/operator_model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <vector>

namespace subrot {

const char* to_string(Layout layout) noexcept {
  return layout == Layout::Central ? "central" : "case2";
}

const char* to_string(GapCase c) noexcept {
  switch (c) {
    case GapCase::Central: return "Central";
    case GapCase::CaseI: return "CaseI";
    case GapCase::CaseII: return "CaseII";
    case GapCase::CaseIIMirrored: return "CaseII-mirrored";
  }
  return "unknown";
}

namespace {

Matrix block_diagonal(const Matrix& upper, const Matrix& lower) {
  const std::size_t np = upper.rows();
  const std::size_t nm = lower.rows();
  Matrix m(np + nm, np + nm);
  for (std::size_t i = 0; i < np; ++i)
    for (std::size_t j = 0; j < np; ++j) m(i, j) = upper(i, j);
  for (std::size_t i = 0; i < nm; ++i)
    for (std::size_t j = 0; j < nm; ++j) m(np + i, np + j) = lower(i, j);
  return m;
}

double min_eigenvalue(const DenseSymmetric& m) { return symmetric_eigenvalues(m).front(); }

void require_positive_definite(const DenseSymmetric& m, const char* name) {
  const auto ev = symmetric_eigenvalues(m);
  const double eps = spectral_tolerance(std::max(std::abs(ev.front()), std::abs(ev.back())));
  if (ev.front() <= eps) {
    std::ostringstream msg;
    msg << name << " must be positive definite (min eigenvalue " << ev.front() << ")";
    throw Error(ErrorKind::InvalidInput, msg.str(), ev.front());
  }
}

}  // namespace

AssembledPair make_pair(const DenseSymmetric& A, const DenseSymmetric& V, const DenseSymmetric& J) {
  const std::size_t n = A.size();
  if (n == 0 || V.size() != n || J.size() != n)
    throw Error(ErrorKind::InvalidInput, "A, V and J must be nonempty and of equal dimension");
  if (n > kMaxDimension) {
    std::ostringstream msg;
    msg << "dimension " << n << " exceeds the supported maximum " << kMaxDimension;
    throw Error(ErrorKind::InvalidInput, msg.str(), static_cast<double>(n));
  }

  const double j2 = max_abs_diff(J.matrix() * J.matrix(), Matrix::identity(n));
  if (j2 > 1e-12) throw Error(ErrorKind::InvalidInput, "J is not an involution", j2);

  const Matrix ja = J.matrix() * A.matrix();
  const Matrix aj = A.matrix() * J.matrix();
  const double norm_a = A.matrix().frobenius();
  const double comm = (ja - aj).frobenius();
  if (comm > 1e-10 * std::max(1.0, norm_a))
    throw Error(ErrorKind::InvalidInput, "J does not commute with A", comm);

  const double offdiag = verify_off_diagonal(V, J);
  if (offdiag > off_diagonal_tolerance(V))
    throw Error(ErrorKind::InvalidInput, "V is not off-diagonal with respect to J", offdiag);

  AssembledPair pair{A, V, A + V, J, symmetric_eigendecomposition(A)};
  return pair;
}

AssembledPair assemble(const BlockOperatorSpec& spec, Layout layout) {
  const std::size_t np = spec.a_plus.size();
  const std::size_t nm = spec.a_minus.size();
  if (np == 0 || nm == 0) throw Error(ErrorKind::InvalidInput, "both diagonal blocks must be nonempty");
  if (spec.w.rows() != np || spec.w.cols() != nm) {
    std::ostringstream msg;
    msg << "coupling block is " << spec.w.rows() << "x" << spec.w.cols() << ", expected " << np << "x"
        << nm;
    throw Error(ErrorKind::InvalidInput, msg.str());
  }
  const std::size_t n = np + nm;
  if (n > kMaxDimension) {
    std::ostringstream msg;
    msg << "dimension " << n << " exceeds the supported maximum " << kMaxDimension;
    throw Error(ErrorKind::InvalidInput, msg.str(), static_cast<double>(n));
  }

  require_positive_definite(spec.a_plus, "a_plus");
  require_positive_definite(spec.a_minus, "a_minus");

  Matrix a;
  if (layout == Layout::Central) {
    a = block_diagonal(spec.a_plus.matrix(), -1.0 * spec.a_minus.matrix());
  } else {
    const double lower_top = symmetric_eigenvalues(spec.a_minus).back();
    const double upper_bottom = min_eigenvalue(spec.a_plus);
    if (lower_top >= upper_bottom - spectral_tolerance(std::max(lower_top, upper_bottom))) {
      std::ostringstream msg;
      msg << "case2 layout needs sup spec(a_minus) < inf spec(a_plus); got " << lower_top
          << " >= " << upper_bottom;
      throw Error(ErrorKind::NoGap, msg.str(), lower_top - upper_bottom);
    }
    a = block_diagonal(spec.a_plus.matrix(), spec.a_minus.matrix());
  }

  Matrix v(n, n);
  for (std::size_t i = 0; i < np; ++i) {
    for (std::size_t j = 0; j < nm; ++j) {
      v(i, np + j) = spec.w(i, j);
      v(np + j, i) = spec.w(i, j);
    }
  }
  Matrix j = Matrix::identity(n);
  for (std::size_t i = np; i < n; ++i) j(i, i) = -1.0;

  DenseSymmetric A(std::move(a));
  DenseSymmetric V(std::move(v));
  DenseSymmetric J(std::move(j));
  const double residual = verify_off_diagonal(V, J);
  if (residual > off_diagonal_tolerance(V))
    throw Error(ErrorKind::Internal, "assembled perturbation is not off-diagonal", residual);
  return AssembledPair{A, V, A + V, J, symmetric_eigendecomposition(A)};
}

GapGeometry detect_gap(const SpectralDecomposition& decompA, const DenseSymmetric& J,
                       std::optional<std::pair<double, double>> hint) {
  const std::size_t n = decompA.size();
  if (J.size() != n) throw Error(ErrorKind::InvalidInput, "J and A dimensions differ");
  const double eps = spectral_tolerance(decompA.spectral_radius());

  double alpha = -std::numeric_limits<double>::infinity();
  double beta = std::numeric_limits<double>::infinity();
  double lower_min = std::numeric_limits<double>::infinity();
  double upper_max = -std::numeric_limits<double>::infinity();
  std::size_t n_upper = 0;
  for (std::size_t k = 0; k < n; ++k) {
    const auto x = decompA.eigenvector(k);
    const double r = dot(x, J.matrix() * std::span<const double>(x));
    if (std::abs(std::abs(r) - 1.0) > 1e-6) {
      std::ostringstream msg;
      msg << "eigenvector " << k << " (eigenvalue " << decompA.eigenvalues[k]
          << ") straddles both J-subspaces; the clusters are not separated";
      throw Error(ErrorKind::NoGap, msg.str(), r);
    }
    const double l = decompA.eigenvalues[k];
    if (r > 0.0) {
      ++n_upper;
      beta = std::min(beta, l);
      upper_max = std::max(upper_max, l);
    } else {
      alpha = std::max(alpha, l);
      lower_min = std::min(lower_min, l);
    }
  }
  if (n_upper == 0 || n_upper == n)
    throw Error(ErrorKind::NoGap, "one of the spectral clusters is empty");
  if (!(beta - alpha > eps)) {
    std::ostringstream msg;
    msg << "spectral clusters interleave: sup of lower cluster " << alpha
        << " is not below inf of upper cluster " << beta;
    throw Error(ErrorKind::NoGap, msg.str(), beta - alpha);
  }
  for (double l : decompA.eigenvalues) {
    if (std::abs(l) <= eps) {
      std::ostringstream msg;
      msg << "A has eigenvalue " << l << " within eps_spec of zero";
      throw Error(ErrorKind::SingularA, msg.str(), l);
    }
  }
  if (hint) {
    const auto [ha, hb] = *hint;
    if (!(ha < hb) || ha > alpha + eps || hb < beta - eps) {
      std::ostringstream msg;
      msg << "gap hint (" << ha << ", " << hb << ") does not bracket the detected gap (" << alpha
          << ", " << beta << ")";
      throw Error(ErrorKind::HintMismatch, msg.str());
    }
  }

  GapGeometry g;
  g.alpha = alpha;
  g.beta = beta;
  g.sigma_minus_min = lower_min;
  g.sigma_plus_max = upper_max;
  g.m_plus = beta;
  g.m_minus = -alpha;
  if (alpha < 0.0 && beta > 0.0) {
    g.d_plus = beta;
    g.d_minus = -lower_min;
    g.case_tag = g.d_plus > g.d_minus ? GapCase::CaseI : GapCase::Central;
  } else if (alpha > 0.0) {
    g.d_plus = beta;
    g.d_minus = alpha;
    g.case_tag = GapCase::CaseII;
  } else {
    // beta < 0: read the geometry off -A, where the clusters trade places.
    g.d_plus = -alpha;
    g.d_minus = -beta;
    g.case_tag = GapCase::CaseIIMirrored;
  }
  return g;
}

std::pair<double, double> default_gap(const SpectralDecomposition& decompA) {
  const auto& ev = decompA.eigenvalues;
  const double eps = spectral_tolerance(decompA.spectral_radius());
  std::optional<std::pair<double, double>> best;
  double best_score = -1.0;
  for (std::size_t k = 0; k + 1 < ev.size(); ++k) {
    const double lo = ev[k];
    const double hi = ev[k + 1];
    if (hi - lo <= eps) continue;
    if (lo < 0.0 && hi > 0.0) return {lo, hi};
    const double a = std::abs(lo);
    const double b = std::abs(hi);
    if (std::min(a, b) <= eps) continue;
    const double score = std::abs(b - a) / std::sqrt(a * b);
    if (score > best_score) {
      best_score = score;
      best = std::pair{lo, hi};
    }
  }
  if (!best) throw Error(ErrorKind::NoGap, "spectrum has no admissible gap");
  return *best;
}

DenseSymmetric involution_for_gap(const SpectralDecomposition& decompA, double alpha, double beta) {
  if (!(alpha < beta)) throw Error(ErrorKind::Domain, "gap endpoints must satisfy alpha < beta");
  for (double l : decompA.eigenvalues) {
    if (l > alpha && l < beta)
      throw Error(ErrorKind::NoGap, "eigenvalue inside the requested gap", l);
  }
  return apply_spectral_function(
      decompA, spectral::custom([mid = 0.5 * (alpha + beta)](double l) { return l > mid ? 1.0 : -1.0; }));
}

double verify_off_diagonal(const DenseSymmetric& V, const DenseSymmetric& J) {
  if (V.size() != J.size()) throw Error(ErrorKind::InvalidInput, "V and J dimensions differ");
  const Matrix anti = J.matrix() * V.matrix() + V.matrix() * J.matrix();
  return operator_norm(DenseSymmetric::symmetrize(anti));
}

double off_diagonal_tolerance(const DenseSymmetric& V) {
  return 1e-10 * std::max(1.0, operator_norm(V));
}

ShiftedFormOperator shifted_form_operator(const AssembledPair& pair, double mu) {
  const std::size_t n = pair.A.size();
  Matrix shifted = pair.A.matrix();
  for (std::size_t i = 0; i < n; ++i) shifted(i, i) -= mu;
  ShiftedFormOperator out;
  out.mu = mu;
  out.S = DenseSymmetric::symmetrize(pair.J.matrix() * shifted);
  const auto d = symmetric_eigendecomposition(out.S);
  out.min_eig = d.eigenvalues.front();
  if (out.min_eig <= spectral_tolerance(d.spectral_radius())) {
    std::ostringstream msg;
    msg << "J(A - mu I) is not positive definite at mu = " << mu << " (min eigenvalue " << out.min_eig
        << ")";
    throw Error(ErrorKind::NotPositiveDefinite, msg.str(), out.min_eig);
  }
  out.inv_sqrt_S = apply_spectral_function(d, spectral::inverse_sqrt());
  return out;
}

double relative_bound_at(const AssembledPair& pair, const ShiftedFormOperator& sfo) {
  const Matrix& s = sfo.inv_sqrt_S.matrix();
  return operator_norm(DenseSymmetric::symmetrize(s * pair.V.matrix() * s));
}

double base_relative_bound(const AssembledPair& pair) {
  const auto scale = apply_spectral_function(
      pair.decompA,
      spectral::custom([](double l) { return 1.0 / std::sqrt(std::abs(l)); }, SpectralGuard::NonZero));
  const Matrix& s = scale.matrix();
  return operator_norm(DenseSymmetric::symmetrize(s * pair.V.matrix() * s));
}

AssembledPair negated(const AssembledPair& pair) {
  SpectralDecomposition d;
  const std::size_t n = pair.decompA.size();
  d.eigenvalues.resize(n);
  d.basis = Matrix(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    d.eigenvalues[k] = -pair.decompA.eigenvalues[n - 1 - k];
    for (std::size_t i = 0; i < n; ++i) d.basis(i, k) = pair.decompA.basis(i, n - 1 - k);
  }
  return AssembledPair{-1.0 * pair.A, -1.0 * pair.V, -1.0 * pair.B, -1.0 * pair.J, std::move(d)};
}

}  // namespace subrot
