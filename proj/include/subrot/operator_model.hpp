#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>

#include "subrot/linalg.hpp"

namespace subrot {

/// Largest total dimension accepted at assembly.
inline constexpr std::size_t kMaxDimension = 500;

/// Fraction of the gap length excluded at each end of the admissible shift range.
inline constexpr double kGapGuardFraction = 1e-3;

enum class Layout { Central, CaseII };

const char* to_string(Layout layout) noexcept;

/// Diagonal blocks and coupling of a 2x2 block operator matrix.
///
/// Central layout: A = diag(a_plus, -a_minus) with both blocks positive definite.
/// CaseII layout:  A = diag(a_plus, a_minus), both positive, spec(a_minus) below spec(a_plus).
struct BlockOperatorSpec {
  DenseSymmetric a_plus;
  DenseSymmetric a_minus;
  DenseRect w;  // n_plus x n_minus
  std::string label;
};

/// A, its off-diagonal perturbation V, B = A + V and the involution J
/// (J = +1 on the upper cluster, -1 on the lower).
struct AssembledPair {
  DenseSymmetric A;
  DenseSymmetric V;
  DenseSymmetric B;
  DenseSymmetric J;
  SpectralDecomposition decompA;
};

enum class GapCase { Central, CaseI, CaseII, CaseIIMirrored };

const char* to_string(GapCase c) noexcept;

struct GapGeometry {
  double alpha = 0.0;  // sup of the lower cluster
  double beta = 0.0;   // inf of the upper cluster
  double d_plus = 0.0;
  double d_minus = 0.0;
  double m_plus = 0.0;
  double m_minus = 0.0;
  GapCase case_tag = GapCase::Central;
  double sigma_minus_min = 0.0;
  double sigma_plus_max = 0.0;

  /// alpha < 0 < beta (with or without the Case I condition d_plus > d_minus).
  bool central() const noexcept { return case_tag == GapCase::Central || case_tag == GapCase::CaseI; }
  bool semibounded() const noexcept { return case_tag != GapCase::Central; }
  double length() const noexcept { return beta - alpha; }
  double guard_lo() const noexcept { return alpha + kGapGuardFraction * length(); }
  double guard_hi() const noexcept { return beta - kGapGuardFraction * length(); }
  bool in_guarded_gap(double mu) const noexcept { return mu >= guard_lo() && mu <= guard_hi(); }
};

/// J(A - mu I), positive definite for mu inside the gap, and its inverse square root.
struct ShiftedFormOperator {
  double mu = 0.0;
  DenseSymmetric S;
  DenseSymmetric inv_sqrt_S;
  double min_eig = 0.0;
};

AssembledPair assemble(const BlockOperatorSpec& spec, Layout layout);

/// Builds a pair from explicit A, V, J and checks every AssembledPair invariant
/// (J^2 = I, JA = AJ, JV + VJ = 0 to tolerance).
AssembledPair make_pair(const DenseSymmetric& A, const DenseSymmetric& V, const DenseSymmetric& J);

GapGeometry detect_gap(const SpectralDecomposition& decompA, const DenseSymmetric& J,
                       std::optional<std::pair<double, double>> hint = std::nullopt);

/// Gap selection for a bare spectrum: the gap containing 0 if there is one,
/// otherwise the gap between consecutive eigenvalues with the largest relative
/// length |d+ - d-| / sqrt(d+ d-).
std::pair<double, double> default_gap(const SpectralDecomposition& decompA);

/// J = E((beta, inf)) - E((-inf, alpha)); every eigenvalue must lie outside (alpha, beta).
DenseSymmetric involution_for_gap(const SpectralDecomposition& decompA, double alpha, double beta);

/// ||JV + VJ||.
double verify_off_diagonal(const DenseSymmetric& V, const DenseSymmetric& J);

/// Tolerance under which verify_off_diagonal counts as zero.
double off_diagonal_tolerance(const DenseSymmetric& V);

ShiftedFormOperator shifted_form_operator(const AssembledPair& pair, double mu);

/// v_mu = ||S_mu^{-1/2} V S_mu^{-1/2}||.
double relative_bound_at(const AssembledPair& pair, const ShiftedFormOperator& sfo);

/// v = || |A|^{-1/2} V |A|^{-1/2} ||.
double base_relative_bound(const AssembledPair& pair);

/// Same pair seen through A -> -A, V -> -V, J -> -J. Used to normalize a
/// negative-spectrum (mirrored) Case II instance.
AssembledPair negated(const AssembledPair& pair);

}  // namespace subrot
