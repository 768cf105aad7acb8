#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "subrot/linalg.hpp"
#include "subrot/operator_model.hpp"

namespace subrot {

enum class Execution { Serial, Parallel };

// Scalar bound formulas ----------------------------------------------------

/// sin(1/2 arctan(2 ||V|| / d)).
double classical_davis_kahan(double norm_v, double d);

/// sin(1/2 arctan(v)), strictly below sqrt(2)/2.
double central_tan2theta_bound(double v_inf);

struct SemiboundedBound {
  double bound = 0.0;
  double delta = 0.0;  // relative distance (Case I) or relative gap length (Case II)
};

/// sin(1/2 arctan(2 v / delta)); nullopt when the geometry is not Case I / II
/// (including Central with d_plus <= d_minus).
std::optional<SemiboundedBound> semibounded_tan2theta(double v_base, const GapGeometry& geom);

/// v / delta, not clamped.
double relative_sin_theta(double v_base, double delta);

// Shift optimization -------------------------------------------------------

struct MuSample {
  double mu = 0.0;
  double v_mu = 0.0;
  bool positive_definite = false;
};

struct MuScan {
  std::vector<MuSample> samples;  // ordered by mu
  double mu_star = 0.0;
  double v_min = 0.0;
};

struct OptimizerOptions {
  std::size_t grid_points = 65;
  double relative_width = 1e-8;  // golden-section stop: width <= relative_width * (beta - alpha)
  Execution execution = Execution::Serial;
};

/// mu -> v_mu evaluated in the eigenbasis of A. With V~ = Q^T V Q and
/// D_mu = |Lambda - mu|^{-1/2}, v_mu is the largest singular value of the
/// lower-upper block of D_mu V~ D_mu; the diagonal blocks of V~ vanish because
/// V is off-diagonal.
class RelativeBoundProfile {
 public:
  RelativeBoundProfile(const AssembledPair& pair, const GapGeometry& geom);

  /// NaN when J(A - mu I) is not positive definite.
  double operator()(double mu) const;
  bool positive_definite(double mu) const;

  /// Largest entry of the diagonal blocks of V~ (zero for an exact off-diagonal V).
  double diagonal_block_residual() const noexcept { return diag_residual_; }

 private:
  std::vector<double> eigenvalues_;
  std::vector<std::size_t> lower_;
  std::vector<std::size_t> upper_;
  Matrix rotated_v_;
  double eps_ = 0.0;
  double diag_residual_ = 0.0;
};

struct GoldenResult {
  double x = 0.0;
  double fx = 0.0;
  int iterations = 0;
};

/// Golden-section minimization on [a, b] until b - a <= width.
GoldenResult golden_section_minimize(const std::function<double(double)>& f, double a, double b,
                                     double width, int max_iterations = 200);

/// Dense grid over the guarded gap followed by golden-section refinement
/// around the best grid point.
MuScan optimize_relative_bound(const AssembledPair& pair, const GapGeometry& geom,
                               const OptimizerOptions& options = {});

/// v_mu on `points` uniform samples of the guarded gap (endpoints included).
std::vector<MuSample> scan_relative_bound(const AssembledPair& pair, const GapGeometry& geom,
                                          std::size_t points, Execution execution = Execution::Serial);

// Checks -------------------------------------------------------------------

enum class Consistency { Consistent, Inconsistent, Inconclusive };

const char* to_string(Consistency c) noexcept;

struct BirmanSchwingerRecord {
  double v0 = 0.0;
  double min_eig_form = 0.0;  // min eig of |A| + V
  bool positive_definite = false;
  Consistency consistency = Consistency::Inconclusive;
};

/// Width of the band around v0 = 1 reported as inconclusive.
inline constexpr double kBirmanSchwingerBand = 1e-6;

BirmanSchwingerRecord birman_schwinger_check(const AssembledPair& pair);

struct ProofDiagnostics {
  double mu = 0.0;
  double kappa_plus = 0.0;
  double kappa_plus_bound = 0.0;
  double kappa_minus = 0.0;
  double kappa_minus_bound = 0.0;
  double mu_fixed_choice = 0.0;
  bool within_bounds = false;  // both kappas <= bound + 1e-10
};

/// (d+ - d-)/2 in Case I, (d+ + d-)/2 in Case II; mirrored Case II maps back
/// to the original coordinates.
double fixed_shift(const GapGeometry& geom);

ProofDiagnostics proof_diagnostics(const AssembledPair& pair, const GapGeometry& geom, double mu);

// Report -------------------------------------------------------------------

struct BoundReport {
  double exact_norm = 0.0;
  std::optional<double> classical_bound;
  std::optional<double> central_bound;
  std::optional<double> case_bound;
  std::optional<double> sin_theta_bound;
  std::optional<double> delta;
  double norm_v = 0.0;
  double v_base = 0.0;
  double v_inf = 0.0;
  double mu_star = 0.0;
  double theta_star = 0.0;
  std::optional<BirmanSchwingerRecord> birman_schwinger;
  std::optional<ProofDiagnostics> diagnostics;
  MuScan scan;
  std::map<std::string, double> slacks;  // bound name -> bound - exact_norm

  /// Name and value of the smallest present bound.
  std::pair<std::string, double> tightest() const;
};

BoundReport build_bound_report(const AssembledPair& pair, const GapGeometry& geom, double exact_norm,
                               const OptimizerOptions& options = {});

}  // namespace subrot
