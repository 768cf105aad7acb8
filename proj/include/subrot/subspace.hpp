#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "subrot/linalg.hpp"
#include "subrot/operator_model.hpp"

namespace subrot {

/// Exact rotation of the gap-side spectral subspace.
struct AngleReport {
  double norm_diff = 0.0;                // ||P - Q||
  std::vector<double> principal_angles;  // ascending, in [0, pi/2]
  double max_angle = 0.0;
  std::size_t rank_p = 0;
  std::size_t rank_q = 0;
  double sign_identity_residual = 0.0;  // | ||P - Q|| - 1/2 ||J - sign(B - cI)|| |
  double sectorial_margin = 0.0;
  bool gap_persistence = true;
  std::string convention;  // which side of the gap P and Q project onto
  double cut = 0.0;        // cut point inside the gap
};

/// Spectral projections of A and B on one side of the gap.
struct GapProjections {
  OrthogonalProjection P;
  OrthogonalProjection Q;
  double cut = 0.0;
  std::string convention;
};

/// Central geometry: P = E_A((0, inf)), Q = E_B((0, inf)).
/// Case I / II: the lower side, P = E_A((-inf, c)), Q = E_B((-inf, c)) with c
/// inside the gap (0 for Case I, the midpoint otherwise).
GapProjections gap_projections(const AssembledPair& pair, const GapGeometry& geom);

/// norm_diff and principal angles; the remaining AngleReport fields are left at defaults.
AngleReport projection_distance_and_angles(const OrthogonalProjection& P, const OrthogonalProjection& Q);

/// 1/2 ||J - sign(B)||.
double sign_difference_identity(const DenseSymmetric& J, const DenseSymmetric& B);

/// min eig of the symmetric part of U = J sign(B - mu I), minus cos(theta_mu).
double sectoriality_check(const AssembledPair& pair, double mu, double theta_mu);

struct SignConstancy {
  double max_deviation = 0.0;
  bool gap_failure = false;  // B - mu I was near-singular at some sample
  std::size_t samples = 0;
};

/// sign(B - mu I) at k uniform samples of the guarded gap; max pairwise ||difference||.
SignConstancy sign_constancy_scan(const AssembledPair& pair, const GapGeometry& geom, std::size_t k);

/// True iff no eigenvalue of B lies in [alpha + eps, beta - eps].
bool gap_persistence_check(const AssembledPair& pair, const GapGeometry& geom);
bool gap_persistence_check(const DenseSymmetric& B, const GapGeometry& geom);

/// Shifted copy B - mu I.
DenseSymmetric shifted(const DenseSymmetric& B, double mu);

}  // namespace subrot
