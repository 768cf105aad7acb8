#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "subrot/bounds.hpp"
#include "subrot/operator_model.hpp"
#include "subrot/random.hpp"
#include "subrot/subspace.hpp"

namespace subrot {

// Instance generation ------------------------------------------------------

enum class Geometry { Central, CaseI, CaseII };

const char* to_string(Geometry g) noexcept;
std::optional<Geometry> parse_geometry(const std::string& text);
Layout layout_for(Geometry g) noexcept;

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

/// Spectra are given as eigenvalue ranges of A itself: sigma_minus is negative
/// for Central / Case I and positive for Case II.
struct GeneratorConfig {
  std::uint64_t seed = 1;
  std::size_t n_plus = 2;
  std::size_t n_minus = 2;
  bool random_dims = false;  // draw n+ in [1, n_plus] and n- in [1, n_minus] per instance
  Geometry geometry = Geometry::Central;
  Interval sigma_plus{0.5, 5.0};
  Interval sigma_minus{-5.0, -0.5};
  Interval target_v{1.0, 1.0};  // lo == hi: fixed; otherwise log-uniform (uniform if lo == 0)
  std::size_t count = 1;

  /// Default spectrum ranges for a geometry.
  static GeneratorConfig defaults(Geometry g);
  void validate() const;
};

/// Per-instance target relative bound (the first draw of the instance stream).
double target_v_for(const GeneratorConfig& config, std::size_t index);

/// Deterministic in (seed, index): random eigenvalues, blocks rotated by a
/// product of Givens rotations, coupling rescaled so the base relative bound
/// equals the instance target.
BlockOperatorSpec generate_instance(const GeneratorConfig& config, std::size_t index);

/// Product of n(n-1)/2 Givens rotations with random angles.
Matrix random_orthogonal(std::size_t n, CounterRng& rng);

// 2x2 oracle ---------------------------------------------------------------

/// |w| / sqrt((beta - mu)(mu - alpha)).
double v_mu_closed_form_2x2(double alpha, double beta, double w, double mu);

/// sin(1/2 arctan(2|w| / (beta - alpha))).
double exact_closed_form_2x2(double alpha, double beta, double w);

/// A = diag(beta, alpha), V = [[0, w], [w, 0]], J = diag(1, -1).
AssembledPair pair_2x2(double alpha, double beta, double w);

struct SharpnessRecord {
  double alpha = 0.0;
  double beta = 0.0;
  double w = 0.0;
  double exact_closed_form = 0.0;
  double exact_numeric = 0.0;
  double central_bound_opt = 0.0;
  double classical_bound = 0.0;
  std::optional<double> case_bound;
  double mu_star = 0.0;
  double v_min = 0.0;
  double v_base = 0.0;
  std::map<std::string, double> slacks;
  bool numeric_agrees = false;  // |closed form - numeric| <= 1e-10
  bool sharp = false;           // numeric_agrees and every bound equals exact within 1e-6
};

SharpnessRecord sharpness_2x2(double alpha, double beta, double w, const OptimizerOptions& options = {});

// Full per-instance analysis ----------------------------------------------

struct VadCheck {
  std::size_t samples = 0;
  double worst_margin = 0.0;  // min over samples of rhs - |<x, Vx>|
};

struct InstanceAnalysis {
  GapGeometry geom;
  AngleReport angles;
  BoundReport bounds;
  SignConstancy constancy;
  double sectorial_margin_star = 0.0;  // at mu_star
  std::optional<double> sectorial_margin_fixed;  // at the fixed Case I / II shift
  double off_diagonal_residual = 0.0;
  std::optional<VadCheck> vad;  // Central geometry only
};

struct AnalysisOptions {
  OptimizerOptions optimizer;
  std::size_t constancy_samples = 9;
  std::size_t vad_samples = 1000;
  std::uint64_t vad_seed = 0;
};

InstanceAnalysis analyze_pair(const AssembledPair& pair, const GapGeometry& geom,
                              const AnalysisOptions& options = {});

/// Thresholds for the per-instance properties.
struct PropertyTolerances {
  double slack_floor = -1e-10;
  double strictness = 1e-12;        // exact < sqrt(2)/2 - strictness
  double sign_identity = 1e-10;
  double sign_constancy = 1e-10;
  double sectorial = -1e-8;         // margin floor
  double ordering = 1e-12;          // case <= sin_theta + ordering
  double kappa = 1e-10;
  double angle_consistency = 1e-9;  // | ||P-Q|| - sin(max angle) |
  double vad = 1e-9;
};

struct PropertyOutcome {
  std::string name;
  bool passed = true;
  double value = 0.0;
};

std::vector<PropertyOutcome> evaluate_properties(const InstanceAnalysis& a, const PropertyTolerances& tol = {});

// Property suite -----------------------------------------------------------

struct SuiteRow {
  std::size_t id = 0;
  std::size_t n = 0;
  Geometry geometry = Geometry::Central;
  double target_v = 0.0;
  std::optional<InstanceAnalysis> analysis;
  std::vector<std::string> failed;  // names of violated properties
  std::string error;                // error tag when the pipeline threw
  bool inconclusive = false;        // Birman-Schwinger boundary band
  bool pass = false;
};

struct SuiteAggregate {
  std::size_t violations = 0;
  std::size_t inconclusive = 0;
  std::size_t errors = 0;
  std::map<std::string, double> worst_slack;  // per bound name, min over rows
};

struct SuiteResult {
  std::vector<SuiteRow> rows;  // ordered by id
  SuiteAggregate aggregate;
};

struct SuiteOptions {
  AnalysisOptions analysis;
  PropertyTolerances tolerances;
  Execution execution = Execution::Serial;
};

SuiteRow run_suite_instance(const GeneratorConfig& config, std::size_t index, const SuiteOptions& options);

/// Every instance of the config; rows are merged by id, so serial and parallel
/// execution produce identical results.
SuiteResult run_property_suite(const GeneratorConfig& config, const SuiteOptions& options = {});

}  // namespace subrot
