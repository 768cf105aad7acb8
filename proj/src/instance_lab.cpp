#include "subrot/instance_lab.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <numbers>
#include <sstream>

namespace subrot {

const char* to_string(Geometry g) noexcept {
  switch (g) {
    case Geometry::Central: return "central";
    case Geometry::CaseI: return "case1";
    case Geometry::CaseII: return "case2";
  }
  return "unknown";
}

std::optional<Geometry> parse_geometry(const std::string& text) {
  if (text == "central") return Geometry::Central;
  if (text == "case1" || text == "caseI") return Geometry::CaseI;
  if (text == "case2" || text == "caseII") return Geometry::CaseII;
  return std::nullopt;
}

Layout layout_for(Geometry g) noexcept { return g == Geometry::CaseII ? Layout::CaseII : Layout::Central; }

// Generation ---------------------------------------------------------------

GeneratorConfig GeneratorConfig::defaults(Geometry g) {
  GeneratorConfig c;
  c.geometry = g;
  switch (g) {
    case Geometry::Central:
      c.sigma_plus = {0.5, 5.0};
      c.sigma_minus = {-5.0, -0.5};
      break;
    case Geometry::CaseI:
      c.sigma_plus = {2.0, 6.0};
      c.sigma_minus = {-1.8, -0.2};
      break;
    case Geometry::CaseII:
      c.sigma_plus = {2.0, 6.0};
      c.sigma_minus = {0.2, 1.5};
      break;
  }
  return c;
}

void GeneratorConfig::validate() const {
  auto fail = [](const std::string& why) { throw Error(ErrorKind::InvalidInput, "generator config: " + why); };
  if (n_plus == 0 || n_minus == 0) fail("dimensions must be positive");
  if (n_plus + n_minus > kMaxDimension) fail("total dimension exceeds the supported maximum");
  for (const auto* r : {&sigma_plus, &sigma_minus, &target_v}) {
    if (!std::isfinite(r->lo) || !std::isfinite(r->hi) || r->lo > r->hi) fail("ranges need finite lo <= hi");
  }
  if (target_v.lo < 0.0) fail("target_v must be nonnegative");
  switch (geometry) {
    case Geometry::Central:
      if (!(sigma_minus.hi < 0.0 && sigma_plus.lo > 0.0)) fail("central needs sigma_minus < 0 < sigma_plus");
      break;
    case Geometry::CaseI:
      if (!(sigma_minus.hi < 0.0 && sigma_plus.lo > 0.0)) fail("case1 needs sigma_minus < 0 < sigma_plus");
      if (!(-sigma_minus.lo < sigma_plus.lo)) fail("case1 needs |inf sigma_minus| < inf sigma_plus");
      break;
    case Geometry::CaseII:
      if (!(sigma_minus.lo > 0.0 && sigma_minus.hi < sigma_plus.lo))
        fail("case2 needs 0 < sigma_minus < sigma_plus");
      break;
  }
}

double target_v_for(const GeneratorConfig& config, std::size_t index) {
  CounterRng rng(config.seed, index);
  const double u = rng.uniform();
  const auto [lo, hi] = config.target_v;
  if (lo == hi) return lo;
  if (lo <= 0.0) return lo + (hi - lo) * u;
  return lo * std::exp(u * std::log(hi / lo));
}

Matrix random_orthogonal(std::size_t n, CounterRng& rng) {
  Matrix q = Matrix::identity(n);
  for (std::size_t p = 0; p + 1 < n; ++p) {
    for (std::size_t r = p + 1; r < n; ++r) {
      const double angle = rng.uniform(0.0, 2.0 * std::numbers::pi);
      const double c = std::cos(angle);
      const double s = std::sin(angle);
      for (std::size_t k = 0; k < n; ++k) {
        const double a = q(k, p);
        const double b = q(k, r);
        q(k, p) = c * a - s * b;
        q(k, r) = s * a + c * b;
      }
    }
  }
  return q;
}

namespace {

struct RotatedBlock {
  DenseSymmetric matrix;
  Matrix basis;
  std::vector<double> eigenvalues;
};

RotatedBlock rotated_block(std::vector<double> eigenvalues, CounterRng& rng) {
  const std::size_t n = eigenvalues.size();
  Matrix q = random_orthogonal(n, rng);
  Matrix scaled = q;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k) scaled(i, k) *= eigenvalues[k];
  return {DenseSymmetric::symmetrize(scaled * q.transposed()), std::move(q), std::move(eigenvalues)};
}

Matrix inverse_sqrt_of(const RotatedBlock& b) {
  const std::size_t n = b.eigenvalues.size();
  Matrix scaled = b.basis;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k) scaled(i, k) /= std::sqrt(b.eigenvalues[k]);
  return scaled * b.basis.transposed();
}

}  // namespace

BlockOperatorSpec generate_instance(const GeneratorConfig& config, std::size_t index) {
  config.validate();
  CounterRng rng(config.seed, index);
  rng.next_u64();  // the target_v draw, see target_v_for
  const double target = target_v_for(config, index);

  const std::size_t np = config.random_dims ? rng.uniform_int(1, config.n_plus) : config.n_plus;
  const std::size_t nm = config.random_dims ? rng.uniform_int(1, config.n_minus) : config.n_minus;

  std::vector<double> plus(np);
  for (double& l : plus) l = rng.uniform(config.sigma_plus.lo, config.sigma_plus.hi);
  // a_minus carries |lower cluster| in the Central layout and the cluster itself in Case II.
  const bool central_layout = config.geometry != Geometry::CaseII;
  std::vector<double> minus(nm);
  for (double& l : minus) {
    const double x = rng.uniform(config.sigma_minus.lo, config.sigma_minus.hi);
    l = central_layout ? -x : x;
  }
  const auto a_plus = rotated_block(std::move(plus), rng);
  const auto a_minus = rotated_block(std::move(minus), rng);

  BlockOperatorSpec spec;
  spec.a_plus = a_plus.matrix;
  spec.a_minus = a_minus.matrix;
  std::ostringstream label;
  label << to_string(config.geometry) << "-seed" << config.seed << "-" << index;
  spec.label = label.str();

  if (target == 0.0) {
    spec.w = DenseRect(Matrix(np, nm));
    return spec;
  }

  // v is the largest singular value of a_plus^{-1/2} W a_minus^{-1/2} and is
  // homogeneous of degree one in W.
  const Matrix left = inverse_sqrt_of(a_plus);
  const Matrix right = inverse_sqrt_of(a_minus);
  for (int attempt = 0; attempt < 10; ++attempt) {
    Matrix w(np, nm);
    for (double& x : w.data()) x = rng.uniform(-1.0, 1.0);
    const double v = operator_norm(DenseRect(left * w * right));
    if (v > 0.0) {
      w *= target / v;
      spec.w = DenseRect(std::move(w));
      return spec;
    }
  }
  throw Error(ErrorKind::Internal, "coupling draw was zero ten times in a row");
}

// 2x2 oracle ---------------------------------------------------------------

double v_mu_closed_form_2x2(double alpha, double beta, double w, double mu) {
  if (!(mu > alpha && mu < beta)) throw Error(ErrorKind::Domain, "mu must lie in the open gap", mu);
  return std::abs(w) / std::sqrt((beta - mu) * (mu - alpha));
}

double exact_closed_form_2x2(double alpha, double beta, double w) {
  if (!(alpha < beta)) throw Error(ErrorKind::Domain, "need alpha < beta");
  return std::sin(0.5 * std::atan(2.0 * std::abs(w) / (beta - alpha)));
}

AssembledPair pair_2x2(double alpha, double beta, double w) {
  return make_pair(DenseSymmetric{{beta, 0.0}, {0.0, alpha}}, DenseSymmetric{{0.0, w}, {w, 0.0}},
                   DenseSymmetric{{1.0, 0.0}, {0.0, -1.0}});
}

SharpnessRecord sharpness_2x2(double alpha, double beta, double w, const OptimizerOptions& options) {
  if (!(alpha < beta)) throw Error(ErrorKind::Domain, "sharpness instance needs alpha < beta");
  SharpnessRecord r;
  r.alpha = alpha;
  r.beta = beta;
  r.w = w;
  r.exact_closed_form = exact_closed_form_2x2(alpha, beta, w);

  const auto pair = pair_2x2(alpha, beta, w);
  const auto geom = detect_gap(pair.decompA, pair.J);
  const auto proj = gap_projections(pair, geom);
  r.exact_numeric = projection_distance_and_angles(proj.P, proj.Q).norm_diff;

  const auto report = build_bound_report(pair, geom, r.exact_numeric, options);
  r.central_bound_opt = *report.central_bound;
  r.classical_bound = *report.classical_bound;
  r.case_bound = report.case_bound;
  r.mu_star = report.mu_star;
  r.v_min = report.v_inf;
  r.v_base = report.v_base;
  r.slacks = report.slacks;

  r.numeric_agrees = std::abs(r.exact_closed_form - r.exact_numeric) <= 1e-10;
  r.sharp = r.numeric_agrees && std::abs(r.central_bound_opt - r.exact_numeric) <= 1e-6 &&
            (!r.case_bound || std::abs(*r.case_bound - r.exact_numeric) <= 1e-6);
  return r;
}

// Analysis -----------------------------------------------------------------

namespace {

VadCheck vad_check(const AssembledPair& pair, double v0, std::size_t samples, std::uint64_t seed) {
  const std::size_t n = pair.A.size();
  const Matrix s0 = pair.J.matrix() * pair.A.matrix();
  CounterRng rng(seed, 0xC0FFEE);
  VadCheck out;
  out.samples = samples;
  out.worst_margin = std::numeric_limits<double>::infinity();
  std::vector<double> x(n), xp(n), xm(n);
  for (std::size_t s = 0; s < samples; ++s) {
    double norm = 0.0;
    for (double& xi : x) {
      xi = rng.uniform(-1.0, 1.0);
      norm += xi * xi;
    }
    norm = std::sqrt(norm);
    if (norm == 0.0) continue;
    for (double& xi : x) xi /= norm;
    for (std::size_t i = 0; i < n; ++i) {
      const double jx = dot(pair.J.matrix().row(i), x);
      xp[i] = 0.5 * (x[i] + jx);
      xm[i] = 0.5 * (x[i] - jx);
    }
    const double form = dot(x, pair.V.matrix() * std::span<const double>(x));
    const double ap = dot(xp, s0 * std::span<const double>(xp));
    const double am = dot(xm, s0 * std::span<const double>(xm));
    const double rhs = 2.0 * v0 * std::sqrt(std::max(ap, 0.0) * std::max(am, 0.0));
    out.worst_margin = std::min(out.worst_margin, rhs - std::abs(form));
  }
  if (samples == 0) out.worst_margin = 0.0;
  return out;
}

}  // namespace

InstanceAnalysis analyze_pair(const AssembledPair& pair, const GapGeometry& geom, const AnalysisOptions& options) {
  InstanceAnalysis a;
  a.geom = geom;
  a.off_diagonal_residual = verify_off_diagonal(pair.V, pair.J);

  const auto proj = gap_projections(pair, geom);
  a.angles = projection_distance_and_angles(proj.P, proj.Q);
  a.angles.convention = proj.convention;
  a.angles.cut = proj.cut;
  a.angles.sign_identity_residual =
      std::abs(a.angles.norm_diff - sign_difference_identity(pair.J, shifted(pair.B, proj.cut)));
  a.angles.gap_persistence = gap_persistence_check(pair, geom);

  a.bounds = build_bound_report(pair, geom, a.angles.norm_diff, options.optimizer);
  a.constancy = sign_constancy_scan(pair, geom, options.constancy_samples);

  a.sectorial_margin_star = sectoriality_check(pair, a.bounds.mu_star, a.bounds.theta_star);
  a.angles.sectorial_margin = a.sectorial_margin_star;
  if (geom.semibounded() && a.bounds.diagnostics) {
    const double mu = a.bounds.diagnostics->mu_fixed_choice;
    const double v_mu = relative_bound_at(pair, shifted_form_operator(pair, mu));
    a.sectorial_margin_fixed = sectoriality_check(pair, mu, std::atan(v_mu));
  }
  if (geom.central()) a.vad = vad_check(pair, a.bounds.v_base, options.vad_samples, options.vad_seed);
  return a;
}

std::vector<PropertyOutcome> evaluate_properties(const InstanceAnalysis& a, const PropertyTolerances& tol) {
  std::vector<PropertyOutcome> out;
  auto check = [&](std::string name, bool ok, double value) { out.push_back({std::move(name), ok, value}); };
  const auto& b = a.bounds;
  const double half_sqrt2 = std::numbers::sqrt2 / 2.0;

  for (const auto& [name, slack] : b.slacks) check("slack_" + name, slack >= tol.slack_floor, slack);
  check("strict_below_sqrt2_over_2", b.exact_norm < half_sqrt2 - tol.strictness, b.exact_norm);
  if (b.central_bound) check("central_bound_below_sqrt2_over_2", *b.central_bound < half_sqrt2, *b.central_bound);
  check("sign_identity", a.angles.sign_identity_residual <= tol.sign_identity, a.angles.sign_identity_residual);
  check("sign_constancy", !a.constancy.gap_failure && a.constancy.max_deviation <= tol.sign_constancy,
        a.constancy.max_deviation);
  check("gap_persistence", a.angles.gap_persistence, a.angles.gap_persistence ? 1.0 : 0.0);
  check("sectorial_mu_star", a.sectorial_margin_star >= tol.sectorial, a.sectorial_margin_star);
  if (a.sectorial_margin_fixed)
    check("sectorial_mu_fixed", *a.sectorial_margin_fixed >= tol.sectorial, *a.sectorial_margin_fixed);
  if (b.case_bound && b.sin_theta_bound)
    check("case_below_sin_theta", *b.case_bound <= *b.sin_theta_bound + tol.ordering,
          *b.sin_theta_bound - *b.case_bound);
  if (b.birman_schwinger)
    check("birman_schwinger", b.birman_schwinger->consistency != Consistency::Inconsistent, b.birman_schwinger->v0);
  if (b.diagnostics) {
    const auto& d = *b.diagnostics;
    check("kappa_plus", d.kappa_plus <= d.kappa_plus_bound + tol.kappa, d.kappa_plus_bound - d.kappa_plus);
    check("kappa_minus", d.kappa_minus <= d.kappa_minus_bound + tol.kappa, d.kappa_minus_bound - d.kappa_minus);
  }
  check("equal_ranks", a.angles.rank_p == a.angles.rank_q,
        static_cast<double>(a.angles.rank_p) - static_cast<double>(a.angles.rank_q));
  if (a.angles.rank_p == a.angles.rank_q && !a.angles.principal_angles.empty()) {
    const double gap = std::abs(a.angles.norm_diff - std::sin(a.angles.max_angle));
    check("angle_consistency", gap <= tol.angle_consistency, gap);
  }
  if (a.vad) check("cross_form_bound", a.vad->worst_margin >= -tol.vad, a.vad->worst_margin);
  check("off_diagonal", a.off_diagonal_residual <= 1e-10 * std::max(1.0, b.norm_v), a.off_diagonal_residual);
  return out;
}

// Suite --------------------------------------------------------------------

SuiteRow run_suite_instance(const GeneratorConfig& config, std::size_t index, const SuiteOptions& options) {
  SuiteRow row;
  row.id = index;
  row.geometry = config.geometry;
  try {
    row.target_v = target_v_for(config, index);
    const auto spec = generate_instance(config, index);
    row.n = spec.a_plus.size() + spec.a_minus.size();
    const auto pair = assemble(spec, layout_for(config.geometry));
    const auto geom = detect_gap(pair.decompA, pair.J);
    AnalysisOptions analysis = options.analysis;
    analysis.vad_seed = splitmix64(config.seed ^ static_cast<std::uint64_t>(index));
    row.analysis = analyze_pair(pair, geom, analysis);

    auto outcomes = evaluate_properties(*row.analysis, options.tolerances);
    const double v = row.analysis->bounds.v_base;
    outcomes.push_back({"generator_target", std::abs(v - row.target_v) <= 1e-6 * std::max(1.0, row.target_v),
                        v - row.target_v});
    for (const auto& o : outcomes)
      if (!o.passed) row.failed.push_back(o.name);
    const auto& bs = row.analysis->bounds.birman_schwinger;
    row.inconclusive = bs && bs->consistency == Consistency::Inconclusive;
    row.pass = row.failed.empty();
  } catch (const Error& e) {
    row.error = std::string(to_string(e.kind())) + ": " + e.what();
    row.pass = false;
  } catch (const std::exception& e) {
    row.error = std::string("exception: ") + e.what();
    row.pass = false;
  }
  return row;
}

SuiteResult run_property_suite(const GeneratorConfig& config, const SuiteOptions& options) {
  config.validate();
  SuiteResult result;
  result.rows.resize(config.count);
  const auto count = static_cast<long>(config.count);
  const bool parallel = options.execution == Execution::Parallel;
  SuiteOptions inner = options;
  inner.analysis.optimizer.execution = Execution::Serial;
#pragma omp parallel for schedule(dynamic, 4) if (parallel)
  for (long i = 0; i < count; ++i) result.rows[i] = run_suite_instance(config, static_cast<std::size_t>(i), inner);

  auto& agg = result.aggregate;
  for (const auto& row : result.rows) {
    if (!row.pass) ++agg.violations;
    if (!row.error.empty()) ++agg.errors;
    if (row.inconclusive) ++agg.inconclusive;
    if (!row.analysis) continue;
    for (const auto& [name, slack] : row.analysis->bounds.slacks) {
      auto it = agg.worst_slack.find(name);
      if (it == agg.worst_slack.end() || slack < it->second) agg.worst_slack[name] = slack;
    }
  }
  return result;
}

}  // namespace subrot
