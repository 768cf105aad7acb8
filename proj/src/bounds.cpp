#include "subrot/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <numbers>
#include <sstream>

#include "subrot/subspace.hpp"

namespace subrot {

double classical_davis_kahan(double norm_v, double d) {
  if (!(d > 0.0)) throw Error(ErrorKind::Domain, "classical bound needs a positive gap d", d);
  if (norm_v < 0.0) throw Error(ErrorKind::Domain, "||V|| must be nonnegative", norm_v);
  return std::sin(0.5 * std::atan(2.0 * norm_v / d));
}

double central_tan2theta_bound(double v_inf) {
  if (!(v_inf >= 0.0)) throw Error(ErrorKind::Domain, "relative bound must be nonnegative", v_inf);
  return std::sin(0.5 * std::atan(v_inf));
}

std::optional<SemiboundedBound> semibounded_tan2theta(double v_base, const GapGeometry& geom) {
  if (v_base < 0.0) throw Error(ErrorKind::Domain, "relative bound must be nonnegative", v_base);
  const double dp = geom.d_plus;
  const double dm = geom.d_minus;
  double delta;
  switch (geom.case_tag) {
    case GapCase::Central:
      return std::nullopt;
    case GapCase::CaseI:
      delta = (dp + dm) / std::sqrt(dp * dm);
      break;
    case GapCase::CaseII:
    case GapCase::CaseIIMirrored:
      delta = (dp - dm) / std::sqrt(dp * dm);
      break;
    default:
      return std::nullopt;
  }
  return SemiboundedBound{std::sin(0.5 * std::atan(2.0 * v_base / delta)), delta};
}

double relative_sin_theta(double v_base, double delta) {
  if (!(delta > 0.0)) throw Error(ErrorKind::Domain, "relative gap length must be positive", delta);
  return v_base / delta;
}

// RelativeBoundProfile -----------------------------------------------------

RelativeBoundProfile::RelativeBoundProfile(const AssembledPair& pair, const GapGeometry& geom)
    : eigenvalues_(pair.decompA.eigenvalues) {
  const Matrix& q = pair.decompA.basis;
  rotated_v_ = q.transposed() * pair.V.matrix() * q;
  const double mid = 0.5 * (geom.alpha + geom.beta);
  for (std::size_t k = 0; k < eigenvalues_.size(); ++k)
    (eigenvalues_[k] < mid ? lower_ : upper_).push_back(k);
  eps_ = spectral_tolerance(pair.decompA.spectral_radius());
  for (const auto* block : {&lower_, &upper_})
    for (std::size_t i : *block)
      for (std::size_t j : *block) diag_residual_ = std::max(diag_residual_, std::abs(rotated_v_(i, j)));
}

bool RelativeBoundProfile::positive_definite(double mu) const {
  for (std::size_t i : lower_)
    if (mu - eigenvalues_[i] <= eps_) return false;
  for (std::size_t j : upper_)
    if (eigenvalues_[j] - mu <= eps_) return false;
  return true;
}

double RelativeBoundProfile::operator()(double mu) const {
  if (!positive_definite(mu)) return std::numeric_limits<double>::quiet_NaN();
  Matrix block(lower_.size(), upper_.size());
  for (std::size_t a = 0; a < lower_.size(); ++a) {
    const std::size_t i = lower_[a];
    const double di = 1.0 / std::sqrt(mu - eigenvalues_[i]);
    for (std::size_t b = 0; b < upper_.size(); ++b) {
      const std::size_t j = upper_[b];
      block(a, b) = rotated_v_(i, j) * di / std::sqrt(eigenvalues_[j] - mu);
    }
  }
  return operator_norm(DenseRect(std::move(block)));
}

// Optimizer ----------------------------------------------------------------

GoldenResult golden_section_minimize(const std::function<double(double)>& f, double a, double b,
                                     double width, int max_iterations) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c);
  double fd = f(d);
  int it = 0;
  for (; it < max_iterations && b - a > width; ++it) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }
  return fc < fd ? GoldenResult{c, fc, it} : GoldenResult{d, fd, it};
}

std::vector<MuSample> scan_relative_bound(const AssembledPair& pair, const GapGeometry& geom,
                                          std::size_t points, Execution execution) {
  if (points < 2) throw Error(ErrorKind::Domain, "a mu scan needs at least 2 points");
  const RelativeBoundProfile profile(pair, geom);
  const double lo = geom.guard_lo();
  const double hi = geom.guard_hi();
  std::vector<MuSample> samples(points);
  std::vector<std::exception_ptr> failures(points);
  const auto count = static_cast<long>(points);
  const bool parallel = execution == Execution::Parallel;
#pragma omp parallel for schedule(static) if (parallel)
  for (long i = 0; i < count; ++i) {
    try {
      const double mu = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count - 1);
      const bool pd = profile.positive_definite(mu);
      samples[i] = MuSample{mu, pd ? profile(mu) : std::numeric_limits<double>::quiet_NaN(), pd};
    } catch (...) {
      failures[i] = std::current_exception();
    }
  }
  for (const auto& f : failures)
    if (f) std::rethrow_exception(f);
  return samples;
}

MuScan optimize_relative_bound(const AssembledPair& pair, const GapGeometry& geom,
                               const OptimizerOptions& options) {
  if (options.grid_points < 3) throw Error(ErrorKind::Domain, "optimizer grid needs at least 3 points");
  MuScan scan;
  scan.samples = scan_relative_bound(pair, geom, options.grid_points, options.execution);

  // Best grid point; ties go to the sample nearest the grid center.
  const std::size_t center = (scan.samples.size() - 1) / 2;
  std::optional<std::size_t> best;
  for (std::size_t i = 0; i < scan.samples.size(); ++i) {
    const auto& s = scan.samples[i];
    if (!s.positive_definite) continue;
    if (!best || s.v_mu < scan.samples[*best].v_mu ||
        (s.v_mu == scan.samples[*best].v_mu &&
         std::abs(static_cast<double>(i) - static_cast<double>(center)) <
             std::abs(static_cast<double>(*best) - static_cast<double>(center)))) {
      best = i;
    }
  }
  if (!best) throw Error(ErrorKind::Internal, "no grid point in the guarded gap is positive definite");

  scan.mu_star = scan.samples[*best].mu;
  scan.v_min = scan.samples[*best].v_mu;

  const RelativeBoundProfile profile(pair, geom);
  const std::size_t left = *best == 0 ? 0 : *best - 1;
  const std::size_t right = std::min(*best + 1, scan.samples.size() - 1);
  const auto refined = golden_section_minimize(
      [&](double mu) {
        const double v = profile(mu);
        return std::isnan(v) ? std::numeric_limits<double>::infinity() : v;
      },
      scan.samples[left].mu, scan.samples[right].mu, options.relative_width * geom.length());
  if (refined.fx < scan.v_min) {
    scan.mu_star = refined.x;
    scan.v_min = refined.fx;
  }
  return scan;
}

// Checks -------------------------------------------------------------------

const char* to_string(Consistency c) noexcept {
  switch (c) {
    case Consistency::Consistent: return "consistent";
    case Consistency::Inconsistent: return "inconsistent";
    case Consistency::Inconclusive: return "inconclusive";
  }
  return "unknown";
}

BirmanSchwingerRecord birman_schwinger_check(const AssembledPair& pair) {
  const auto geom = detect_gap(pair.decompA, pair.J);
  if (!geom.central())
    throw Error(ErrorKind::Domain, "Birman-Schwinger check needs a Central geometry (alpha < 0 < beta)");
  BirmanSchwingerRecord r;
  r.v0 = base_relative_bound(pair);
  const auto absA = apply_spectral_function(pair.decompA, spectral::abs());
  const auto ev = symmetric_eigenvalues(absA + pair.V);
  r.min_eig_form = ev.front();
  r.positive_definite = r.min_eig_form > spectral_tolerance(std::max(std::abs(ev.front()), std::abs(ev.back())));
  if (std::abs(r.v0 - 1.0) <= kBirmanSchwingerBand) {
    r.consistency = Consistency::Inconclusive;
  } else {
    r.consistency = r.positive_definite == (r.v0 < 1.0) ? Consistency::Consistent : Consistency::Inconsistent;
  }
  return r;
}

double fixed_shift(const GapGeometry& geom) {
  switch (geom.case_tag) {
    case GapCase::CaseI: return 0.5 * (geom.d_plus - geom.d_minus);
    case GapCase::CaseII: return 0.5 * (geom.d_plus + geom.d_minus);
    case GapCase::CaseIIMirrored: return -0.5 * (geom.d_plus + geom.d_minus);
    case GapCase::Central: break;
  }
  throw Error(ErrorKind::Domain, "the fixed shift is defined for Case I and Case II only");
}

ProofDiagnostics proof_diagnostics(const AssembledPair& pair, const GapGeometry& geom, double mu) {
  if (geom.case_tag == GapCase::CaseIIMirrored) {
    const auto flipped = negated(pair);
    auto d = proof_diagnostics(flipped, detect_gap(flipped.decompA, flipped.J), -mu);
    d.mu = mu;
    d.mu_fixed_choice = -d.mu_fixed_choice;
    return d;
  }
  if (geom.case_tag == GapCase::Central)
    throw Error(ErrorKind::Domain, "proof diagnostics need Case I (d+ > d-) or Case II geometry");
  if (!(mu > geom.alpha && mu < geom.beta)) {
    std::ostringstream msg;
    msg << "shift " << mu << " lies outside the gap (" << geom.alpha << ", " << geom.beta << ")";
    throw Error(ErrorKind::Domain, msg.str(), mu);
  }
  const bool case_one = geom.case_tag == GapCase::CaseI;
  if (case_one && mu < 0.0)
    throw Error(ErrorKind::Domain, "Case I diagnostics need a nonnegative shift", mu);
  if (!case_one && mu <= geom.d_minus)
    throw Error(ErrorKind::Domain, "Case II diagnostics need mu > d_minus", mu);

  const double mid = 0.5 * (geom.alpha + geom.beta);
  // |A|^{1/2} (|A| - mu)^{-1/2} on the upper cluster, |A|^{1/2} (mu - A)^{-1/2} on the lower.
  const auto upper = apply_spectral_function(pair.decompA, spectral::custom([=](double l) {
    return l > mid ? std::sqrt(std::abs(l) / (std::abs(l) - mu)) : 0.0;
  }));
  const auto lower = apply_spectral_function(pair.decompA, spectral::custom([=](double l) {
    return l < mid ? std::sqrt(std::abs(l) / (mu - l)) : 0.0;
  }));

  ProofDiagnostics d;
  d.mu = mu;
  d.kappa_plus = operator_norm(upper);
  d.kappa_minus = operator_norm(lower);
  d.kappa_plus_bound = std::sqrt(geom.d_plus / (geom.d_plus - mu));
  d.kappa_minus_bound = case_one ? std::sqrt(geom.d_minus / (geom.d_minus + mu))
                                 : std::sqrt(geom.d_minus / (mu - geom.d_minus));
  d.mu_fixed_choice = fixed_shift(geom);
  d.within_bounds = d.kappa_plus <= d.kappa_plus_bound + 1e-10 && d.kappa_minus <= d.kappa_minus_bound + 1e-10;
  return d;
}

// Report -------------------------------------------------------------------

std::pair<std::string, double> BoundReport::tightest() const {
  std::pair<std::string, double> best{"", std::numeric_limits<double>::infinity()};
  const std::pair<const char*, const std::optional<double>*> all[] = {
      {"classical", &classical_bound}, {"central", &central_bound}, {"case", &case_bound},
      {"sin_theta", &sin_theta_bound}};
  for (const auto& [name, value] : all)
    if (value->has_value() && **value < best.second) best = {name, **value};
  return best;
}

BoundReport build_bound_report(const AssembledPair& pair, const GapGeometry& geom, double exact_norm,
                               const OptimizerOptions& options) {
  BoundReport r;
  r.exact_norm = exact_norm;
  r.norm_v = operator_norm(pair.V);
  r.classical_bound = classical_davis_kahan(r.norm_v, geom.length());
  r.v_base = base_relative_bound(pair);

  r.scan = optimize_relative_bound(pair, geom, options);
  r.v_inf = r.scan.v_min;
  r.mu_star = r.scan.mu_star;
  r.theta_star = std::atan(r.v_inf);
  r.central_bound = central_tan2theta_bound(r.v_inf);

  if (const auto sb = semibounded_tan2theta(r.v_base, geom)) {
    r.case_bound = sb->bound;
    r.delta = sb->delta;
    if (geom.case_tag == GapCase::CaseII || geom.case_tag == GapCase::CaseIIMirrored)
      r.sin_theta_bound = relative_sin_theta(r.v_base, sb->delta);
    r.diagnostics = proof_diagnostics(pair, geom, fixed_shift(geom));
  }
  if (geom.central()) r.birman_schwinger = birman_schwinger_check(pair);

  const std::pair<const char*, const std::optional<double>*> all[] = {
      {"classical", &r.classical_bound}, {"central", &r.central_bound}, {"case", &r.case_bound},
      {"sin_theta", &r.sin_theta_bound}};
  for (const auto& [name, value] : all)
    if (value->has_value()) r.slacks[name] = **value - exact_norm;
  return r;
}

}  // namespace subrot
