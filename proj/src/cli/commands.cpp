#include "subrot/cli/commands.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <ostream>
#include <sstream>

#include "subrot/cli/format.hpp"
#include "subrot/cli/instance_file.hpp"

namespace subrot::cli {

int exit_code_for(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::InvalidInput:
    case ErrorKind::HintMismatch:
    case ErrorKind::Domain:
      return kExitBadInput;
    case ErrorKind::NoGap:
    case ErrorKind::SingularA:
      return kExitNoGap;
    default:
      return kExitInternal;
  }
}

namespace {

Json optional_json(const std::optional<double>& x) { return x ? Json(*x) : Json(nullptr); }

Json geometry_json(const GapGeometry& g) {
  Json j;
  j["case_tag"] = to_string(g.case_tag);
  j["alpha"] = g.alpha;
  j["beta"] = g.beta;
  j["d_plus"] = g.d_plus;
  j["d_minus"] = g.d_minus;
  j["m_plus"] = g.m_plus;
  j["m_minus"] = g.m_minus;
  j["sigma_minus_min"] = g.sigma_minus_min;
  j["sigma_plus_max"] = g.sigma_plus_max;
  j["normalization"] = g.case_tag == GapCase::CaseIIMirrored ? "negated (A -> -A, V -> -V)" : "none";
  return j;
}

Json bounds_json(const BoundReport& b) {
  Json j;
  j["exact_norm"] = b.exact_norm;
  j["classical_bound"] = optional_json(b.classical_bound);
  j["central_bound"] = optional_json(b.central_bound);
  j["case_bound"] = optional_json(b.case_bound);
  j["sin_theta_bound"] = optional_json(b.sin_theta_bound);
  j["delta"] = optional_json(b.delta);
  j["norm_v"] = b.norm_v;
  j["v_base"] = b.v_base;
  j["v_inf"] = b.v_inf;
  j["mu_star"] = b.mu_star;
  j["theta_star"] = b.theta_star;
  Json slacks = Json::object();
  for (const char* key : {"classical", "central", "case", "sin_theta"})
    if (auto it = b.slacks.find(key); it != b.slacks.end()) slacks[key] = it->second;
  j["slacks"] = slacks;
  const auto [name, value] = b.tightest();
  j["tightest"] = {{"name", name}, {"value", value}};
  if (b.birman_schwinger) {
    const auto& bs = *b.birman_schwinger;
    j["birman_schwinger"] = {{"v0", bs.v0},
                             {"min_eig_form", bs.min_eig_form},
                             {"positive_definite", bs.positive_definite},
                             {"consistency", to_string(bs.consistency)}};
  } else {
    j["birman_schwinger"] = nullptr;
  }
  if (b.diagnostics) {
    const auto& d = *b.diagnostics;
    j["proof_diagnostics"] = {{"mu", d.mu},
                              {"mu_fixed_choice", d.mu_fixed_choice},
                              {"kappa_plus", d.kappa_plus},
                              {"kappa_plus_bound", d.kappa_plus_bound},
                              {"kappa_minus", d.kappa_minus},
                              {"kappa_minus_bound", d.kappa_minus_bound},
                              {"within_bounds", d.within_bounds}};
  } else {
    j["proof_diagnostics"] = nullptr;
  }
  return j;
}

Json angles_json(const InstanceAnalysis& a) {
  const auto& r = a.angles;
  Json j;
  j["convention"] = r.convention;
  j["cut"] = r.cut;
  j["norm_diff"] = r.norm_diff;
  j["principal_angles"] = r.principal_angles;
  j["max_angle"] = r.max_angle;
  j["rank_p"] = r.rank_p;
  j["rank_q"] = r.rank_q;
  j["sign_identity_residual"] = r.sign_identity_residual;
  j["sign_constancy_deviation"] = a.constancy.max_deviation;
  j["sectorial_margin"] = r.sectorial_margin;
  j["sectorial_margin_fixed_mu"] = optional_json(a.sectorial_margin_fixed);
  j["gap_persistence"] = r.gap_persistence;
  j["off_diagonal_residual"] = a.off_diagonal_residual;
  return j;
}

struct Loaded {
  std::string bytes;
  InstanceFile file;
  AssembledPair pair;
  GapGeometry geom;
};

Loaded load_instance(const std::string& input) {
  Loaded l;
  l.bytes = read_file(input);
  l.file = parse_instance(l.bytes);
  l.pair = assemble(l.file.spec, l.file.layout);
  l.geom = detect_gap(l.pair.decompA, l.pair.J, l.file.gap_hint);
  return l;
}

template <typename Body>
int guarded(Console console, Body&& body) {
  try {
    return body();
  } catch (const Error& e) {
    console.err << "error (" << to_string(e.kind()) << "): " << e.what() << "\n";
    return exit_code_for(e.kind());
  } catch (const std::exception& e) {
    console.err << "error: " << e.what() << "\n";
    return kExitInternal;
  }
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) parts.push_back(cur);
  return parts;
}

double parse_double(const std::string& s, const char* what) {
  double x = 0.0;
  const auto* end = s.data() + s.size();
  const auto [ptr, ec] = std::from_chars(s.data(), end, x);
  if (ec != std::errc() || ptr != end || !std::isfinite(x))
    throw Error(ErrorKind::InvalidInput, std::string("invalid ") + what + ": '" + s + "'");
  return x;
}

std::size_t parse_size(const std::string& s, const char* what) {
  std::size_t x = 0;
  const auto* end = s.data() + s.size();
  const auto [ptr, ec] = std::from_chars(s.data(), end, x);
  if (ec != std::errc() || ptr != end) throw Error(ErrorKind::InvalidInput, std::string("invalid ") + what + ": '" + s + "'");
  return x;
}

}  // namespace

// analyze ------------------------------------------------------------------

int cmd_analyze(const std::string& input, const std::string& output, const GlobalOptions& global, Console console) {
  return guarded(console, [&] {
    const auto l = load_instance(input);
    AnalysisOptions options;
    options.optimizer.grid_points = global.grid_points;
    options.optimizer.execution = global.execution;
    const auto analysis = analyze_pair(l.pair, l.geom, options);
    const auto outcomes = evaluate_properties(analysis);

    Json doc;
    doc["provenance"] = {{"tool", kToolName},
                         {"version", kToolVersion},
                         {"input_digest", digest(l.bytes)},
                         {"seed", nullptr},
                         {"grid_points", global.grid_points},
                         {"tol_spec", spectral_tol_factor()}};
    doc["instance"] = {{"label", l.file.spec.label},
                       {"layout", to_string(l.file.layout)},
                       {"n_plus", l.file.spec.a_plus.size()},
                       {"n_minus", l.file.spec.a_minus.size()}};
    doc["geometry"] = geometry_json(analysis.geom);
    doc["bounds"] = bounds_json(analysis.bounds);
    doc["angles"] = angles_json(analysis);
    Json checks = Json::array();
    for (const auto& o : outcomes) checks.push_back({{"name", o.name}, {"passed", o.passed}, {"value", o.value}});
    doc["checks"] = checks;
    write_file(output, dump_json(doc));

    const auto failed = std::find_if(outcomes.begin(), outcomes.end(), [](const auto& o) { return !o.passed; });
    if (failed != outcomes.end()) {
      console.err << "internal invariant violated: " << failed->name << " = " << format_number(failed->value)
                  << " (instance " << digest(l.bytes) << ")\n";
      return static_cast<int>(kExitInternal);
    }
    const auto [name, value] = analysis.bounds.tightest();
    console.out << "exact=" << format_number(analysis.bounds.exact_norm) << " tightest=" << name
                << " bound=" << format_number(value) << " slack=" << format_number(value - analysis.bounds.exact_norm)
                << "\n";
    return static_cast<int>(kExitOk);
  });
}

// mu-scan ------------------------------------------------------------------

int cmd_mu_scan(const std::string& input, const std::string& output, std::size_t points, const GlobalOptions& global,
                Console console) {
  return guarded(console, [&] {
    if (points < 3) throw Error(ErrorKind::InvalidInput, "--points must be at least 3");
    const auto l = load_instance(input);
    const auto samples = scan_relative_bound(l.pair, l.geom, points, global.execution);
    OptimizerOptions opt;
    opt.grid_points = global.grid_points;
    opt.execution = global.execution;
    const auto scan = optimize_relative_bound(l.pair, l.geom, opt);

    std::string table = "mu,v_mu,theta_mu,positive_definite\n";
    for (const auto& s : samples) {
      table += format_number(s.mu) + "," + format_number(s.v_mu) + "," + format_number(std::atan(s.v_mu)) + "," +
               (s.positive_definite ? "1" : "0") + "\n";
    }
    table += "# mu_star=" + format_number(scan.mu_star) + ",v_min=" + format_number(scan.v_min) + "\n";
    write_file(output, table);
    console.out << "mu_star=" << format_number(scan.mu_star) << " v_min=" << format_number(scan.v_min) << "\n";
    return static_cast<int>(kExitOk);
  });
}

// suite --------------------------------------------------------------------

std::string suite_table(const SuiteResult& result) {
  std::string t = "id,n,geometry,v_base,v_inf,mu_star,exact,classical,central,case,sin_theta,sign_residual,"
                  "sectorial_margin,gap_ok,pass\n";
  for (const auto& row : result.rows) {
    t += std::to_string(row.id) + "," + std::to_string(row.n) + "," + to_string(row.geometry) + ",";
    if (row.analysis) {
      const auto& a = *row.analysis;
      const auto& b = a.bounds;
      const double margin = std::min(a.sectorial_margin_star, a.sectorial_margin_fixed.value_or(a.sectorial_margin_star));
      t += format_number(b.v_base) + "," + format_number(b.v_inf) + "," + format_number(b.mu_star) + "," +
           format_number(b.exact_norm) + "," + format_optional(b.classical_bound) + "," +
           format_optional(b.central_bound) + "," + format_optional(b.case_bound) + "," +
           format_optional(b.sin_theta_bound) + "," + format_number(a.angles.sign_identity_residual) + "," +
           format_number(margin) + "," + (a.angles.gap_persistence ? "1" : "0") + ",";
    } else {
      t += ",,,,,,,,,,0,";
    }
    t += row.pass ? "1\n" : "0\n";
  }
  return t;
}

int cmd_suite(const SuiteFlags& flags, const std::string& output, const GlobalOptions& global, Console console) {
  return guarded(console, [&]() -> int {
    const auto geometry = parse_geometry(flags.geometry);
    if (!geometry) throw Error(ErrorKind::InvalidInput, "--geometry must be central, case1 or case2");
    GeneratorConfig config = GeneratorConfig::defaults(*geometry);
    config.seed = flags.seed;
    config.count = flags.count;
    config.random_dims = flags.random_dims;

    const auto dims = split(flags.dims, ',');
    if (dims.size() != 2) throw Error(ErrorKind::InvalidInput, "--dims must be P,M");
    config.n_plus = parse_size(dims[0], "--dims");
    config.n_minus = parse_size(dims[1], "--dims");

    const auto tv = split(flags.target_v, ':');
    if (tv.size() == 1) {
      config.target_v = {parse_double(tv[0], "--target-v"), parse_double(tv[0], "--target-v")};
    } else if (tv.size() == 2) {
      config.target_v = {parse_double(tv[0], "--target-v"), parse_double(tv[1], "--target-v")};
    } else {
      throw Error(ErrorKind::InvalidInput, "--target-v must be V or LO:HI");
    }
    config.validate();

    SuiteOptions options;
    options.analysis.optimizer.grid_points = global.grid_points;
    options.execution = global.execution;
    options.tolerances.slack_floor = flags.slack_floor;
    const auto result = run_property_suite(config, options);

    write_file(output, suite_table(result));

    Json summary;
    summary["provenance"] = {{"tool", kToolName},
                             {"version", kToolVersion},
                             {"seed", flags.seed},
                             {"grid_points", global.grid_points},
                             {"tol_spec", spectral_tol_factor()}};
    summary["config"] = {{"geometry", to_string(config.geometry)},
                         {"count", config.count},
                         {"n_plus", config.n_plus},
                         {"n_minus", config.n_minus},
                         {"random_dims", config.random_dims},
                         {"sigma_plus", {config.sigma_plus.lo, config.sigma_plus.hi}},
                         {"sigma_minus", {config.sigma_minus.lo, config.sigma_minus.hi}},
                         {"target_v", {config.target_v.lo, config.target_v.hi}}};
    Json worst = Json::object();
    for (const auto& [name, slack] : result.aggregate.worst_slack) worst[name] = slack;
    summary["aggregate"] = {{"rows", result.rows.size()},
                            {"violations", result.aggregate.violations},
                            {"errors", result.aggregate.errors},
                            {"inconclusive", result.aggregate.inconclusive},
                            {"worst_slack", worst}};
    Json failures = Json::array();
    for (const auto& row : result.rows) {
      if (row.pass) continue;
      failures.push_back({{"id", row.id}, {"failed", row.failed}, {"error", row.error}});
    }
    summary["failures"] = failures;
    write_file(output + ".summary.json", dump_json(summary));

    console.out << "rows=" << result.rows.size() << " violations=" << result.aggregate.violations
                << " inconclusive=" << result.aggregate.inconclusive << "\n";
    return result.aggregate.violations == 0 ? kExitOk : kExitViolation;
  });
}

// sharpness ----------------------------------------------------------------

std::string sharpness_table(const std::vector<SharpnessRecord>& rows) {
  std::string t = "w,exact,central_opt,case_bound,slack_central,slack_case\n";
  for (const auto& r : rows) {
    const std::optional<double> slack_case =
        r.case_bound ? std::optional<double>(*r.case_bound - r.exact_numeric) : std::nullopt;
    t += format_number(r.w) + "," + format_number(r.exact_numeric) + "," + format_number(r.central_bound_opt) + "," +
         format_optional(r.case_bound) + "," + format_number(r.central_bound_opt - r.exact_numeric) + "," +
         format_optional(slack_case) + "\n";
  }
  return t;
}

int cmd_sharpness(double alpha, double beta, const std::vector<double>& w_grid, const std::string& output,
                  const GlobalOptions& global, Console console) {
  return guarded(console, [&]() -> int {
    if (!(alpha < beta)) throw Error(ErrorKind::InvalidInput, "--alpha must be below --beta");
    if (w_grid.empty()) throw Error(ErrorKind::InvalidInput, "--w-grid must not be empty");
    OptimizerOptions opt;
    opt.grid_points = global.grid_points;
    opt.execution = global.execution;
    std::vector<SharpnessRecord> rows;
    for (double w : w_grid) rows.push_back(sharpness_2x2(alpha, beta, w, opt));
    write_file(output, sharpness_table(rows));
    const auto failures = std::count_if(rows.begin(), rows.end(), [](const auto& r) { return !r.sharp; });
    console.out << "rows=" << rows.size() << " not_sharp=" << failures << "\n";
    if (failures > 0) {
      console.err << "sharpness violated in " << failures << " row(s)\n";
      return kExitViolation;
    }
    return kExitOk;
  });
}

}  // namespace subrot::cli
