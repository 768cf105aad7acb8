#include <CLI11.hpp>
#include <iostream>
#include <sstream>

#include "subrot/cli/commands.hpp"
#include "subrot/linalg.hpp"

namespace {

std::vector<double> parse_grid(const std::string& text) {
  std::vector<double> grid;
  std::istringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (item.empty()) continue;
    std::size_t used = 0;
    const double w = std::stod(item, &used);
    if (used != item.size()) throw std::invalid_argument(item);
    grid.push_back(w);
  }
  return grid;
}

}  // namespace

int main(int argc, char** argv) {
  using namespace subrot::cli;

  CLI::App app{"Spectral subspace rotation under off-diagonal perturbations: exact values and tan 2-theta bounds"};
  app.set_version_flag("--version", std::string(kToolName) + " " + kToolVersion);
  app.require_subcommand(1);

  double tol_spec = subrot::kDefaultSpectralTolFactor;
  std::size_t grid_points = 65;
  bool parallel = false;
  app.add_option("--tol-spec", tol_spec, "relative eps_spec factor (eps = factor * max(1, ||M||))")
      ->check(CLI::PositiveNumber);
  app.add_option("--grid-points", grid_points, "mu grid size of the relative-bound optimizer")
      ->check(CLI::Range(std::size_t{3}, std::size_t{100000}));
  app.add_flag("--parallel", parallel, "evaluate grids and suite instances with OpenMP");

  std::string input, output;

  auto* analyze = app.add_subcommand("analyze", "analyze one instance file and write a report");
  analyze->add_option("input", input, "instance file")->required();
  analyze->add_option("-o,--output", output, "report file")->required();

  std::size_t points = 65;
  auto* mu_scan = app.add_subcommand("mu-scan", "tabulate mu -> v_mu over the guarded gap");
  mu_scan->add_option("input", input, "instance file")->required();
  mu_scan->add_option("-o,--output", output, "CSV table")->required();
  mu_scan->add_option("--points", points, "number of samples (>= 3)");

  SuiteFlags suite_flags;
  auto* suite = app.add_subcommand("suite", "run the randomized property suite");
  suite->add_option("--seed", suite_flags.seed, "generator seed");
  suite->add_option("--count", suite_flags.count, "number of instances");
  suite->add_option("--geometry", suite_flags.geometry, "central | case1 | case2");
  suite->add_option("--dims", suite_flags.dims, "block dimensions P,M");
  suite->add_option("--target-v", suite_flags.target_v, "base relative bound V, or a range LO:HI");
  suite->add_flag("--random-dims", suite_flags.random_dims, "draw block dimensions in [1,P] x [1,M]");
  suite->add_option("--test-slack-floor", suite_flags.slack_floor)->group("");  // test hook
  suite->add_option("-o,--output", output, "CSV table; the summary goes to <output>.summary.json")->required();

  double alpha = 0.0, beta = 0.0;
  std::string w_grid;
  auto* sharpness = app.add_subcommand("sharpness", "2x2 sharpness table");
  sharpness->add_option("--alpha", alpha)->required();
  sharpness->add_option("--beta", beta)->required();
  sharpness->add_option("--w-grid", w_grid, "comma-separated coupling values")->required();
  sharpness->add_option("-o,--output", output, "CSV table")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitBadInput;
  }

  subrot::set_spectral_tol_factor(tol_spec);
  GlobalOptions global;
  global.grid_points = grid_points;
  global.execution = parallel ? subrot::Execution::Parallel : subrot::Execution::Serial;
  Console console{std::cout, std::cerr};

  if (*analyze) return cmd_analyze(input, output, global, console);
  if (*mu_scan) return cmd_mu_scan(input, output, points, global, console);
  if (*suite) return cmd_suite(suite_flags, output, global, console);
  if (*sharpness) {
    std::vector<double> grid;
    try {
      grid = parse_grid(w_grid);
    } catch (const std::exception&) {
      std::cerr << "error: --w-grid must be a comma-separated list of numbers\n";
      return kExitBadInput;
    }
    return cmd_sharpness(alpha, beta, grid, output, global, console);
  }
  return kExitBadInput;
}
