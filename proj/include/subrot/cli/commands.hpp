#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "subrot/bounds.hpp"
#include "subrot/instance_lab.hpp"

namespace subrot::cli {

inline constexpr const char* kToolName = "subrot";
inline constexpr const char* kToolVersion = "1.0.0";

/// Exit codes shared by every command.
enum ExitCode : int {
  kExitOk = 0,
  kExitViolation = 1,  // suite property violation / sharpness failure
  kExitBadInput = 2,   // malformed input or flags
  kExitNoGap = 3,      // no spectral gap / singular A
  kExitInternal = 4,   // invariant violated: a tool bug
};

struct GlobalOptions {
  std::size_t grid_points = 65;
  Execution execution = Execution::Serial;
};

struct Console {
  std::ostream& out;
  std::ostream& err;
};

int cmd_analyze(const std::string& input, const std::string& output, const GlobalOptions& global, Console console);

int cmd_mu_scan(const std::string& input, const std::string& output, std::size_t points, const GlobalOptions& global,
                Console console);

struct SuiteFlags {
  std::uint64_t seed = 1;
  std::size_t count = 100;
  std::string geometry = "central";
  std::string dims = "2,2";
  std::string target_v = "1";  // "V" or "LO:HI"
  bool random_dims = false;
  double slack_floor = -1e-10;  // test hook: raising it above zero forces violations
};

int cmd_suite(const SuiteFlags& flags, const std::string& output, const GlobalOptions& global, Console console);

int cmd_sharpness(double alpha, double beta, const std::vector<double>& w_grid, const std::string& output,
                  const GlobalOptions& global, Console console);

/// Maps a library error to the documented exit code.
int exit_code_for(ErrorKind kind) noexcept;

/// CSV rendering, exposed for tests.
std::string suite_table(const SuiteResult& result);
std::string sharpness_table(const std::vector<SharpnessRecord>& rows);

}  // namespace subrot::cli
