#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <numbers>
#include <sstream>
#include <string>

#include "subrot/cli/commands.hpp"
#include "subrot/cli/format.hpp"
#include "subrot/cli/instance_file.hpp"

using namespace subrot;
using namespace subrot::cli;
namespace fs = std::filesystem;

namespace {

const double kSinPi8 = std::sin(std::numbers::pi / 8.0);

std::string fixture(const std::string& name) { return std::string(SUBROT_FIXTURE_DIR) + "/" + name; }

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    dir_ = fs::temp_directory_path() / (std::string("subrot_cli_") + info->name());
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string out(const std::string& name) const { return (dir_ / name).string(); }

  // Runs the tool with `args`, discarding its console output; returns the exit code.
  int run(const std::string& args) const {
    const std::string cmd = std::string(SUBROT_TOOL_PATH) + " " + args + " >" + out("stdout.txt") + " 2>" +
                            out("stderr.txt");
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  }

  fs::path dir_;
};

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

std::vector<std::string> fields(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream in(line);
  for (std::string f; std::getline(in, f, ',');) out.push_back(f);
  return out;
}

}  // namespace

TEST(Format, SeventeenDigitsAndNonFinite) {
  EXPECT_EQ(format_number(0.1), "0.10000000000000001");
  EXPECT_EQ(format_number(1.0), "1");
  EXPECT_EQ(format_number(std::nan("")), "nan");
  EXPECT_EQ(format_number(-INFINITY), "-inf");
  EXPECT_EQ(format_optional(std::nullopt), "");
  Json doc;
  doc["x"] = 0.1;
  doc["v"] = Json::array({1.0, 2.5});
  doc["bad"] = std::nan("");
  const auto text = dump_json(doc);
  EXPECT_NE(text.find("0.10000000000000001"), std::string::npos);
  EXPECT_NE(text.find("null"), std::string::npos);
  EXPECT_EQ(Json::parse(text)["x"].get<double>(), 0.1);
}

TEST(InstanceFile, RoundTripIsIdempotentAfterNormalization) {
  for (const char* name : {"example_central.json", "example_case2.json", "blocks_3x2.json", "zero_coupling.json"}) {
    const auto first = serialize_instance(parse_instance(read_file(fixture(name))));
    const auto second = serialize_instance(parse_instance(first));
    EXPECT_EQ(first, second) << name;
  }
}

TEST(InstanceFile, ValuesSurviveRoundTripExactly) {
  InstanceFile f;
  f.spec = BlockOperatorSpec{DenseSymmetric({{0.1 + 0.2}}), DenseSymmetric({{1.0 / 3.0}}), DenseRect({{1e-300}}), "x"};
  f.layout = Layout::CaseII;
  f.gap_hint = std::pair{1.0 / 7.0, 0.3};
  const auto g = parse_instance(serialize_instance(f));
  EXPECT_EQ(g.spec.a_plus(0, 0), 0.1 + 0.2);
  EXPECT_EQ(g.spec.a_minus(0, 0), 1.0 / 3.0);
  EXPECT_EQ(g.spec.w(0, 0), 1e-300);
  EXPECT_EQ(g.layout, Layout::CaseII);
  EXPECT_EQ(g.gap_hint->first, 1.0 / 7.0);
}

TEST(InstanceFile, RejectsMalformedDocuments) {
  for (const char* name : {"truncated.json", "ragged.json"}) {
    try {
      parse_instance(read_file(fixture(name)));
      FAIL() << name;
    } catch (const Error& e) {
      EXPECT_EQ(e.kind(), ErrorKind::InvalidInput) << name;
    }
  }
  EXPECT_THROW(parse_instance(R"({"layout": "sideways", "a_plus": [[1]], "a_minus": [[1]], "w": [[1]]})"), Error);
  EXPECT_THROW(parse_instance(R"({"layout": "central", "a_plus": [[1]], "a_minus": [[1]], "w": [[1, 2]]})"), Error);
  EXPECT_THROW(parse_instance(R"({"layout": "central", "a_plus": [[1]], "a_minus": [[1]], "w": [["a"]]})"), Error);
}

TEST(InstanceFile, Digest) {
  EXPECT_EQ(digest(""), "fnv1a64:cbf29ce484222325");
  EXPECT_NE(digest("a"), digest("b"));
}

TEST(ExitCodes, Mapping) {
  EXPECT_EQ(exit_code_for(ErrorKind::InvalidInput), 2);
  EXPECT_EQ(exit_code_for(ErrorKind::HintMismatch), 2);
  EXPECT_EQ(exit_code_for(ErrorKind::NoGap), 3);
  EXPECT_EQ(exit_code_for(ErrorKind::SingularA), 3);
  EXPECT_EQ(exit_code_for(ErrorKind::Internal), 4);
  EXPECT_EQ(exit_code_for(ErrorKind::Convergence), 4);
}

TEST_F(CliTest, AnalyzeExampleReport) {
  ASSERT_EQ(run("analyze " + fixture("example_central.json") + " -o " + out("r.json")), 0);
  const auto doc = Json::parse(read_file(out("r.json")));
  const double exact = doc["bounds"]["exact_norm"].get<double>();
  EXPECT_NEAR(exact, 0.3826834, 1e-7);
  EXPECT_NEAR(exact, kSinPi8, 1e-12);
  EXPECT_NEAR(doc["bounds"]["central_bound"].get<double>(), exact, 1e-6);
  EXPECT_EQ(doc["provenance"]["version"], kToolVersion);
  EXPECT_EQ(doc["provenance"]["input_digest"], digest(read_file(fixture("example_central.json"))));
  std::vector<std::string> keys;
  for (const auto& [k, v] : doc["bounds"]["slacks"].items()) keys.push_back(k);
  EXPECT_EQ(keys, (std::vector<std::string>{"classical", "central"}));
  const auto summary = read_file(out("stdout.txt"));
  EXPECT_NE(summary.find("exact="), std::string::npos);
  EXPECT_NE(summary.find("tightest="), std::string::npos);
}

TEST_F(CliTest, AnalyzeCaseIIHasAllFourSlacks) {
  ASSERT_EQ(run("analyze " + fixture("example_case2.json") + " -o " + out("r.json")), 0);
  const auto doc = Json::parse(read_file(out("r.json")));
  std::vector<std::string> keys;
  for (const auto& [k, v] : doc["bounds"]["slacks"].items()) keys.push_back(k);
  EXPECT_EQ(keys, (std::vector<std::string>{"classical", "central", "case", "sin_theta"}));
  EXPECT_NEAR(doc["bounds"]["case_bound"].get<double>(), kSinPi8, 1e-12);
}

TEST_F(CliTest, AnalyzeExitClasses) {
  EXPECT_EQ(run("analyze " + fixture("truncated.json") + " -o " + out("r.json")), 2);
  EXPECT_NE(read_file(out("stderr.txt")).find("error"), std::string::npos);
  EXPECT_EQ(run("analyze " + fixture("ragged.json") + " -o " + out("r.json")), 2);
  EXPECT_EQ(run("analyze " + fixture("hint_mismatch.json") + " -o " + out("r.json")), 2);
  EXPECT_EQ(run("analyze " + fixture("overlapping_case2.json") + " -o " + out("r.json")), 3);
  EXPECT_EQ(run("analyze " + fixture("missing.json") + " -o " + out("r.json")), 2);
  EXPECT_EQ(run("analyze"), 2);
  EXPECT_EQ(run("--grid-points 1 analyze " + fixture("example_central.json") + " -o " + out("r.json")), 2);
}

TEST_F(CliTest, MuScanExample) {
  ASSERT_EQ(run("mu-scan " + fixture("example_central.json") + " -o " + out("s.csv") + " --points 5"), 0);
  const auto rows = lines(read_file(out("s.csv")));
  ASSERT_EQ(rows.size(), 7u);
  EXPECT_EQ(rows[0], "mu,v_mu,theta_mu,positive_definite");
  const auto mid = fields(rows[3]);
  EXPECT_EQ(std::stod(mid[0]), 0.0);
  EXPECT_NEAR(std::stod(mid[1]), 1.0, 1e-15);
  EXPECT_EQ(mid[3], "1");
  EXPECT_EQ(rows[6].rfind("# mu_star=", 0), 0u);
}

TEST_F(CliTest, MuScanZeroCouplingAndValidation) {
  ASSERT_EQ(run("mu-scan " + fixture("zero_coupling.json") + " -o " + out("s.csv") + " --points 9"), 0);
  const auto rows = lines(read_file(out("s.csv")));
  for (std::size_t i = 1; i + 1 < rows.size(); ++i) EXPECT_EQ(std::stod(fields(rows[i])[1]), 0.0);
  EXPECT_EQ(run("mu-scan " + fixture("example_central.json") + " -o " + out("s.csv") + " --points 2"), 2);
}

TEST_F(CliTest, SuiteEmptyAndTwoByTwo) {
  ASSERT_EQ(run("suite --count 0 -o " + out("e.csv")), 0);
  EXPECT_EQ(lines(read_file(out("e.csv"))).size(), 1u);

  ASSERT_EQ(run("suite --geometry central --dims 1,1 --count 100 --seed 7 -o " + out("t.csv")), 0);
  const auto rows = lines(read_file(out("t.csv")));
  ASSERT_EQ(rows.size(), 101u);
  EXPECT_EQ(rows[0],
            "id,n,geometry,v_base,v_inf,mu_star,exact,classical,central,case,sin_theta,sign_residual,"
            "sectorial_margin,gap_ok,pass");
  for (std::size_t i = 1; i < rows.size(); ++i) EXPECT_EQ(fields(rows[i]).back(), "1") << rows[i];
  const auto summary = Json::parse(read_file(out("t.csv") + ".summary.json"));
  EXPECT_EQ(summary["aggregate"]["violations"], 0);
  EXPECT_EQ(summary["provenance"]["seed"], 7);
}

TEST_F(CliTest, SuiteViolationHookAndFlagErrors) {
  EXPECT_EQ(run("suite --count 3 --test-slack-floor 1 -o " + out("v.csv")), 1);
  const auto rows = lines(read_file(out("v.csv")));
  ASSERT_EQ(rows.size(), 4u);
  for (std::size_t i = 1; i < rows.size(); ++i) EXPECT_EQ(fields(rows[i]).back(), "0");
  EXPECT_EQ(run("suite --geometry sideways -o " + out("x.csv")), 2);
  EXPECT_EQ(run("suite --dims 3 -o " + out("x.csv")), 2);
  EXPECT_EQ(run("suite --target-v abc -o " + out("x.csv")), 2);
  EXPECT_EQ(run("suite --count -1 -o " + out("x.csv")), 2);
}

TEST_F(CliTest, SharpnessTables) {
  ASSERT_EQ(run("sharpness --alpha -1 --beta 1 --w-grid 0.1,1,5 -o " + out("s.csv")), 0);
  auto rows = lines(read_file(out("s.csv")));
  ASSERT_EQ(rows.size(), 4u);
  EXPECT_EQ(rows[0], "w,exact,central_opt,case_bound,slack_central,slack_case");
  for (std::size_t i = 1; i < rows.size(); ++i) EXPECT_LE(std::abs(std::stod(fields(rows[i])[4])), 1e-6);

  ASSERT_EQ(run("sharpness --alpha 1 --beta 3 --w-grid 1 -o " + out("c.csv")), 0);
  rows = lines(read_file(out("c.csv")));
  const auto f = fields(rows[1]);
  EXPECT_NEAR(std::stod(f[1]), kSinPi8, 1e-6);
  EXPECT_NEAR(std::stod(f[3]), kSinPi8, 1e-6);

  EXPECT_EQ(run("sharpness --alpha -1 --beta 1 --w-grid '' -o " + out("s.csv")), 2);
  EXPECT_EQ(run("sharpness --alpha -1 --beta 1 --w-grid 1,x -o " + out("s.csv")), 2);
  EXPECT_EQ(run("sharpness --alpha 1 --beta 1 --w-grid 1 -o " + out("s.csv")), 2);
}

TEST_F(CliTest, OutputsAreByteIdenticalAcrossRuns) {
  const std::vector<std::pair<std::string, std::string>> commands = {
      {"analyze " + fixture("blocks_3x2.json") + " -o ", "a.json"},
      {"mu-scan " + fixture("blocks_3x2.json") + " --points 17 -o ", "m.csv"},
      {"suite --geometry case2 --dims 4,3 --random-dims --count 12 --target-v 0.1:10 --seed 3 -o ", "s.csv"},
      {"sharpness --alpha -0.5 --beta 2 --w-grid 0.1,0.5,2 -o ", "h.csv"},
  };
  for (const auto& [cmd, file] : commands) {
    ASSERT_EQ(run(cmd + out("1_" + file)), 0) << cmd;
    ASSERT_EQ(run(cmd + out("2_" + file)), 0) << cmd;
    EXPECT_EQ(read_file(out("1_" + file)), read_file(out("2_" + file))) << cmd;
  }
  EXPECT_EQ(read_file(out("1_s.csv.summary.json")), read_file(out("2_s.csv.summary.json")));
  // The parallel path writes the same bytes.
  ASSERT_EQ(run("--parallel " + commands[2].first + out("p_s.csv")), 0);
  EXPECT_EQ(read_file(out("1_s.csv")), read_file(out("p_s.csv")));
}

TEST_F(CliTest, VersionFlag) {
  EXPECT_EQ(run("--version"), 0);
  EXPECT_NE(read_file(out("stdout.txt")).find(kToolVersion), std::string::npos);
}
