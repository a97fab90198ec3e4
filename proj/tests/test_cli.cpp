#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "cli.hpp"
#include "support.hpp"

using namespace kclose;
using namespace kclose::cli;

namespace {

RunConfig small() {
  RunConfig c;
  c.samples = 5;
  c.pairs = 5;
  return c;
}

int shell(const std::string& cmd) {
  const int rc = std::system((cmd + " > /dev/null 2>&1").c_str());
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

std::string binary() { return KCLOSE_CLI_PATH; }

}  // namespace

TEST(CliRunTest, DeterministicReports) {
  RunConfig c = small();
  const RunResult a = run("volume", c, "2000-01-01T00:00:00Z");
  const RunResult b = run("volume", c, "2000-01-01T00:00:00Z");
  EXPECT_EQ(a.report.dump(), b.report.dump());
  EXPECT_EQ(a.code, kPass);
  EXPECT_EQ(a.report["tool"], "kclose");
  EXPECT_EQ(a.report["version"], std::string(kVersion));
  EXPECT_EQ(a.report["config"]["p"], 2);
  EXPECT_TRUE(a.report["passed"].get<bool>());

  c.samples = 10;
  const RunResult h1 = run("cartan", c, "t"), h2 = run("cartan", c, "t");
  EXPECT_EQ(h1.report.dump(), h2.report.dump());
}

TEST(CliRunTest, ExitCodes) {
  RunConfig c = small();
  c.e = 1;
  c.m = 2;
  EXPECT_EQ(run("transfer", c, "t").code, kConfig);

  RunConfig empty = small();
  empty.lo = 2;
  empty.hi = 1;
  const RunResult r = run("volume", empty, "t");
  EXPECT_EQ(r.code, kPass);
  EXPECT_NE(r.report.dump().find("empty sweep"), std::string::npos);

  RunConfig prec = small();
  prec.N = 1;
  prec.hi = 3;
  EXPECT_EQ(run("volume", prec, "t").code, kConfig);

  RunConfig ceil = small();
  ceil.ceilings.enumeration = 1;
  const RunResult cr = run("volume", ceil, "t");
  EXPECT_EQ(cr.code, kCeiling);
  EXPECT_TRUE(cr.report.contains("error"));

  EXPECT_EQ(run("bogus", small(), "t").code, kConfig);
  RunConfig bad = small();
  bad.p = 4;
  EXPECT_EQ(run("volume", bad, "t").code, kConfig);
  bad = small();
  bad.format = "xml";
  EXPECT_EQ(run("volume", bad, "t").code, kConfig);
}

TEST(CliRunTest, TransferDefaultsToTheRequiredLevel) {
  RunConfig c = small();
  const RunResult r = run("transfer", c, "t");
  EXPECT_EQ(r.code, kPass);
  EXPECT_NE(r.report.dump().find("m=3"), std::string::npos);
}

TEST(CliRunTest, EpsilonRun) {
  RunConfig c = small();
  c.p = 3;
  c.N = 3;
  const RunResult r = run("epsilon", c, "t");
  EXPECT_EQ(r.code, kPass);
  EXPECT_NE(r.text.find("-1 + 2*z^2"), std::string::npos);
}

TEST(CliConfigTest, JsonOverlay) {
  RunConfig c;
  apply_json(nlohmann::json{{"p", 3}, {"e", 2}, {"hi", nullptr}, {"ceilings", {{"shells", 7}}}}, c);
  EXPECT_EQ(c.p, 3);
  EXPECT_EQ(c.e, 2);
  EXPECT_FALSE(c.hi.has_value());
  EXPECT_EQ(c.ceilings.shells, 7);
  EXPECT_EQ(c.ceilings.enumeration, 2000000);
  EXPECT_FALSE(field_of(c).equal_char());
  apply_json(nlohmann::json{{"e", nullptr}}, c);
  EXPECT_TRUE(field_of(c).equal_char());

  EXPECT_THROW(apply_json(nlohmann::json{{"q", 3}}, c), ConfigError);
  EXPECT_THROW(apply_json(nlohmann::json{{"p", "three"}}, c), ConfigError);
  EXPECT_THROW(apply_json(nlohmann::json::array(), c), ConfigError);

  RunConfig round;
  apply_json(nlohmann::json::parse(to_json(c).dump()), round);
  EXPECT_EQ(to_json(round), to_json(c));
}

TEST(CliConfigTest, Partner) {
  RunConfig c;
  c.N = 6;
  const auto t = partner(c, 3);
  EXPECT_EQ(t.target->spec().e, 6);
  c.e = 4;
  EXPECT_TRUE(partner(c, 4).target->equal_char());
  EXPECT_THROW(partner(c, 5), ConfigError);
}

TEST(CliBinaryTest, ExitCodesAndFiles) {
  const auto dir = std::filesystem::temp_directory_path() / "kclose_cli_test";
  std::filesystem::create_directories(dir);
  const std::string out = (dir / "report.json").string();
  EXPECT_EQ(shell(binary() + " volume --samples 3 -o " + out), 0);
  std::ifstream in(out);
  const auto j = nlohmann::json::parse(in);
  EXPECT_EQ(j["command"], "volume");
  EXPECT_EQ(j["exit_code"], 0);

  const std::string cfg = (dir / "cfg.json").string();
  std::ofstream(cfg) << R"({"p": 3, "hi": 1})";
  EXPECT_EQ(shell(binary() + " volume --config " + cfg), 0);
  std::ofstream(cfg) << R"({"p": 3, "colour": 1})";
  EXPECT_EQ(shell(binary() + " volume --config " + cfg), 2);
  EXPECT_EQ(shell(binary() + " volume --config " + (dir / "missing.json").string()), 2);
  EXPECT_EQ(shell(binary() + " volume --format xml"), 2);
  EXPECT_EQ(shell(binary() + " volume -p 4"), 2);
  EXPECT_EQ(shell(binary() + " volume --enumeration-ceiling 1"), 3);
  EXPECT_EQ(shell(binary() + " transfer -e 1 -m 2"), 2);
  EXPECT_EQ(shell(binary()), 2);
  EXPECT_EQ(shell(binary() + " --version"), 0);
  std::filesystem::remove_all(dir);
}
