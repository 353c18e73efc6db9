#include <gtest/gtest.h>
#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include <json.hpp>

namespace {

struct CliRun {
  int code = -1;
  std::string out;
};

// Runs the CLI with stderr merged into stdout only when asked.
CliRun run(const std::string& args, bool merge_stderr = false) {
  std::string cmd = std::string(LATGEO_CLI_PATH) + " " + args + (merge_stderr ? " 2>&1" : " 2>/dev/null");
  CliRun r;
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) return r;
  std::array<char, 4096> buf{};
  std::size_t got;
  while ((got = fread(buf.data(), 1, buf.size(), p)) > 0) r.out.append(buf.data(), got);
  const int status = pclose(p);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string temp_file(const std::string& name, const std::string& content) {
  auto path = std::filesystem::temp_directory_path() / ("latgeo_cli_test_" + name);
  std::ofstream(path) << content;
  return path.string();
}

}  // namespace

TEST(Cli, IntegerPlaneBasisFile) {
  const std::string path = temp_file("z2.txt", "2 2\n1 0\n0 1\n");
  CliRun r = run("params --basis " + path);
  ASSERT_EQ(r.code, 0) << r.out;
  auto j = nlohmann::json::parse(r.out);
  EXPECT_NEAR(j["mu_lo"].get<double>(), 0.70710678118654752, 1e-12);
  EXPECT_NEAR(j["mu_hi"].get<double>(), 0.70710678118654752, 1e-12);
}

TEST(Cli, MalformedFractionIsAParseError) {
  const std::string path = temp_file("bad.txt", "2 2\n1 0\n0 1/0\n");
  CliRun r = run("params --basis " + path, true);
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.out.find("line 3"), std::string::npos) << r.out;
}

TEST(Cli, SameSeedIsByteIdentical) {
  const std::string args = "params --family modp:3,10007,5 --family rect:1,2 --seed 42";
  CliRun a = run(args), b = run(args);
  ASSERT_EQ(a.code, 0);
  EXPECT_EQ(a.out, b.out);
  CliRun csv = run(args + " --format csv");
  EXPECT_EQ(csv.code, 0);
  EXPECT_EQ(csv.out.substr(0, 7), "family,");
}

TEST(Cli, UnknownSuiteIsUsageError) { EXPECT_EQ(run("suite nosuch").code, 2); }

TEST(Cli, MissingInputIsUsageError) {
  EXPECT_EQ(run("params").code, 2);
  EXPECT_EQ(run("").code, 2);
  EXPECT_EQ(run("params --family zn:0").code, 2);
}

TEST(Cli, UncrossingSuitePasses) {
  CliRun r = run("suite uncrossing --seed 7 --trials 1000");
  EXPECT_EQ(r.code, 0) << r.out;
  EXPECT_NE(r.out.find("checks passed"), std::string::npos);
}

TEST(Cli, RoundCertifies) {
  CliRun r = run("round --family kl:3 --seed 3");
  ASSERT_EQ(r.code, 0) << r.out;
  auto j = nlohmann::json::parse(r.out);
  EXPECT_TRUE(j["certificate_holds"].get<bool>());
  EXPECT_LE(j["certified_ratio"].get<double>(), j["bound"].get<double>());
}
