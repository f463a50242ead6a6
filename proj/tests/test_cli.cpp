#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <regex>
#include <string>

#include <json.hpp>

#include "treecover/io.hpp"

namespace fs = std::filesystem;
using namespace treecover;

namespace {

struct Run {
  int code = -1;
  std::string output;
};

Run run(const std::string& args) {
  const std::string cmd = std::string(TREECOVER_CLI_PATH) + " " + args + " 2>&1";
  Run r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return r;
  char buf[4096];
  while (std::fgets(buf, sizeof buf, pipe)) r.output += buf;
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("treecover_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  fs::path dir_;
};

double field(const std::string& text, const std::string& key) {
  const std::regex re(key + "=([-+0-9.eE]+)");
  std::smatch m;
  if (!std::regex_search(text, m, re)) return std::nan("");
  return std::stod(m[1]);
}

}  // namespace

TEST_F(Cli, SimulateDepthOneMatchesOracle) {
  const auto out = path("t1.csv");
  const auto r = run("simulate --lambda 0.5 --depth 1 --family raw --samples 100000 --seed 7 --out " + out);
  ASSERT_EQ(r.code, 0) << r.output;
  const double mean = field(r.output, "mean"), se = field(r.output, " se");
  EXPECT_NEAR(mean, 5.0, 3.0 * se) << r.output;
  EXPECT_TRUE(fs::exists(out + ".manifest.ini"));
  std::ifstream in(out, std::ios::binary);
  const auto rows = read_samples_csv(in);
  EXPECT_EQ(rows.size(), 100000u);
}

TEST_F(Cli, SimulateTildeDepthOne) {
  const auto r = run("simulate --lambda 0.5 --depth 1 --family tilde --samples 2000 --seed 3 --out " +
                     path("tilde.csv"));
  ASSERT_EQ(r.code, 0) << r.output;
  // Two states with rate 1 out of each: the cover time is Exp(1).
  EXPECT_NEAR(field(r.output, "mean"), 1.0, 4.0 * field(r.output, " se"));
}

TEST_F(Cli, UsageErrors) {
  auto r = run("simulate --depth 3");
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.output.find("lambda"), std::string::npos);
  EXPECT_EQ(run("simulate --lambda -1 --depth 3").code, 2);
  EXPECT_EQ(run("simulate --lambda 0.5 --depth 40").code, 2);
  EXPECT_EQ(run("simulate --lambda 0.5 --depth 3 --family other").code, 2);
  EXPECT_EQ(run("table --depths 9:4 --out " + path("t.csv")).code, 2);
  EXPECT_EQ(run("--help").code, 0);
  EXPECT_EQ(run("--version").code, 0);
}

TEST_F(Cli, CompareSameFileAndErrors) {
  const auto a = path("a.csv");
  ASSERT_EQ(run("simulate --lambda 0.5 --depth 6 --samples 500 --seed 1 --out " + a).code, 0);
  const auto report = path("cmp.json");
  const auto r = run("compare --a " + a + " --b " + a + " --out " + report);
  ASSERT_EQ(r.code, 0) << r.output;
  std::ifstream in(report);
  const auto j = nlohmann::json::parse(in);
  EXPECT_EQ(j.at("ks").get<double>(), 0.0);
  EXPECT_TRUE(j.at("pass").get<bool>());
  const auto empty = path("empty.csv");
  std::ofstream(empty).close();
  EXPECT_EQ(run("compare --a " + a + " --b " + empty).code, 1);
  std::ofstream(path("bad.csv")) << "x,y\r\n1,2\r\n";
  EXPECT_EQ(run("compare --a " + a + " --b " + path("bad.csv")).code, 1);
  EXPECT_EQ(run("compare --a " + a + " --b " + path("missing.csv")).code, 1);
}

TEST_F(Cli, CompareStrictFailsOnDifferentLaws) {
  const auto a = path("a.csv"), b = path("b.csv");
  ASSERT_EQ(run("simulate --lambda 0.5 --depth 6 --samples 400 --seed 1 --out " + a).code, 0);
  ASSERT_EQ(run("simulate --lambda 0.5 --depth 3 --samples 400 --seed 1 --out " + b).code, 0);
  EXPECT_EQ(run("compare --column tau --strict --a " + a + " --b " + b).code, 1);
  EXPECT_EQ(run("compare --column tau --a " + a + " --b " + b).code, 0);
}

TEST_F(Cli, TableHasFiveRows) {
  const auto out = path("table.csv");
  const auto r = run("table --lambdas 0.5,1,1.5,2,3 --depths 4:9 --cover-depths 3:6 --samples 40 --out " + out);
  ASSERT_EQ(r.code, 0) << r.output;
  std::ifstream in(out, std::ios::binary);
  const auto rows = read_csv(in);
  ASSERT_EQ(rows.size(), 6u);
  EXPECT_EQ(rows[0][0], "lambda");
}

TEST_F(Cli, GaussianJson) {
  const auto out = path("esup.json");
  const auto r = run("gaussian --lambda 0.5 --depth 8 --samples 10000 --out " + out);
  ASSERT_EQ(r.code, 0) << r.output;
  std::ifstream in(out);
  const auto j = nlohmann::json::parse(in);
  const auto e = estimate_from_json(j);
  EXPECT_EQ(e.n, 8);
  EXPECT_EQ(e.samples, 10000u);
  EXPECT_GT(e.estimate, 0.0);
  EXPECT_GT(j.at("gamma2_upper").get<double>(), 1.0);
}

TEST_F(Cli, TraceCheckAndOracle) {
  const auto r = run("trace-check --depth 5 --out " + path("trace.json"));
  ASSERT_EQ(r.code, 0) << r.output;
  EXPECT_LE(field(r.output, "max"), 1e-9);
  const auto o = run("oracle --lambda 0.5 --depth 2");
  ASSERT_EQ(o.code, 0) << o.output;
  EXPECT_NEAR(field(o.output, "cover_from_root"), 42.04545454545456, 1e-9);
}

TEST_F(Cli, LadderWritesLevels) {
  const auto out = path("ladder.csv");
  const auto r = run("ladder --lambda 0.5 --depth 8 --samples 50 --levels 2,4,8 --out " + out);
  ASSERT_EQ(r.code, 0) << r.output;
  std::ifstream in(out, std::ios::binary);
  EXPECT_EQ(read_samples_csv(in).size(), 150u);
}

TEST_F(Cli, ManifestReplayIsBitIdenticalAcrossWorkers) {
  const auto out = path("run.csv");
  ASSERT_EQ(run("simulate --lambda 0.5 --depth 7 --samples 300 --seed 5 --family bar --out " + out +
                " --workers 1")
                .code,
            0);
  const auto first = read_file(out);
  const auto manifest = read_file(out + ".manifest.ini");
  EXPECT_NE(manifest.find("config_hash="), std::string::npos);
  EXPECT_NE(manifest.find("[simulate]"), std::string::npos);
  EXPECT_EQ(manifest.find("workers"), std::string::npos);
  fs::remove(out);
  ASSERT_EQ(run("--config " + out + ".manifest.ini --workers 3").code, 0);
  EXPECT_EQ(fnv1a64(read_file(out)), fnv1a64(first));
  EXPECT_EQ(read_file(out + ".manifest.ini"), manifest);
  // Flags override the config file.
  const auto r = run("--config " + out + ".manifest.ini simulate --samples 10");
  ASSERT_EQ(r.code, 0) << r.output;
  std::ifstream in(out, std::ios::binary);
  EXPECT_EQ(read_samples_csv(in).size(), 10u);
}

TEST_F(Cli, ManifestReplayWithUnsetListOptions) {
  const auto out = path("ladder.csv");
  ASSERT_EQ(run("ladder --lambda 0.5 --depth 6 --samples 20 --out " + out).code, 0);
  const auto first = read_file(out);
  EXPECT_EQ(read_file(out + ".manifest.ini").find("{}"), std::string::npos);
  fs::remove(out);
  const auto r = run("--config " + out + ".manifest.ini");
  ASSERT_EQ(r.code, 0) << r.output;
  EXPECT_EQ(read_file(out), first);
}
