#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "dicke/cli/run.hpp"

using namespace dicke;
namespace fs = std::filesystem;

namespace {

struct Invocation {
  int code;
  std::string err;
};

Invocation run(std::vector<std::string> args) {
  std::ostringstream err;
  const int code = cli::run(args, err);
  return {code, err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("dicke_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  fs::path dir_;
};

void expect_same_outputs(const fs::path& a, const fs::path& b) {
  const auto manifest = io::load_json_file(a / "run_manifest.json");
  ASSERT_FALSE(manifest.at("outputs").empty());
  for (const auto& o : manifest.at("outputs")) {
    const std::string f = o.at("file");
    EXPECT_EQ(slurp(a / f), slurp(b / f)) << f;
  }
}

}  // namespace

TEST_F(CliTest, CriticalPointsWritesCsvAndManifest) {
  const auto r = run({"critical-points", "--out", dir_.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  const std::string csv = slurp(dir_ / "critical_points.csv");
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "lambda,alpha,q,p,Q,P,eps,kind");
  const auto m = io::load_json_file(dir_ / "run_manifest.json");
  EXPECT_EQ(m.at("command"), "critical-points");
  EXPECT_TRUE(m.contains("code_version"));
  EXPECT_EQ(m.at("outputs")[0].at("bytes").get<std::uintmax_t>(), fs::file_size(dir_ / "critical_points.csv"));
}

TEST_F(CliTest, InvalidParameterIsConfigError) {
  const auto r = run({"critical-points", "--lambda", "-1", "--out", dir_.string()});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("'lambda'"), std::string::npos) << r.err;
}

TEST_F(CliTest, UnknownConfigKeyIsNamed) {
  std::ofstream(dir_ / "cfg.json") << R"({"poincare": {"trajectories": 2, "tmax": 5}})";
  const auto r = run({"poincare", "--config", (dir_ / "cfg.json").string(), "--out", dir_.string()});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("poincare.tmax"), std::string::npos) << r.err;
}

TEST_F(CliTest, MalformedCommandLine) {
  EXPECT_EQ(run({}).code, 1);
  EXPECT_EQ(run({"no-such-command"}).code, 1);
  EXPECT_EQ(run({"spectrum", "--eps", "1"}).code, 1);
  EXPECT_EQ(run({"spectrum", "--j", "abc"}).code, 1);
}

TEST_F(CliTest, NumericalFailureExitCode) {
  // A dense matrix above the memory budget.
  std::ofstream(dir_ / "cfg.json") << R"({"spectrum": {"solver": "dense", "memory_budget_gib": 0.001}})";
  const auto r = run({"spectrum", "--config", (dir_ / "cfg.json").string(), "--j", "3", "--n-max", "60", "--out",
                      dir_.string()});
  EXPECT_EQ(r.code, 2) << r.err;
  EXPECT_NE(r.err.find("memory budget"), std::string::npos) << r.err;
}

TEST_F(CliTest, ReplayIsByteIdentical) {
  const auto first = dir_ / "first";
  ASSERT_EQ(run({"poincare", "--eps", "-2", "1", "--trajectories", "2", "--t-max", "40", "--seed", "17", "--out",
                 first.string()})
                .code,
            0);
  const auto r = run({"replay", (first / "run_manifest.json").string()});
  ASSERT_EQ(r.code, 0) << r.err;
  expect_same_outputs(first, first / "replay");
}

TEST_F(CliTest, SpectrumReplayIsByteIdentical) {
  const auto first = dir_ / "first", second = dir_ / "second";
  ASSERT_EQ(run({"peres", "--j", "3", "--n-max", "60", "--solver", "dense", "--out", first.string()}).code, 0);
  ASSERT_EQ(run({"replay", (first / "run_manifest.json").string(), "--out", second.string()}).code, 0);
  expect_same_outputs(first, second);
}

TEST_F(CliTest, WorkerCountDoesNotChangeOutput) {
  const auto a = dir_ / "a", b = dir_ / "b";
  const std::vector<std::string> base{"lyapunov", "--eps", "-2.5", "--trajectories", "3", "--t-max", "30"};
  auto with = [&](const std::string& w, const fs::path& out) {
    auto args = base;
    args.insert(args.end(), {"--workers", w, "--out", out.string()});
    return run(args).code;
  };
  ASSERT_EQ(with("1", a), 0);
  ASSERT_EQ(with("2", b), 0);
  expect_same_outputs(a, b);
}
