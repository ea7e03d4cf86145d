#include <gtest/gtest.h>

#include <cstdio>
#include <fstream>
#include <sstream>

#include "cli.hpp"

using modcurv::cli::run;
using nlohmann::json;

namespace {

struct Result {
  int code;
  std::string out, err;
};

Result call(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

}  // namespace

TEST(Cli, EvalHExample) {
  const Result r = call({"eval-h", "--a", "1", "--b", "1", "--z", "0.5", "--m", "2"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "1.3862944\n");
}

TEST(Cli, EvalHJson) {
  const Result r = call({"eval-h", "--a", "1", "--b", "1", "--c", "1", "--z1", "0.2", "--z2", "0.5", "--m", "3",
                         "--format", "json"});
  ASSERT_EQ(r.code, 0);
  const json j = json::parse(r.out);
  EXPECT_NEAR(j["value"].get<double>(), 1.4076661932117385, 1e-12);
  EXPECT_EQ(j["m"], "3");
}

TEST(Cli, VerifyCmKSymbolic) {
  const Result r = call({"verify-cm-k", "--m", "symbolic"});
  ASSERT_EQ(r.code, 0) << r.err;
  const json j = json::parse(r.out);
  EXPECT_EQ(j["schema"], modcurv::cli::kSchema);
  EXPECT_TRUE(j["passed"].get<bool>());
  EXPECT_EQ(j["reports"][0]["status"], "exact-zero");
  EXPECT_EQ(j["reports"][0]["residual"], "0");
  EXPECT_GT(j["reports"][0]["trace_length"].get<int>(), 0);
  EXPECT_FALSE(j["reports"][0].contains("seconds"));
}

TEST(Cli, GaussBonnetText) {
  const Result r = call({"verify-gauss-bonnet", "--format", "text"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("PASS"), std::string::npos);
}

TEST(Cli, DeterministicReports) {
  const std::vector<std::string> args{"verify-operators", "--seed", "3"};
  const Result a = call(args), b = call(args);
  EXPECT_EQ(a.code, 0);
  EXPECT_EQ(a.out, b.out);
}

TEST(Cli, TimingIsOptIn) {
  const Result r = call({"verify-t-k", "--timing"});
  ASSERT_EQ(r.code, 0);
  EXPECT_TRUE(json::parse(r.out)["reports"][0].contains("seconds"));
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(call({}).code, 1);
  EXPECT_EQ(call({"no-such-command"}).code, 1);
  EXPECT_EQ(call({"verify-t-k", "--m", "banana"}).code, 1);
  EXPECT_EQ(call({"verify-ops", "--m", "3"}).code, 1);
  EXPECT_EQ(call({"verify-t-k", "--format", "xml"}).code, 1);
  EXPECT_EQ(call({"eval-h", "--a", "1", "--z", "0.5", "--m", "2"}).code, 1);
  EXPECT_EQ(call({"eval-h", "--a", "1", "--b", "1", "--z", "1.5", "--m", "2"}).code, 1);
}

TEST(Cli, VerificationFailureExitsTwo) {
  // a tolerance below the numeric noise of the matrix model cannot be met
  const Result r = call({"verify-matrix-model", "--trials", "1", "--sizes", "3", "--tol", "1e-30"});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("FAILED matrix-model"), std::string::npos);
  EXPECT_FALSE(json::parse(r.out)["passed"].get<bool>());
}

TEST(Cli, OutFileAndTables) {
  const std::string path = ::testing::TempDir() + "modcurv_tables.csv";
  EXPECT_EQ(call({"tables", "--m", "3", "--out", path}).code, 0);
  std::ifstream in(path);
  std::string header;
  std::getline(in, header);
  EXPECT_EQ(header, "indices,z1,z2,m,value,path,error");
  int rows = 0;
  for (std::string line; std::getline(in, line);) ++rows;
  EXPECT_GT(rows, 50);
  std::remove(path.c_str());
}

TEST(Cli, Help) {
  const Result r = call({"--help"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("verify-cm-h"), std::string::npos);
}
