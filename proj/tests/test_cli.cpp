#include <gtest/gtest.h>

#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "dwpf/cli.hpp"

using dwpf::cli::run;
using json = nlohmann::json;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "dwpf");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string plugin(const char* name) { return std::string(DWPF_DATA_DIR) + "/plugins/" + name; }

}  // namespace

TEST(Cli, VerifyDaAllChecks) {
  const auto r = invoke({"verify", "--model", "da", "--N", "3", "--L", "2", "--checks", "all",
                         "--trials", "3"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto doc = json::parse(r.out);
  EXPECT_TRUE(doc["pass"].get<bool>());
  std::set<std::string> names;
  for (const auto& c : doc["checks"]) names.insert(c["name"].get<std::string>());
  for (const char* n : {"ybe", "prop1", "prop2-zeros", "prop2-permutation", "prop3", "prop4",
                        "factorization", "engines"}) {
    EXPECT_TRUE(names.contains(n)) << n;
  }
}

TEST(Cli, VerifyPsFactorization) {
  const auto r = invoke({"verify", "--model", "ps", "--r", "1", "--s", "1", "--L", "3",
                         "--checks", "factorization", "--trials", "3"});
  EXPECT_EQ(r.code, 0) << r.err;
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(invoke({"verify", "--model", "da", "--N", "5"}).code, 2);
  EXPECT_EQ(invoke({"verify", "--model", "da", "--eta", "0.5"}).code, 2);
  EXPECT_EQ(invoke({"verify", "--model", "ps", "--N", "3"}).code, 2);
  EXPECT_EQ(invoke({"verify", "--model", "plugin"}).code, 2);
  EXPECT_EQ(invoke({"verify", "--model", "xyz"}).code, 2);
  EXPECT_EQ(invoke({"verify", "--checks", "nonsense"}).code, 2);
  EXPECT_EQ(invoke({"verify", "--checks", "rs-independence"}).code, 2);
  EXPECT_EQ(invoke({"verify", "--L", "3..1"}).code, 2);
  EXPECT_EQ(invoke({"verify", "--format", "xml"}).code, 2);
  EXPECT_EQ(invoke({}).code, 2);
  EXPECT_EQ(invoke({"compute", "--L", "1..2"}).code, 2);
  EXPECT_EQ(invoke({"verify", "--model", "da", "--N", "4", "--n", "2"}).code, 2);
}

TEST(Cli, CheckFailureExitsOne) {
  const auto r = invoke({"verify", "--plugin", plugin("da_n5_zero.json"), "--L", "1",
                         "--checks", "factorization", "--trials", "2"});
  EXPECT_EQ(r.code, 1);
  EXPECT_FALSE(json::parse(r.out)["pass"].get<bool>());
}

TEST(Cli, ReportIsDeterministic) {
  const std::vector<std::string> args = {"verify", "--model", "ps", "--r", "0", "--s", "1",
                                         "--L", "1..2", "--trials", "2", "--checks",
                                         "prop1,prop3,rs-independence"};
  EXPECT_EQ(invoke(args).out, invoke(args).out);
}

TEST(Cli, SeedFromEnvironment) {
  const std::vector<std::string> args = {"verify", "--checks", "factorization", "--trials", "2",
                                         "--seed", "5"};
  ::setenv("DWPF_SEED", "99", 1);
  const auto doc = json::parse(invoke(args).out);
  ::unsetenv("DWPF_SEED");
  EXPECT_EQ(doc["config"]["seed"].get<std::uint64_t>(), 99u);
  ::setenv("DWPF_SEED", "abc", 1);
  EXPECT_EQ(invoke(args).code, 2);
  ::unsetenv("DWPF_SEED");
}

TEST(Cli, CsvFormat) {
  const auto r = invoke({"verify", "--checks", "prop4", "--format", "csv", "--trials", "2"});
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(r.out.substr(0, r.out.find('\n')),
            "name,model,L,samples,seed,max_residual,mean_residual,tolerance,pass,notes");
  EXPECT_NE(r.out.find("prop4,\"da(N=2,n=1,builtin)\",1,2,"), std::string::npos);
}

TEST(Cli, ComputeFromParameterFile) {
  const auto dir = std::filesystem::temp_directory_path();
  const auto params = dir / "dwpf_cli_params.json";
  std::ofstream(params) << R"({"u": [[0, 0]], "v": [0], "alpha": [0], "beta": [0]})";
  const auto out = dir / "dwpf_cli_out.json";
  const auto r = invoke({"compute", "--model", "da", "--N", "2", "--params", params.string(),
                         "--out", out.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  std::ifstream in(out);
  const auto doc = json::parse(in);
  for (const auto& res : doc["results"]) {
    EXPECT_EQ(res["status"], "ok");
    EXPECT_NEAR(res["value"][0].get<double>(), 1.0, 1e-15);
    EXPECT_NEAR(res["value"][1].get<double>(), 0.0, 1e-15);
  }
  std::ofstream(params) << R"({"u": [1], "v": [0]})";
  const auto ps = invoke({"compute", "--model", "ps", "--eta", "1", "--params", params.string()});
  ASSERT_EQ(ps.code, 0) << ps.err;
  for (const auto& res : json::parse(ps.out)["results"]) {
    EXPECT_NEAR(res["value"][0].get<double>(), std::exp(1.0), 1e-14);
  }
  std::ofstream(params) << R"({"u": [1, 2], "v": [0]})";
  EXPECT_EQ(invoke({"compute", "--params", params.string()}).code, 2);
  std::filesystem::remove(params);
  std::filesystem::remove(out);
}

TEST(Cli, ComputeReportsInfeasibleEnumeration) {
  const auto r = invoke({"compute", "--model", "da", "--N", "3", "--L", "3", "--enum-cap", "1e5"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto doc = json::parse(r.out);
  EXPECT_EQ(doc["results"][0]["method"], "enumerate");
  EXPECT_EQ(doc["results"][0]["status"], "infeasible");
  EXPECT_EQ(doc["results"][1]["status"], "ok");
  EXPECT_EQ(doc["results"][2]["status"], "ok");
  EXPECT_NE(r.err.find("seed"), std::string::npos);
}

TEST(Cli, BenchCsv) {
  const auto r = invoke({"bench", "--model", "da", "--N", "2", "--L", "1..3",
                         "--methods", "contract,factorized"});
  ASSERT_EQ(r.code, 0);
  std::istringstream lines(r.out);
  std::string line;
  int rows = 0;
  while (std::getline(lines, line)) ++rows;
  EXPECT_EQ(rows, 1 + 3 * 2);
}

TEST(Cli, PluginLoad) {
  const auto r = invoke({"plugin-load", "--plugin", plugin("da_n5_partial.json")});
  ASSERT_EQ(r.code, 0);
  const auto doc = json::parse(r.out);
  EXPECT_EQ(doc["N"], 5);
  EXPECT_TRUE(doc["probe_ready"].get<bool>());
  EXPECT_EQ(invoke({"plugin-load", "--plugin", "/nonexistent.json"}).code, 2);
  EXPECT_EQ(invoke({"plugin-load"}).code, 2);
}

TEST(Cli, ConjectureProbeOnPluginCopy) {
  const auto r = invoke({"verify", "--plugin", plugin("da_n3.json"), "--L", "1..2",
                         "--checks", "conjecture-probe", "--trials", "2"});
  EXPECT_EQ(r.code, 0) << r.err;
}

TEST(Cli, ParseHelpers) {
  EXPECT_EQ(dwpf::cli::parse_complex("0.5:-2"), dwpf::CScalar(0.5, -2.0));
  EXPECT_EQ(dwpf::cli::parse_complex("3"), dwpf::CScalar(3.0, 0.0));
  EXPECT_EQ(dwpf::cli::parse_range("2..5"), std::make_pair(2, 5));
  EXPECT_EQ(dwpf::cli::parse_range("4"), std::make_pair(4, 4));
  EXPECT_ANY_THROW(dwpf::cli::parse_range("0"));
  EXPECT_ANY_THROW(dwpf::cli::parse_complex("1:x"));
}
