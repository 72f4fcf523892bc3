// Copyright 2026 The bellsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "cli.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>
#include <unistd.h>

namespace bellsim::cli {
namespace {

namespace fs = std::filesystem;

struct Result {
  int code = 0;
  std::string out;
  std::string err;
};

Result call(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = dispatch(args, out, err);
  return {code, out.str(), err.str()};
}

std::string config(const std::string& name) { return std::string(BELLSIM_CONFIG_DIR) + "/" + name; }

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    ::unsetenv(kOutputDirEnv);
    dir_ = fs::temp_directory_path() / ("bellsim_cli_test_" + std::to_string(::getpid()));
    fs::create_directories(dir_);
  }
  void TearDown() override {
    ::unsetenv(kOutputDirEnv);
    fs::remove_all(dir_);
  }
  fs::path dir_;
};

TEST_F(CliTest, EnumerateSucceeds) {
  const Result r = call({"enumerate"});
  EXPECT_EQ(r.code, kExitOk);
  EXPECT_EQ(r.out.rfind("A1,A2,B1,B2,s\n1,1,1,1,2\n", 0), 0U);
  std::istringstream lines(r.out);
  std::string line;
  int rows = -1;
  while (std::getline(lines, line)) ++rows;
  EXPECT_EQ(rows, 16);
  EXPECT_NE(r.err.find("max |s| = 2"), std::string::npos);
}

TEST_F(CliTest, MissingConfigIsUsageError) {
  const Result r = call({"run", "-c", "/nonexistent/x.json"});
  EXPECT_EQ(r.code, kExitUsage);
  EXPECT_NE(r.err.find("/nonexistent/x.json"), std::string::npos);
}

TEST_F(CliTest, MalformedConfigIsUsageError) {
  const fs::path bad = dir_ / "bad.json";
  std::ofstream(bad) << R"({"strategy": "sign", "N": 0})";
  const Result r = call({"run", "-c", bad.string()});
  EXPECT_EQ(r.code, kExitUsage);
  EXPECT_NE(r.err.find("N"), std::string::npos);
}

TEST_F(CliTest, AuditFlagsNonlocalControl) {
  const Result bad = call({"audit", "-c", config("nonlocal_control.json")});
  EXPECT_EQ(bad.code, kExitCheckFailed);
  const auto doc = nlohmann::json::parse(bad.out);
  EXPECT_GE(doc.at("violation_count").get<std::uint64_t>(), 1U);

  const Result good = call({"audit", "-c", config("sign_canonical.json"), "--trials", "2000"});
  EXPECT_EQ(good.code, kExitOk);
}

TEST_F(CliTest, HelpListsSubcommands) {
  const Result r = call({"--help"});
  EXPECT_EQ(r.code, kExitOk);
  for (const char* sub : {"run", "certify", "enumerate", "algebra-check", "qm-curve", "sweep", "audit"}) {
    EXPECT_NE(r.out.find(sub), std::string::npos) << sub;
  }
  EXPECT_EQ(call({"frobnicate"}).code, kExitUsage);
  EXPECT_EQ(call({}).code, kExitUsage);
  EXPECT_EQ(call({"qm-curve", "--step", "0"}).code, kExitUsage);
}

TEST_F(CliTest, RunWritesLogAndCertificate) {
  const fs::path log = dir_ / "trials.csv";
  const fs::path cert = dir_ / "cert.json";
  const Result r = call({"run", "-c", config("sign_canonical.json"), "--trials", "5000", "--log", log.string(), "-o",
                         cert.string()});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const auto doc = nlohmann::json::parse(slurp(cert));
  EXPECT_EQ(doc.at("N").get<int>(), 5000);
  EXPECT_EQ(doc.at("strategy").get<std::string>(), "sign");

  // certify on the written log reproduces the statistic
  const Result c = call({"certify", log.string()});
  ASSERT_EQ(c.code, kExitOk) << c.err;
  EXPECT_EQ(nlohmann::json::parse(c.out).at("S"), doc.at("S"));
}

TEST_F(CliTest, ArtifactsAreByteIdenticalAcrossRuns) {
  const std::vector<std::vector<std::string>> commands = {
      {"enumerate"},
      {"algebra-check", "--samples", "200"},
      {"qm-curve", "--step", "15"},
      {"run", "-c", config("flawed_diagnosis.json"), "--trials", "4000"},
      {"sweep", "-c", config("faithful_canonical.json"), "--trials", "500", "--step", "30"},
      {"audit", "-c", config("memory_adversary.json"), "--trials", "300"},
  };
  for (const auto& cmd : commands) {
    const Result a = call(cmd);
    const Result b = call(cmd);
    EXPECT_EQ(a.code, b.code) << cmd[0];
    EXPECT_EQ(a.out, b.out) << cmd[0];
    EXPECT_FALSE(a.out.empty()) << cmd[0];
  }
}

TEST_F(CliTest, OutputDirectoryRouting) {
  ::setenv(kOutputDirEnv, dir_.c_str(), 1);
  const Result r = call({"enumerate"});
  EXPECT_EQ(r.code, kExitOk);
  EXPECT_TRUE(fs::exists(dir_ / "enumerate.csv"));
  EXPECT_EQ(slurp(dir_ / "enumerate.csv").rfind("A1,A2,B1,B2,s\n", 0), 0U);
  // with the artifact in a file, the summary moves to stdout
  EXPECT_NE(r.out.find("assignments"), std::string::npos);

  EXPECT_EQ(call({"run", "-c", config("sign_canonical.json"), "--trials", "1000"}).code, kExitOk);
  EXPECT_TRUE(fs::exists(dir_ / "certificate.json"));
  EXPECT_TRUE(fs::exists(dir_ / "trials.csv"));

  const fs::path explicit_path = dir_ / "mine.csv";
  EXPECT_EQ(call({"qm-curve", "-o", explicit_path.string()}).code, kExitOk);
  EXPECT_TRUE(fs::exists(explicit_path));
  EXPECT_FALSE(fs::exists(dir_ / "qm_curve.csv"));
}

TEST_F(CliTest, EveryJsonArtifactCarriesSchemaVersion) {
  const std::vector<std::vector<std::string>> commands = {
      {"algebra-check", "--samples", "10"},
      {"run", "-c", config("faithful_canonical.json"), "--trials", "1000"},
      {"audit", "-c", config("sign_canonical.json"), "--trials", "200"},
  };
  for (const auto& cmd : commands) {
    const Result r = call(cmd);
    const auto doc = nlohmann::json::parse(r.out);
    EXPECT_EQ(doc.at("schema_version").get<int>(), 1) << cmd[0];
  }
}

TEST_F(CliTest, AlgebraCheckReportsWitness) {
  const Result r = call({"algebra-check"});
  ASSERT_EQ(r.code, kExitOk);
  const auto doc = nlohmann::json::parse(r.out);
  EXPECT_TRUE(doc.at("all_checks_passed").get<bool>());
  EXPECT_TRUE(doc.at("witness").at("product_is_zero").get<bool>());
  EXPECT_EQ(doc.at("norm_multiplicativity_residual").get<double>(), -2.0);
  EXPECT_EQ(doc.at("table")[1][1].get<std::string>(), "-1");
}

TEST_F(CliTest, FlawedRunReportsOverrideSeparately) {
  const Result r = call({"run", "-c", config("flawed_diagnosis.json"), "--trials", "20000"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const auto doc = nlohmann::json::parse(r.out);
  EXPECT_TRUE(doc.at("diagnosis_mode").get<bool>());
  EXPECT_GT(std::abs(doc.at("reported").at("S").get<double>()), 2.5);
  EXPECT_LE(std::abs(doc.at("S").get<double>()), 2.2);
}

}  // namespace
}  // namespace bellsim::cli
