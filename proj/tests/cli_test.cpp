// Copyright 2026 The faasprobe Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <gtest/gtest.h>

namespace {

namespace fs = std::filesystem;

struct Result {
  int exit_code;
  std::string out;
};

Result sh(const std::string& args, const std::string& env = "") {
  const std::string cmd = env + " '" FAASPROBE_CLI_PATH "' " + args + " 2>&1";
  FILE* pipe = ::popen(cmd.c_str(), "r");
  std::string out;
  std::array<char, 4096> buf{};
  while (std::size_t n = std::fread(buf.data(), 1, buf.size(), pipe)) out.append(buf.data(), n);
  const int status = ::pclose(pipe);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("faasprobe_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string config(const std::string& name, const std::string& body) {
    const auto p = dir_ / (name + ".json");
    std::ofstream(p) << body;
    return p.string();
  }
  std::string sim_config(const std::string& name, const std::string& preset,
                         const std::string& extra = R"("search": {})") {
    return config(name, R"({"target": {"kind": "simulator", "preset": ")" + preset + R"("}, )" +
                            extra + R"(, "output": {"dir": ")" + dir_.string() +
                            R"(", "label": "fn", "checkpoint": ")" + name + R"("}})");
  }

  fs::path dir_;
};

TEST_F(CliTest, ProbePrintsSummaryAndPaths) {
  const auto r = sh("probe " + sim_config("c1", "aws-2021"));
  EXPECT_EQ(r.exit_code, 0) << r.out;
  EXPECT_NE(r.out.find("idle_timeout_min"), std::string::npos);
  EXPECT_TRUE(fs::exists(dir_ / "fn_c1.report.json"));
  EXPECT_TRUE(fs::exists(dir_ / "fn_c1.records.jsonl"));
}

TEST_F(CliTest, RepeatRunsAreByteIdentical) {
  const auto cfg = sim_config("c1", "azure-2021", R"("search": {}, "keepalive": {}, "latency": {})");
  ASSERT_EQ(sh("probe " + cfg).exit_code, 0);
  const auto report = slurp(dir_ / "fn_c1.report.json");
  const auto records = slurp(dir_ / "fn_c1.records.jsonl");
  ASSERT_EQ(sh("probe " + cfg).exit_code, 0);
  EXPECT_EQ(slurp(dir_ / "fn_c1.report.json"), report);
  EXPECT_EQ(slurp(dir_ / "fn_c1.records.jsonl"), records);
}

TEST_F(CliTest, ProbeSeedOverridesConfig) {
  const auto cfg = sim_config("c1", "aws-2021", R"("latency": {"repetitions": 3})");
  ASSERT_EQ(sh("probe " + cfg, "PROBE_SEED=1").exit_code, 0);
  const auto one = slurp(dir_ / "fn_c1.records.jsonl");
  ASSERT_EQ(sh("probe " + cfg, "PROBE_SEED=2").exit_code, 0);
  const auto two = slurp(dir_ / "fn_c1.records.jsonl");
  EXPECT_NE(one, two);
  ASSERT_EQ(sh("probe " + cfg, "PROBE_SEED=1").exit_code, 0);
  EXPECT_EQ(slurp(dir_ / "fn_c1.records.jsonl"), one);
  EXPECT_NE(slurp(dir_ / "fn_c1.report.json").find("\"seed\": 1"), std::string::npos);
  EXPECT_EQ(sh("probe " + cfg, "PROBE_SEED=abc").exit_code, 1);
}

TEST_F(CliTest, ProbeExitCodes) {
  EXPECT_EQ(sh("probe " + sim_config("low", "azure-2020-q1")).exit_code, 1);
  EXPECT_EQ(sh("probe " + sim_config("stale", "aws-2021", R"("latency": {"cooldown_min": 3})"))
                .exit_code,
            2);
  EXPECT_EQ(sh("probe " + config("bad", R"({"target": {}})")).exit_code, 1);
  EXPECT_EQ(sh("probe " + (dir_ / "missing.json").string()).exit_code, 1);
  EXPECT_EQ(sh("probe").exit_code, 1);
  EXPECT_EQ(sh("frobnicate").exit_code, 1);
}

TEST_F(CliTest, DiffExitCodes) {
  ASSERT_EQ(sh("probe " + sim_config("a", "ibm-2020")).exit_code, 0);
  ASSERT_EQ(sh("probe " + sim_config("b", "ibm-2021")).exit_code, 0);
  ASSERT_EQ(sh("probe " + sim_config("c", "aws-2021")).exit_code, 0);
  const auto a = (dir_ / "fn_a.report.json").string();
  const auto b = (dir_ / "fn_b.report.json").string();
  const auto c = (dir_ / "fn_c.report.json").string();

  const auto same = sh("diff " + a + " " + b);
  EXPECT_EQ(same.exit_code, 0) << same.out;
  EXPECT_NE(same.out.find("no changes"), std::string::npos);

  const auto json_out = (dir_ / "diff.json").string();
  const auto changed = sh("diff " + b + " " + c + " --json " + json_out);
  EXPECT_EQ(changed.exit_code, 3) << changed.out;
  EXPECT_NE(slurp(json_out).find("\"changes\""), std::string::npos);

  EXPECT_EQ(sh("diff " + a).exit_code, 1);
  EXPECT_EQ(sh("diff " + a + " " + (dir_ / "nope.json").string()).exit_code, 1);
}

TEST_F(CliTest, PresetsAndVersion) {
  const auto presets = sh("presets");
  EXPECT_EQ(presets.exit_code, 0);
  EXPECT_NE(presets.out.find("\"ibm-2021\""), std::string::npos);
  const auto version = sh("--version");
  EXPECT_EQ(version.exit_code, 0);
  EXPECT_NE(version.out.find(FAASPROBE_TEST_VERSION), std::string::npos);
  EXPECT_EQ(sh("--help").exit_code, 0);
}

}  // namespace
