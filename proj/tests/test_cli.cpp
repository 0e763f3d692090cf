// Copyright 2026 The thermogap Authors
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

#include <gtest/gtest.h>
#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "json.hpp"

namespace {

struct RunResult {
  int code;
  std::string out;
};

const std::string kData = THERMOGAP_TEST_DATA;

std::string data(const std::string& name) { return kData + "/" + name; }

RunResult run(const std::string& args) {
  const std::string cmd = std::string(THERMOGAP_CLI) + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  if (pipe == nullptr) return {-1, ""};
  std::string out;
  std::array<char, 4096> buf{};
  std::size_t n = 0;
  while ((n = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) out.append(buf.data(), n);
  const int status = pclose(pipe);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::filesystem::path temp_path(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("thermogap_cli_test_" + name);
}

TEST(Cli, HelpExitsZero) {
  EXPECT_EQ(run("--help").code, 0);
  EXPECT_EQ(run("feasible --help").code, 0);
}

TEST(Cli, UnknownSubcommandOrMissingOptionIsInputError) {
  EXPECT_EQ(run("frobnicate").code, 2);
  EXPECT_EQ(run("gibbs -b 1").code, 2);
}

TEST(Cli, GibbsState) {
  const auto r = run("gibbs -H " + data("qubit.json") + " -b ln2");
  ASSERT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("0.66666666666666663"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("0.33333333333333331"), std::string::npos) << r.out;
}

TEST(Cli, ConstructGpm) {
  const auto r = run("construct-gpm -H " + data("qubit.json") + " -b ln2 -t " + data("plus.json"));
  ASSERT_EQ(r.code, 0);
  const auto j = nlohmann::json::parse(r.out);
  const auto& sigma = j.at("sigma");
  EXPECT_NEAR(sigma[0][0][0].get<double>(), 0.75, 1e-12);
  EXPECT_NEAR(sigma[0][1][0].get<double>(), -0.25, 1e-12);
  EXPECT_NEAR(sigma[1][1][0].get<double>(), 0.25, 1e-12);
  EXPECT_TRUE(j.at("verification").at("cptp").at("passed").get<bool>());
  EXPECT_LE(j.at("verification").at("gibbs_residual").get<double>(), 1e-9);
  EXPECT_EQ(run("construct-gpm -H " + data("qubit.json") + " -b ln2 -t " + data("plus.json") +
                " --level 0")
                .code,
            2);
}

TEST(Cli, FeasibleExitCodes) {
  const std::string base = "feasible -H " + data("qubit.json") + " -b ln2 ";
  const auto plain = run(base + "--from " + data("excited.json") + " --to " + data("plus.json"));
  EXPECT_EQ(plain.code, 0);
  EXPECT_NE(plain.out.find("\"feasible\""), std::string::npos);
  EXPECT_EQ(run(base + "--from " + data("excited.json") + " --to " + data("plus.json") + " --covariant")
                .code,
            1);
  EXPECT_EQ(run(base + "--from " + data("gibbs_ln2.json") + " --to " + data("excited.json")).code, 1);
  const std::string qutrit = "feasible -H " + data("qutrit_ln.json") + " -b 1 --from " +
                             data("qutrit_diag.json") + " --to " + data("qutrit_coherent.json");
  EXPECT_EQ(run(qutrit + " --max-iter 1").code, 3);
  EXPECT_EQ(run(qutrit).code, 1);
}

TEST(Cli, InvalidInputsExitTwo) {
  const std::string base = "feasible -H " + data("qubit.json") + " -b ln2 --to " + data("plus.json");
  for (const char* bad : {"bad_trace.json", "bad_positivity.json", "malformed.json",
                          "missing_matrix.json", "does_not_exist.json"}) {
    EXPECT_EQ(run(base + " --from " + data(bad)).code, 2) << bad;
  }
  EXPECT_EQ(run("gibbs -H " + data("qubit.json") + " -b -1").code, 2);
  EXPECT_EQ(run("gibbs -H " + data("qubit.json") + " -b lnx").code, 2);
}

TEST(Cli, CurveOutputs) {
  const auto csv = temp_path("curve.csv");
  const auto svg = temp_path("curve.svg");
  const std::string base = "curve -s " + data("excited.json") + " -H " + data("qubit.json") + " -b ln2 -o ";
  ASSERT_EQ(run(base + csv.string()).code, 0);
  EXPECT_EQ(slurp(csv), "x,y\n0,0\n0.33333333333333331,1\n1,1\n");
  ASSERT_EQ(run(base + svg.string()).code, 0);
  EXPECT_NE(slurp(svg).find("points=\"0,0 0.33333333333333331,1 1,1\""), std::string::npos);
  EXPECT_EQ(run(base + temp_path("curve.txt").string()).code, 2);
  std::filesystem::remove(csv);
  std::filesystem::remove(svg);
}

TEST(Cli, MonotonesCsv) {
  const auto r = run("monotones --from " + data("excited.json") + " --to " + data("plus.json") + " -H " +
                     data("qubit.json") + " -b ln2 --format csv");
  ASSERT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("dmax_quantum"), std::string::npos);
  EXPECT_EQ(r.out.find("false"), std::string::npos) << r.out;
}

TEST(Cli, DemoGap) {
  const auto r = run("demo-gap --seeds 50");
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(run("demo-gap --beta-deltaE 0 --seeds 1").code, 0);
}

}  // namespace
