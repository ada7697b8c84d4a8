// Copyright 2026 The socnav Authors
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

#include <cstdlib>
#include <filesystem>
#include <fstream>

namespace {

namespace fs = std::filesystem;

int run(const std::string& args) {
  const std::string cmd = std::string(SOCNAV_CLI) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / "socnav_cli_test";
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  fs::path write(const std::string& name, const std::string& text) {
    std::ofstream(dir_ / name) << text;
    return dir_ / name;
  }

  fs::path dir_;
};

TEST_F(Cli, ExitCodes) {
  const fs::path good = write("good.yaml",
                              "schema_version: 1\n"
                              "cells:\n"
                              "  - {scenarios: [CC], models: [ORCA], policies: [BP, SSP],\n"
                              "     n_humans: [0, 1], trials: 1}\n");
  const fs::path bad = write("bad.yaml", "schema_version: 1\ncells: 3\n");
  const std::string out = (dir_ / "out").string();

  EXPECT_EQ(run("validate --config " + good.string()), 0);
  EXPECT_EQ(run("validate --config " + bad.string()), 1);
  EXPECT_EQ(run("validate --config " + (dir_ / "missing.yaml").string()), 1);
  EXPECT_EQ(run("frobnicate"), 1);

  EXPECT_EQ(run("run --quiet --config " + good.string() + " --out " + out), 0);
  EXPECT_TRUE(fs::exists(dir_ / "out" / "report.csv"));
  EXPECT_TRUE(fs::exists(dir_ / "out" / "plots" / "success_rate.svg"));
  EXPECT_EQ(run("metrics --quiet --out " + out), 0);
  EXPECT_EQ(run("plot --quiet --out " + out + " --metric spl"), 0);
  EXPECT_EQ(run("plot --quiet --out " + out + " --metric happiness"), 1);
  EXPECT_EQ(run("plot --quiet --out " + (dir_ / "nowhere").string()), 3);

  EXPECT_EQ(run("episode --quiet --scenario PT --model HSFM --policy ORCA --humans 3 --seed 4 "
                "--out " + (dir_ / "ep.log").string()),
            0);
  EXPECT_TRUE(fs::exists(dir_ / "ep.log"));
  EXPECT_EQ(run("episode --scenario XX"), 1);
  EXPECT_EQ(run("episode --quiet --humans 80 --out -"), 2);

  fs::create_directories(dir_ / "out" / "logs" / "broken");
  write("out/logs/broken/0.log", "{\"type\":\"header\"}\n");
  EXPECT_EQ(run("metrics --quiet --out " + out), 3);
}

}  // namespace
