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

#include <filesystem>
#include <fstream>

#include "socnav/batch.hpp"
#include "socnav/log_io.hpp"
#include "socnav/plot.hpp"

namespace socnav {
namespace {

namespace fs = std::filesystem;

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("socnav_batch_" + name);
  fs::remove_all(p);
  return p;
}

std::string small_config(const fs::path& out, const std::string& policies = "[BP, SSP]") {
  return "schema_version: 1\n"
         "master_seed: 3\n"
         "output_dir: " + out.string() + "\n"
         "engine:\n"
         "  time_limit: 20\n"
         "cells:\n"
         "  - scenarios: [CC]\n"
         "    models: [SFM]\n"
         "    policies: " + policies + "\n"
         "    n_humans: [0, 2]\n"
         "    trials: 2\n";
}

void expect_config_error(const std::string& yaml, const std::string& fragment) {
  try {
    parse_batch_config(yaml);
    FAIL() << "accepted: " << yaml;
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find(fragment), std::string::npos) << e.what();
  }
}

TEST(BatchConfig, ExpandsMatrix) {
  const BatchConfig c = parse_batch_config(
      "schema_version: 1\n"
      "master_seed: 9\n"
      "cells:\n"
      "  - name: main\n"
      "    scenarios: [CC, PT]\n"
      "    models: [ORCA, SFM, HSFM]\n"
      "    policies: [SSP]\n"
      "    n_humans: [5, 10, 15, 20, 25]\n"
      "    noise_pct: [0, 0.1]\n"
      "    trials: 100\n");
  EXPECT_EQ(c.master_seed, 9u);
  ASSERT_EQ(c.cells.size(), 2u * 3u * 5u * 2u);
  long episodes = 0;
  for (const ExperimentCell& cell : c.cells) episodes += cell.trials;
  EXPECT_EQ(episodes, 6000);
  EXPECT_EQ(c.cells.front().name, "main-CC-ORCA-SSP-n5-noise0");
  EXPECT_EQ(c.cells.front().model, MotionModel::kOrca);
  EXPECT_EQ(c.cells[2].noise_pct, 0.0);
}

TEST(BatchConfig, ScenarioAndEngineOverrides) {
  const BatchConfig c = parse_batch_config(
      "schema_version: 1\n"
      "engine: {time_limit: 30, robot_visible: false}\n"
      "cells:\n"
      "  - scenarios: [CCSO]\n"
      "    models: [HSFM-standard]\n"
      "    policies: [ORCA]\n"
      "    n_humans: [3]\n"
      "    trials: 1\n"
      "    scenario_params:\n"
      "      circle_radius: 5\n"
      "      obstacle_count: 2\n"
      "      human: {radius: 0.25, mass: 60}\n");
  EXPECT_DOUBLE_EQ(c.engine.time_limit, 30.0);
  EXPECT_FALSE(c.engine.robot_visible);
  const ScenarioSpec& s = c.cells.at(0).scenario;
  EXPECT_DOUBLE_EQ(s.circle_radius, 5.0);
  EXPECT_EQ(s.obstacle_count, 2);
  EXPECT_DOUBLE_EQ(s.human_params.radius, 0.25);
  EXPECT_DOUBLE_EQ(s.human_params.inertia, 0.5 * 60 * 0.25 * 0.25);
}

TEST(BatchConfig, Errors) {
  const std::string cell =
      "cells:\n  - {scenarios: [CC], models: [SFM], policies: [BP], n_humans: [1], trials: 1}\n";
  expect_config_error(cell, "schema_version");
  expect_config_error("schema_version: 2\n" + cell, "unsupported schema_version");
  expect_config_error("schema_version: 1\nseed: 3\n" + cell, "allowed: cells, engine");
  expect_config_error("schema_version: 1\ncells:\n  - {scenarios: [XX], models: [SFM], "
                      "policies: [BP], n_humans: [1], trials: 1}\n",
                      "unknown scenario 'XX'");
  expect_config_error("schema_version: 1\ncells:\n  - {scenarios: [CC], models: [SFM], "
                      "policies: [RL], n_humans: [1], trials: 1}\n",
                      "unknown robot policy 'RL'");
  expect_config_error("schema_version: 1\ncells:\n  - {scenarios: [CC], models: [SFM], "
                      "policies: [BP], n_humans: [1], trials: 0}\n",
                      "trials");
  expect_config_error("schema_version: 1\ncells:\n  - {scenarios: [CC], models: [SFM], "
                      "policies: [BP], trials: 1}\n",
                      "n_humans");
  expect_config_error("schema_version: 1\nengine: {robot_dt: 0.013}\n" + cell, "robot_dt");
  expect_config_error("schema_version: 1\n" + cell + cell.substr(6), "duplicate");
  expect_config_error("schema_version: [1\n", "config");
}

TEST(BatchConfig, MissingFileIsAnError) {
  EXPECT_THROW(load_batch_config("/nonexistent/batch.yaml"), std::exception);
}

TEST(RunBatch, WritesLogsAndIsIdempotent) {
  const fs::path out = scratch("idempotent");
  const BatchConfig config = parse_batch_config(small_config(out));
  BatchOptions opt;
  opt.jobs = 2;
  opt.quiet = true;
  const BatchResult first = run_batch(config, opt);
  EXPECT_EQ(first.episodes_run, 8);
  EXPECT_EQ(first.episodes_skipped, 0);
  EXPECT_TRUE(first.failures.empty());
  EXPECT_TRUE(fs::exists(log_path(out, config.cells[0].name, 0)));
  const std::string report = read_file(out / "report.csv");

  const BatchResult second = run_batch(config, opt);
  EXPECT_EQ(second.episodes_run, 0);
  EXPECT_EQ(second.episodes_skipped, 8);
  EXPECT_EQ(read_file(out / "report.csv"), report);
  EXPECT_EQ(report_csv(report_from_logs(out)), report);

  // A corrupted log is rerun and reproduces the same content.
  const fs::path victim = log_path(out, config.cells[1].name, 1);
  const std::string original = read_file(victim);
  write_file_atomic(victim, original.substr(0, original.size() / 2));
  const BatchResult third = run_batch(config, opt);
  EXPECT_EQ(third.episodes_run, 1);
  EXPECT_EQ(read_file(victim), original);
  fs::remove_all(out);
}

TEST(RunBatch, FailingCellIsIsolated) {
  const fs::path out = scratch("isolation");
  const std::string policies =
      "[BP, \"external:" + std::string(SOCNAV_FAKE_POLICY) + " crash\"]";
  const BatchConfig config = parse_batch_config(small_config(out, policies));
  BatchOptions opt;
  opt.quiet = true;
  const BatchResult r = run_batch(config, opt);
  ASSERT_EQ(r.failures.size(), 2u);
  for (const CellFailure& f : r.failures) {
    EXPECT_NE(f.cell.find("-ext"), std::string::npos);
    EXPECT_EQ(f.aborted, 2);
  }
  int partial = 0, ok = 0;
  for (const ReportRow& row : r.report.rows) {
    if (row.metric != "success_rate") continue;
    (row.status == "partial" ? partial : ok) += 1;
  }
  EXPECT_EQ(partial, 2);
  EXPECT_EQ(ok, 2);
  fs::remove_all(out);
}

TEST(RunBatch, UnusableOutputDirectory) {
  const fs::path blocker = scratch("blocker");
  write_file_atomic(blocker, "not a directory");
  const BatchConfig config = parse_batch_config(small_config(blocker / "out"));
  BatchOptions opt;
  opt.quiet = true;
  EXPECT_THROW(run_batch(config, opt), IoError);
  fs::remove(blocker);
}

BatchReport three_policy_report() {
  std::vector<KeyedMetrics> in;
  for (const char* policy : {"BP", "SSP", "ORCA"}) {
    for (int n : {5, 10, 15, 20, 25}) {
      KeyedMetrics k;
      k.key = {policy, "SFM", "CC", n, 0.0};
      k.metrics.success = n < 20;
      k.metrics.outcome = k.metrics.success ? Outcome::kSuccess : Outcome::kTimeout;
      k.metrics.shortest_path = 14.0;
      k.metrics.path_length = 15.0;
      k.metrics.time_to_goal = 15.0 + n;
      in.push_back(k);
    }
  }
  return aggregate(in);
}

std::size_t count(const std::string& s, const std::string& what) {
  std::size_t n = 0;
  for (auto p = s.find(what); p != std::string::npos; p = s.find(what, p + 1)) ++n;
  return n;
}

TEST(Plot, OneCurvePerPolicy) {
  const std::string svg = render_plot(three_policy_report(), "success_rate", PlotAxis::kHumans);
  EXPECT_EQ(count(svg, "<polyline"), 3u);
  EXPECT_EQ(count(svg, "<circle"), 15u);
  EXPECT_NE(svg.find(">BP<"), std::string::npos);
  EXPECT_NE(svg.find(">SSP<"), std::string::npos);
  EXPECT_NE(svg.find(">ORCA<"), std::string::npos);
  EXPECT_NE(svg.find("number of humans"), std::string::npos);
  EXPECT_NE(svg.find("success_rate (fraction)"), std::string::npos);
}

TEST(Plot, SingleCellGivesSinglePoint) {
  std::vector<KeyedMetrics> in(1);
  in[0].key = {"BP", "SFM", "CC", 5, 0.0};
  in[0].metrics.success = true;
  in[0].metrics.outcome = Outcome::kSuccess;
  in[0].metrics.shortest_path = in[0].metrics.path_length = 14.0;
  const std::string svg = render_plot(aggregate(in), "success_rate", PlotAxis::kHumans);
  EXPECT_EQ(count(svg, "<polyline"), 0u);
  EXPECT_EQ(count(svg, "<circle"), 1u);
}

TEST(Plot, AbsentMetricListsAvailable) {
  try {
    render_plot(three_policy_report(), "happiness", PlotAxis::kHumans);
    FAIL();
  } catch (const PlotError& e) {
    EXPECT_NE(std::string(e.what()).find("success_rate"), std::string::npos);
  }
}

TEST(Plot, EmitWritesNothingOnError) {
  const fs::path dir = scratch("plots");
  PlotSelection sel;
  sel.metrics = {"success_rate", "happiness"};
  EXPECT_THROW(emit_plots(three_policy_report(), sel, dir), PlotError);
  EXPECT_FALSE(fs::exists(dir));
  EXPECT_THROW(emit_plots(BatchReport{}, {}, dir), PlotError);
  sel.metrics = {"success_rate", "time_to_goal"};
  EXPECT_EQ(emit_plots(three_policy_report(), sel, dir).size(), 2u);
  EXPECT_TRUE(fs::exists(dir / "time_to_goal.svg"));
  const auto all = emit_plots(three_policy_report(), {}, dir);
  EXPECT_EQ(all.size(), report_metrics().size());
  fs::remove_all(dir);
}

}  // namespace
}  // namespace socnav
