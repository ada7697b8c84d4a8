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

// socnav: batch runner, single episodes, report and plot regeneration.
//
// Exit codes: 0 ok, 1 config error, 2 partial batch failure, 3 I/O error.

#include <cstdio>
#include <iostream>
#include <optional>

#include "CLI11.hpp"
#include "socnav/batch.hpp"
#include "socnav/log_io.hpp"
#include "socnav/plot.hpp"

namespace {

using namespace socnav;

constexpr int kOk = 0;
constexpr int kConfigError = 1;
constexpr int kPartialFailure = 2;
constexpr int kIoError = 3;

struct Common {
  std::string config;
  std::string out;
  std::optional<std::uint64_t> seed;
  int jobs{0};
  bool quiet{false};
};

int cmd_run(const Common& c) {
  BatchConfig config = load_batch_config(c.config);
  if (!c.out.empty()) config.output_dir = c.out;
  if (c.seed) config.master_seed = *c.seed;
  BatchOptions options;
  options.jobs = c.jobs;
  options.quiet = c.quiet;
  options.progress = [](const std::string& msg) { std::cerr << msg << '\n'; };
  const BatchResult result = run_batch(config, options);
  try {
    emit_plots(result.report, {}, config.output_dir / "plots");
  } catch (const PlotError& e) {
    std::cerr << "plots skipped: " << e.what() << '\n';
  }
  if (!c.quiet) {
    std::cerr << "ran " << result.episodes_run << " episodes, reused " << result.episodes_skipped
              << "; report at " << (config.output_dir / "report.csv").string() << '\n';
  }
  for (const CellFailure& f : result.failures) {
    std::cerr << "cell " << f.cell << ": " << f.aborted << " episode(s) aborted: "
              << f.first_reason << '\n';
  }
  return result.failures.empty() ? kOk : kPartialFailure;
}

struct EpisodeArgs {
  std::string scenario{"CC"};
  std::string model{"SFM"};
  std::string policy{"BP"};
  int humans{5};
  double noise{0.0};
};

int cmd_episode(const Common& c, const EpisodeArgs& a) {
  EngineConfig engine;
  if (!c.config.empty()) engine = load_batch_config(c.config).engine;
  engine.seed = c.seed.value_or(0);
  engine.noise_pct = a.noise;
  ScenarioSpec spec;
  const auto family = parse_scenario_family(a.scenario);
  if (!family) throw ConfigError("unknown scenario '" + a.scenario + "'");
  spec.family = *family;
  spec.n_humans = a.humans;
  const auto model = parse_motion_model(a.model);
  if (!model) throw ConfigError("unknown model '" + a.model + "'");
  try {
    spec.validate();
    engine.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  std::unique_ptr<Policy> policy;
  try {
    policy = make_policy(a.policy, spec.robot_params);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  const EpisodeLog log = run_episode(spec, *model, *policy, engine);
  const std::string text = serialize_log(log);
  if (c.out.empty() || c.out == "-") {
    std::cout << text;
  } else {
    write_file_atomic(c.out, text);
  }
  if (!c.quiet) {
    std::cerr << to_string(log.outcome);
    if (log.time_to_goal) std::cerr << " in " << *log.time_to_goal << " s";
    if (!log.abort_reason.empty()) std::cerr << ": " << log.abort_reason;
    std::cerr << " (" << log.records.size() << " decisions)\n";
  }
  return log.outcome == Outcome::kAborted ? kPartialFailure : kOk;
}

int cmd_metrics(const Common& c) {
  const std::filesystem::path out = c.out.empty() ? "out" : c.out;
  const BatchReport report = report_from_logs(out);
  write_file_atomic(out / "report.csv", report_csv(report));
  if (!c.quiet) std::cerr << "wrote " << (out / "report.csv").string() << '\n';
  return kOk;
}

int cmd_plot(const Common& c, const std::vector<std::string>& metrics, const std::string& x) {
  const std::filesystem::path out = c.out.empty() ? "out" : c.out;
  BatchReport report;
  try {
    report = parse_report_csv(read_file(out / "report.csv"));
  } catch (const std::invalid_argument& e) {
    throw IoError(e.what());
  }
  PlotSelection sel;
  sel.metrics = metrics;
  sel.x_axis = x == "noise" ? PlotAxis::kNoise : PlotAxis::kHumans;
  for (const auto& p : emit_plots(report, sel, out / "plots")) {
    if (!c.quiet) std::cerr << "wrote " << p.string() << '\n';
  }
  return kOk;
}

int cmd_validate(const Common& c) {
  const BatchConfig config = load_batch_config(c.config);
  long episodes = 0;
  for (const ExperimentCell& cell : config.cells) episodes += cell.trials;
  if (!c.quiet) {
    std::cout << "config ok: " << config.cells.size() << " cells, " << episodes
              << " episodes, output " << config.output_dir.string() << '\n';
    for (const ExperimentCell& cell : config.cells) {
      std::cout << "  " << cell.name << " x" << cell.trials << '\n';
    }
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Social navigation simulation and benchmark runner"};
  app.require_subcommand(1);
  Common common;
  EpisodeArgs ep;
  std::vector<std::string> plot_metrics;
  std::string plot_x = "humans";

  auto add_common = [&](CLI::App* sub, bool config_required) {
    auto* opt = sub->add_option("--config", common.config, "YAML batch configuration");
    if (config_required) opt->required()->check(CLI::ExistingFile);
    sub->add_option("--out", common.out, "output directory (episode: log file, - for stdout)");
    sub->add_option("--seed", common.seed, "master seed override (episode: episode seed)");
    sub->add_option("--jobs", common.jobs, "worker threads, 0 = all cores")->check(CLI::NonNegativeNumber);
    sub->add_flag("--quiet", common.quiet, "suppress progress output");
  };
  auto* run = app.add_subcommand("run", "run a batch and write logs, report and plots");
  add_common(run, true);
  auto* episode = app.add_subcommand("episode", "run one seeded episode and print its log");
  add_common(episode, false);
  episode->add_option("--scenario", ep.scenario, "CC, PT, HS, PeT, RC, CN or CCSO");
  episode->add_option("--model", ep.model, "ORCA, SFM, HSFM, HSFM-standard, HSFM-modified");
  episode->add_option("--policy", ep.policy, "BP, SSP, ORCA or external:<command>");
  episode->add_option("--humans", ep.humans, "number of humans")->check(CLI::NonNegativeNumber);
  episode->add_option("--noise", ep.noise, "observation noise, fraction of nominal")
      ->check(CLI::NonNegativeNumber);
  auto* metrics = app.add_subcommand("metrics", "rebuild report.csv from the logs in --out");
  add_common(metrics, false);
  auto* plot = app.add_subcommand("plot", "emit SVG plots from report.csv in --out");
  add_common(plot, false);
  plot->add_option("--metric", plot_metrics, "metric to plot (repeatable; default all)");
  plot->add_option("--x", plot_x, "x axis: humans or noise")
      ->check(CLI::IsMember({"humans", "noise"}));
  auto* validate = app.add_subcommand("validate", "check a batch configuration");
  add_common(validate, true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfigError;
  }

  try {
    if (run->parsed()) return cmd_run(common);
    if (episode->parsed()) return cmd_episode(common, ep);
    if (metrics->parsed()) return cmd_metrics(common);
    if (plot->parsed()) return cmd_plot(common, plot_metrics, plot_x);
    if (validate->parsed()) return cmd_validate(common);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kConfigError;
  } catch (const PlotError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kConfigError;
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kIoError;
  } catch (const LogParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kIoError;
  }
  return kConfigError;
}
