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

#include "socnav/batch.hpp"

#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <exception>
#include <map>
#include <mutex>
#include <set>
#include <thread>

#include "socnav/log_io.hpp"
#include "socnav/rng.hpp"

namespace socnav {
namespace {

namespace fs = std::filesystem;

[[noreturn]] void fail(const YAML::Node& node, const std::string& what) {
  const YAML::Mark m = node.Mark();
  if (m.line >= 0) {
    throw ConfigError("config line " + std::to_string(m.line + 1) + ": " + what);
  }
  throw ConfigError("config: " + what);
}

void check_keys(const YAML::Node& map, const std::string& where,
                const std::set<std::string>& allowed) {
  if (!map.IsMap()) fail(map, where + " must be a mapping");
  for (const auto& kv : map) {
    const std::string key = kv.first.as<std::string>();
    if (!allowed.count(key)) {
      std::string list;
      for (const std::string& a : allowed) list += (list.empty() ? "" : ", ") + a;
      fail(kv.first, "unknown key '" + key + "' in " + where + " (allowed: " + list + ")");
    }
  }
}

template <typename T>
T scalar(const YAML::Node& node, const std::string& what) {
  try {
    return node.as<T>();
  } catch (const YAML::Exception&) {
    fail(node, "'" + what + "' has an invalid value");
  }
}

/// Scalar or sequence of scalars.
template <typename T>
std::vector<T> list_of(const YAML::Node& node, const std::string& what) {
  std::vector<T> out;
  if (node.IsSequence()) {
    for (const auto& item : node) out.push_back(scalar<T>(item, what));
  } else {
    out.push_back(scalar<T>(node, what));
  }
  if (out.empty()) fail(node, "'" + what + "' must not be empty");
  return out;
}

using ParamField = double ModelParams::*;

const std::map<std::string, ParamField>& param_fields() {
  static const std::map<std::string, ParamField> fields{
      {"radius", &ModelParams::radius},
      {"mass", &ModelParams::mass},
      {"inertia", &ModelParams::inertia},
      {"max_speed", &ModelParams::max_speed},
      {"relaxation_time", &ModelParams::relaxation_time},
      {"repulsion_a", &ModelParams::repulsion_a},
      {"repulsion_b", &ModelParams::repulsion_b},
      {"repulsion_c", &ModelParams::repulsion_c},
      {"repulsion_d", &ModelParams::repulsion_d},
      {"compression_k1", &ModelParams::compression_k1},
      {"friction_k2", &ModelParams::friction_k2},
      {"hsfm_ko", &ModelParams::hsfm_ko},
      {"hsfm_kd", &ModelParams::hsfm_kd},
      {"heading_stiffness_scale", &ModelParams::heading_stiffness_scale},
      {"heading_damping_alpha", &ModelParams::heading_damping_alpha},
      {"orca_delta", &ModelParams::orca_delta},
      {"orca_horizon", &ModelParams::orca_horizon},
      {"neighbor_cutoff", &ModelParams::neighbor_cutoff}};
  return fields;
}

void apply_params(const YAML::Node& node, const std::string& where, ModelParams& p) {
  std::set<std::string> allowed;
  for (const auto& [name, _] : param_fields()) allowed.insert(name);
  check_keys(node, where, allowed);
  const bool explicit_inertia = static_cast<bool>(node["inertia"]);
  for (const auto& kv : node) {
    const std::string key = kv.first.as<std::string>();
    p.*param_fields().at(key) = scalar<double>(kv.second, where + "." + key);
  }
  // Inertia follows the disc formula unless given explicitly.
  if (!explicit_inertia) p.inertia = 0.5 * p.mass * p.radius * p.radius;
}

void apply_scenario_params(const YAML::Node& node, ScenarioSpec& s) {
  check_keys(node, "scenario_params",
             {"circle_radius", "lane_length", "lane_width", "square_side", "crowd_radius",
              "obstacle_count", "obstacle_area_min", "obstacle_area_max", "obstacle_clearance",
              "min_spawn_separation", "robot_start_offset", "human", "robot"});
  const std::pair<const char*, double ScenarioSpec::*> doubles[] = {
      {"circle_radius", &ScenarioSpec::circle_radius},
      {"lane_length", &ScenarioSpec::lane_length},
      {"lane_width", &ScenarioSpec::lane_width},
      {"square_side", &ScenarioSpec::square_side},
      {"crowd_radius", &ScenarioSpec::crowd_radius},
      {"obstacle_area_min", &ScenarioSpec::obstacle_area_min},
      {"obstacle_area_max", &ScenarioSpec::obstacle_area_max},
      {"obstacle_clearance", &ScenarioSpec::obstacle_clearance},
      {"min_spawn_separation", &ScenarioSpec::min_spawn_separation},
      {"robot_start_offset", &ScenarioSpec::robot_start_offset}};
  for (const auto& [key, field] : doubles) {
    if (node[key]) s.*field = scalar<double>(node[key], key);
  }
  if (node["obstacle_count"]) s.obstacle_count = scalar<int>(node["obstacle_count"], "obstacle_count");
  if (node["human"]) apply_params(node["human"], "scenario_params.human", s.human_params);
  if (node["robot"]) apply_params(node["robot"], "scenario_params.robot", s.robot_params);
}

void apply_engine(const YAML::Node& node, EngineConfig& e) {
  check_keys(node, "engine",
             {"human_dt", "robot_dt", "time_limit", "discount", "discomfort_distance",
              "robot_visible"});
  if (node["human_dt"]) e.human_dt = scalar<double>(node["human_dt"], "human_dt");
  if (node["robot_dt"]) e.robot_dt = scalar<double>(node["robot_dt"], "robot_dt");
  if (node["time_limit"]) e.time_limit = scalar<double>(node["time_limit"], "time_limit");
  if (node["discount"]) e.discount = scalar<double>(node["discount"], "discount");
  if (node["discomfort_distance"]) {
    e.discomfort_distance = scalar<double>(node["discomfort_distance"], "discomfort_distance");
  }
  if (node["robot_visible"]) e.robot_visible = scalar<bool>(node["robot_visible"], "robot_visible");
}

std::string fs_safe(const std::string& s) {
  std::string out;
  for (char c : s) {
    const bool ok = std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.' || c == '-';
    out += ok ? c : '_';
  }
  return out;
}

std::string policy_label(const std::string& policy) {
  constexpr std::string_view kExternal = "external:";
  if (policy.rfind(kExternal, 0) == 0) {
    char buf[24];
    std::snprintf(buf, sizeof buf, "ext%08llx",
                  static_cast<unsigned long long>(stream_seed(0, policy) & 0xffffffffULL));
    return buf;
  }
  return fs_safe(policy);
}

std::string number_label(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", x);
  return buf;
}

void expand_entry(const YAML::Node& entry, std::size_t index, BatchConfig& config) {
  const std::string where = "cells[" + std::to_string(index) + "]";
  check_keys(entry, where,
             {"name", "scenarios", "models", "policies", "n_humans", "noise_pct", "trials",
              "scenario_params"});
  for (const char* required : {"scenarios", "models", "policies", "n_humans", "trials"}) {
    if (!entry[required]) fail(entry, where + " is missing '" + required + "'");
  }
  const std::string prefix = entry["name"] ? fs_safe(scalar<std::string>(entry["name"], "name")) : "";
  const int trials = scalar<int>(entry["trials"], "trials");
  if (trials < 1) fail(entry["trials"], "'trials' must be >= 1");
  const auto noises = entry["noise_pct"] ? list_of<double>(entry["noise_pct"], "noise_pct")
                                         : std::vector<double>{0.0};
  for (double n : noises) {
    if (!(n >= 0.0)) fail(entry["noise_pct"], "'noise_pct' values must be >= 0");
  }
  ScenarioSpec base;
  if (entry["scenario_params"]) apply_scenario_params(entry["scenario_params"], base);

  for (const std::string& sname : list_of<std::string>(entry["scenarios"], "scenarios")) {
    const auto family = parse_scenario_family(sname);
    if (!family) {
      fail(entry["scenarios"], "unknown scenario '" + sname + "' (expected CC, PT, HS, PeT, RC, CN or CCSO)");
    }
    for (const std::string& mname : list_of<std::string>(entry["models"], "models")) {
      const auto model = parse_motion_model(mname);
      if (!model) {
        fail(entry["models"], "unknown model '" + mname +
                                  "' (expected ORCA, SFM, HSFM, HSFM-standard or HSFM-modified)");
      }
      for (const std::string& policy : list_of<std::string>(entry["policies"], "policies")) {
        try {
          make_policy(policy, base.robot_params);
        } catch (const std::invalid_argument& e) {
          fail(entry["policies"], e.what());
        }
        for (int n : list_of<int>(entry["n_humans"], "n_humans")) {
          for (double noise : noises) {
            ExperimentCell cell;
            cell.scenario = base;
            cell.scenario.family = *family;
            cell.scenario.n_humans = n;
            try {
              cell.scenario.validate();
            } catch (const std::invalid_argument& e) {
              fail(entry, where + ": " + e.what());
            }
            cell.model = *model;
            cell.policy = policy;
            cell.noise_pct = noise;
            cell.trials = trials;
            cell.name = (prefix.empty() ? "" : prefix + "-") +
                        std::string(to_string(*family)) + "-" +
                        std::string(to_string(*model)) + "-" + policy_label(policy) + "-n" +
                        std::to_string(n) + "-noise" + number_label(noise);
            config.cells.push_back(std::move(cell));
          }
        }
      }
    }
  }
}

struct Job {
  std::size_t cell{0};
  int trial{0};
};

struct JobResult {
  EpisodeMetrics metrics;
  GroupKey key;
  bool done{false};
  bool fresh{false};
  std::string abort_reason;
  std::string fault;
};

std::optional<EpisodeLog> try_load(const fs::path& path) {
  std::error_code ec;
  if (!fs::is_regular_file(path, ec)) return std::nullopt;
  try {
    return parse_log(read_file(path));
  } catch (const std::exception&) {
    return std::nullopt;  // partial or corrupt: rerun
  }
}

}  // namespace

BatchConfig parse_batch_config(const std::string& yaml_text) {
  YAML::Node root;
  try {
    root = YAML::Load(yaml_text);
  } catch (const YAML::Exception& e) {
    throw ConfigError(std::string("config is not valid YAML: ") + e.what());
  }
  if (!root.IsMap()) throw ConfigError("config: top level must be a mapping");
  check_keys(root, "top level", {"schema_version", "master_seed", "output_dir", "engine", "cells"});
  BatchConfig config;
  if (!root["schema_version"]) fail(root, "missing 'schema_version'");
  config.schema_version = scalar<int>(root["schema_version"], "schema_version");
  if (config.schema_version != kConfigSchemaVersion) {
    fail(root["schema_version"], "unsupported schema_version " +
                                     std::to_string(config.schema_version) + " (expected " +
                                     std::to_string(kConfigSchemaVersion) + ")");
  }
  if (root["master_seed"]) config.master_seed = scalar<std::uint64_t>(root["master_seed"], "master_seed");
  if (root["output_dir"]) config.output_dir = scalar<std::string>(root["output_dir"], "output_dir");
  if (root["engine"]) apply_engine(root["engine"], config.engine);
  try {
    config.engine.validate();
  } catch (const std::invalid_argument& e) {
    fail(root["engine"] ? root["engine"] : root, e.what());
  }
  const YAML::Node cells = root["cells"];
  if (!cells || !cells.IsSequence() || cells.size() == 0) {
    fail(root, "'cells' must be a non-empty list");
  }
  for (std::size_t i = 0; i < cells.size(); ++i) expand_entry(cells[i], i, config);
  std::set<std::string> names;
  for (const ExperimentCell& c : config.cells) {
    if (!names.insert(c.name).second) {
      throw ConfigError("config: duplicate experiment cell '" + c.name +
                        "' (give the entries distinct names)");
    }
  }
  return config;
}

BatchConfig load_batch_config(const std::filesystem::path& path) {
  std::string text;
  try {
    text = read_file(path);
  } catch (const IoError& e) {
    throw ConfigError(e.what());
  }
  return parse_batch_config(text);
}

std::filesystem::path log_path(const std::filesystem::path& out, const std::string& cell,
                               int trial) {
  return out / "logs" / cell / (std::to_string(trial) + ".log");
}

BatchResult run_batch(const BatchConfig& config, const BatchOptions& options) {
  const fs::path& out = config.output_dir;
  std::error_code ec;
  fs::create_directories(out / "logs", ec);
  if (ec) throw IoError("cannot create output directory " + out.string() + ": " + ec.message());

  // Jobs ordered by (cell name, trial); the report reduces in this order.
  std::vector<std::size_t> order(config.cells.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return config.cells[a].name < config.cells[b].name;
  });
  std::vector<Job> jobs;
  for (std::size_t c : order) {
    for (int t = 0; t < config.cells[c].trials; ++t) jobs.push_back({c, t});
  }

  std::vector<JobResult> results(jobs.size());
  std::atomic<std::size_t> next{0};
  std::atomic<long> completed{0};
  std::mutex error_mutex;
  std::exception_ptr io_failure;
  std::mutex progress_mutex;

  auto worker = [&] {
    for (;;) {
      const std::size_t j = next.fetch_add(1);
      if (j >= jobs.size()) return;
      const ExperimentCell& cell = config.cells[jobs[j].cell];
      const int trial = jobs[j].trial;
      JobResult& r = results[j];
      const fs::path path = log_path(out, cell.name, trial);
      try {
        std::optional<EpisodeLog> log = try_load(path);
        if (!log) {
          EngineConfig ec_cfg = config.engine;
          ec_cfg.seed = trial_seed(config.master_seed, jobs[j].cell, static_cast<std::uint32_t>(trial));
          ec_cfg.noise_pct = cell.noise_pct;
          auto policy = make_policy(cell.policy, cell.scenario.robot_params);
          EpisodeLog fresh = run_episode(cell.scenario, cell.model, *policy, ec_cfg);
          fresh.cell = cell.name;
          write_file_atomic(path, serialize_log(fresh));
          log = std::move(fresh);
          r.fresh = true;
        }
        r.metrics = episode_metrics(*log, log->config.discount);
        r.key = group_key(*log);
        if (log->outcome == Outcome::kAborted) r.abort_reason = log->abort_reason;
        r.done = true;
      } catch (const IoError&) {
        std::lock_guard lock(error_mutex);
        if (!io_failure) io_failure = std::current_exception();
      } catch (const std::exception& e) {
        r.fault = e.what();
      }
      const long n = ++completed;
      if (!options.quiet && options.progress &&
          (n % 100 == 0 || n == static_cast<long>(jobs.size()))) {
        std::lock_guard lock(progress_mutex);
        options.progress(std::to_string(n) + "/" + std::to_string(jobs.size()) + " episodes");
      }
    }
  };

  int n_threads = options.jobs > 0 ? options.jobs
                                   : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  n_threads = std::min<int>(n_threads, static_cast<int>(std::max<std::size_t>(1, jobs.size())));
  std::vector<std::thread> pool;
  for (int i = 1; i < n_threads; ++i) pool.emplace_back(worker);
  worker();
  for (std::thread& t : pool) t.join();
  if (io_failure) std::rethrow_exception(io_failure);

  BatchResult result;
  std::vector<KeyedMetrics> keyed;
  std::map<std::string, CellFailure> failures;
  for (std::size_t j = 0; j < jobs.size(); ++j) {
    const JobResult& r = results[j];
    const std::string& cell = config.cells[jobs[j].cell].name;
    if (!r.done) {
      CellFailure& f = failures[cell];
      f.cell = cell;
      ++f.aborted;
      if (f.first_reason.empty()) f.first_reason = r.fault;
      continue;
    }
    (r.fresh ? result.episodes_run : result.episodes_skipped)++;
    if (r.metrics.outcome == Outcome::kAborted) {
      CellFailure& f = failures[cell];
      f.cell = cell;
      ++f.aborted;
      if (f.first_reason.empty()) f.first_reason = r.abort_reason;
    }
    keyed.push_back({r.key, r.metrics});
  }
  for (auto& [_, f] : failures) result.failures.push_back(std::move(f));
  result.report = aggregate(keyed);
  write_file_atomic(out / "report.csv", report_csv(result.report));
  return result;
}

BatchReport report_from_logs(const std::filesystem::path& out) {
  const fs::path logs = out / "logs";
  std::error_code ec;
  if (!fs::is_directory(logs, ec)) throw IoError("no log directory at " + logs.string());
  std::vector<fs::path> cells;
  for (const auto& e : fs::directory_iterator(logs)) {
    if (e.is_directory()) cells.push_back(e.path());
  }
  std::sort(cells.begin(), cells.end());
  std::vector<KeyedMetrics> keyed;
  for (const fs::path& cell : cells) {
    std::vector<std::pair<long, fs::path>> files;
    for (const auto& e : fs::directory_iterator(cell)) {
      const fs::path& p = e.path();
      if (p.extension() != ".log") continue;
      const std::string stem = p.stem().string();
      if (stem.empty() || !std::all_of(stem.begin(), stem.end(), ::isdigit)) continue;
      files.emplace_back(std::stol(stem), p);
    }
    std::sort(files.begin(), files.end());
    for (const auto& [_, p] : files) {
      EpisodeLog log;
      try {
        log = parse_log(read_file(p));
      } catch (const LogParseError& e) {
        throw LogParseError(p.string() + ": " + e.what());
      }
      keyed.push_back({group_key(log), episode_metrics(log, log.config.discount)});
    }
  }
  return aggregate(keyed);
}

}  // namespace socnav
