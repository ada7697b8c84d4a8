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

#ifndef SOCNAV_BATCH_HPP
#define SOCNAV_BATCH_HPP

#include <cstdint>
#include <filesystem>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "socnav/engine.hpp"
#include "socnav/metrics.hpp"

namespace socnav {

inline constexpr int kConfigSchemaVersion = 1;

/// Invalid or unresolvable batch configuration.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// One point of the experiment matrix.
struct ExperimentCell {
  std::string name;  // directory name under logs/
  ScenarioSpec scenario;
  MotionModel model{MotionModel::kSfm};
  std::string policy;
  double noise_pct{0.0};
  int trials{1};
};

struct BatchConfig {
  int schema_version{kConfigSchemaVersion};
  std::uint64_t master_seed{0};
  std::filesystem::path output_dir{"out"};
  EngineConfig engine;  // seed and noise_pct are set per episode
  std::vector<ExperimentCell> cells;
};

/// Parses the YAML batch file. Unknown keys, bad values and unresolvable
/// policies throw ConfigError.
BatchConfig parse_batch_config(const std::string& yaml_text);
BatchConfig load_batch_config(const std::filesystem::path& path);

struct BatchOptions {
  int jobs{0};  // 0 = hardware concurrency
  bool quiet{false};
  std::function<void(const std::string&)> progress;  // optional per-cell messages
};

struct CellFailure {
  std::string cell;
  long aborted{0};
  std::string first_reason;
};

struct BatchResult {
  BatchReport report;
  long episodes_run{0};
  long episodes_skipped{0};
  std::vector<CellFailure> failures;
};

/// Episode log path relative to the output directory.
std::filesystem::path log_path(const std::filesystem::path& out, const std::string& cell,
                               int trial);

/// Runs every episode whose log is missing or unreadable, then writes
/// out/report.csv over the configured cells. Throws IoError when the
/// output directory is unusable.
BatchResult run_batch(const BatchConfig& config, const BatchOptions& options);

/// Report over every log below out/logs, ordered by (cell, trial).
BatchReport report_from_logs(const std::filesystem::path& out);

}  // namespace socnav

#endif  // SOCNAV_BATCH_HPP
