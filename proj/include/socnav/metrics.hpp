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

#ifndef SOCNAV_METRICS_HPP
#define SOCNAV_METRICS_HPP

#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "socnav/engine.hpp"

namespace socnav {

inline constexpr double kSpaceComplianceGap = 0.5;  // m
inline constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

/// Per-episode results. The episodic fields are NaN unless success is
/// true; discounted_return is always defined.
struct EpisodeMetrics {
  Outcome outcome{Outcome::kTimeout};
  bool success{false};
  double time_to_goal{kNaN};       // s
  double avg_speed{kNaN};          // m/s
  double path_length{kNaN};        // m
  double space_compliance{kNaN};   // fraction
  double avg_acceleration{kNaN};   // m/s^2
  double avg_jerk{kNaN};           // m/s^3
  double avg_min_dist{kNaN};       // m, NaN without humans
  double discounted_return{0.0};
  double shortest_path{0.0};  // m, straight-line start to goal
};

EpisodeMetrics episode_metrics(const EpisodeLog& log, double gamma,
                               double compliance_gap = kSpaceComplianceGap);

struct SplSample {
  bool success{false};
  double shortest{0.0};  // l_i
  double actual{0.0};    // p_i
};

/// Success weighted by path length. Throws std::invalid_argument on an
/// empty batch.
double spl(std::span<const SplSample> episodes);

/// Linear-interpolation quantile of an unsorted sample, q in [0, 1].
double quantile(std::vector<double> values, double q);

struct GroupKey {
  std::string policy;
  std::string model;
  std::string scenario;
  int n_humans{0};
  double noise_pct{0.0};

  auto operator<=>(const GroupKey&) const = default;
};

struct KeyedMetrics {
  GroupKey key;
  EpisodeMetrics metrics;
};

/// One (group, metric) row. status is "ok", "partial" when some episodes
/// of the group were aborted, or "empty" when no sample exists (statistics
/// left NaN).
struct ReportRow {
  GroupKey key;
  std::string metric;
  std::string status;
  double mean{0.0};
  double median{0.0};
  double q1{0.0};
  double q3{0.0};
  long count{0};
};

struct BatchReport {
  std::vector<ReportRow> rows;
};

/// Metric names in report order. Rates use all episodes of the group; the
/// episodic metrics only successful ones.
const std::vector<std::string>& report_metrics();

/// Groups in key order; within a group episodes keep their input order.
BatchReport aggregate(std::span<const KeyedMetrics> episodes);

GroupKey group_key(const EpisodeLog& log);

std::string report_csv(const BatchReport& report);
/// Throws std::invalid_argument naming the line on malformed input.
BatchReport parse_report_csv(const std::string& text);

}  // namespace socnav

#endif  // SOCNAV_METRICS_HPP
