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

#ifndef SOCNAV_ENGINE_HPP
#define SOCNAV_ENGINE_HPP

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "socnav/core.hpp"
#include "socnav/policies.hpp"
#include "socnav/rng.hpp"
#include "socnav/scenarios.hpp"

namespace socnav {

enum class MotionModel { kOrca, kSfm, kHsfmStandard, kHsfmModified };

std::string_view to_string(MotionModel model);
/// ORCA, SFM, HSFM-standard, HSFM-modified; plain "HSFM" means the
/// modified variant. Case-insensitive.
std::optional<MotionModel> parse_motion_model(std::string_view name);

struct EngineConfig {
  double human_dt{0.01};   // s
  double robot_dt{0.25};   // s
  double time_limit{50.0}; // s
  double discount{0.9};
  double discomfort_distance{0.2};  // m
  bool robot_visible{true};
  double noise_pct{0.0};
  std::uint64_t seed{0};

  void validate() const;
  /// Human integration steps per robot decision.
  int substeps() const;
  /// Upper bound on robot decisions per episode.
  int max_decisions() const;
};

enum class Outcome { kSuccess, kTimeout, kCollision, kAborted };

std::string_view to_string(Outcome outcome);
std::optional<Outcome> parse_outcome(std::string_view name);

/// One robot decision: pre-step states, the action taken and its reward.
struct StepRecord {
  int step{0};
  double time{0.0};
  AgentState robot;
  Vec2 action;
  std::vector<AgentState> humans;
  double reward{0.0};
  double d_min{0.0};  // predicted, +inf without humans
};

struct EpisodeLog {
  EngineConfig config;
  ScenarioSpec scenario;
  ScenarioFamily realized{ScenarioFamily::kCircularCrossing};
  std::string model;
  std::string policy;
  std::string cell;  // batch cell label, empty for ad-hoc runs
  double robot_radius{0.3};
  double robot_max_speed{1.0};
  Vec2 robot_start;
  Vec2 robot_goal;
  std::vector<double> human_radii;
  std::vector<Obstacle> obstacles;

  std::vector<StepRecord> records;

  Outcome outcome{Outcome::kTimeout};
  std::optional<double> time_to_goal;
  AgentState robot_final;
  double final_time{0.0};
  long human_overlaps{0};           // (substep, pair) samples with human-human overlap
  long robot_obstacle_overlaps{0};  // substeps with robot-obstacle overlap
  std::string abort_reason;
};

/// Non-finite state after integration. Always a bug; never swallowed.
class EngineFault : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// One synchronous integration step of every human from the frozen
/// pre-step snapshot. Linear relaxation terms are integrated exactly over
/// the step; positions, headings and interaction forces use explicit Euler.
WorldState step_humans(const WorldState& world, MotionModel model, double dt);

/// step_humans followed by the scenario's respawn / re-goal rule.
void advance_humans(WorldState& world, MotionModel model, double dt, const RespawnRule& rule,
                    Rng& rng);

/// Robot-side view. Human relative position and velocity components get
/// independent N(0, sigma) noise with sigma = noise_pct * |nominal vector|.
Observation observe(const WorldState& world, double noise_pct, Rng& rng);

/// Runs a full episode. Scenario, respawn and noise draws come from
/// separate streams of config.seed. Policy failures end the episode with
/// outcome kAborted; engine faults propagate.
EpisodeLog run_episode(const ScenarioSpec& scenario, MotionModel model, Policy& policy,
                       const EngineConfig& config);

}  // namespace socnav

#endif  // SOCNAV_ENGINE_HPP
