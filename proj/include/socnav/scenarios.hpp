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

#ifndef SOCNAV_SCENARIOS_HPP
#define SOCNAV_SCENARIOS_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "socnav/core.hpp"
#include "socnav/rng.hpp"

namespace socnav {

enum class ScenarioFamily {
  kCircularCrossing,           // CC
  kParallelTraffic,            // PT
  kHybrid,                     // HS: fair coin between CC and PT
  kPerpendicularTraffic,       // PeT
  kRobotCrowding,              // RC
  kCrowdNavigation,            // CN
  kCircularCrossingObstacles,  // CCSO
};

std::string_view to_string(ScenarioFamily family);
/// Accepts the short names (CC, PT, HS, PeT, RC, CN, CCSO), case-insensitive.
std::optional<ScenarioFamily> parse_scenario_family(std::string_view name);

struct ScenarioSpec {
  ScenarioFamily family{ScenarioFamily::kCircularCrossing};
  int n_humans{5};
  double circle_radius{7.0};      // CC, CCSO
  double lane_length{14.0};       // PT, PeT
  double lane_width{3.0};         // PT, PeT
  double square_side{7.0};        // RC
  double crowd_radius{7.0};       // CN
  int obstacle_count{3};          // CCSO
  double obstacle_area_min{6.0};  // m^2, total over all obstacles
  double obstacle_area_max{14.0};
  double obstacle_clearance{0.5};     // m, obstacle surface to agent surface
  double min_spawn_separation{1.0};   // m, centre to centre
  double robot_start_offset{6.0};     // PT/PeT robot starts this far from the lane centre
  ModelParams human_params{};
  ModelParams robot_params{};

  void validate() const;
};

/// What happens to a human that triggers its family's re-goal condition.
struct RespawnRule {
  ScenarioFamily family{ScenarioFamily::kCircularCrossing};  // never kHybrid
  double lane_half_length{7.0};
  double lane_half_width{1.5};
  double crowd_radius{7.0};
  double entry_separation{1.0};
};

struct GeneratedScenario {
  WorldState world;
  RespawnRule rule;
  ScenarioFamily realized{ScenarioFamily::kCircularCrossing};
};

/// Rejection sampling ran out of attempts (over-dense scenario).
class GenerationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr int kMaxPlacementAttempts = 10000;

/// Seeded initial placement, goals and obstacles for one episode.
GeneratedScenario generate(const ScenarioSpec& spec, std::uint64_t seed);

/// True when human `index` met its family's respawn / re-goal condition.
bool needs_respawn(const WorldState& world, const RespawnRule& rule, std::size_t index);

/// Applies the family's rule to human `index` in place.
void respawn(WorldState& world, const RespawnRule& rule, std::size_t index, Rng& rng);

/// Straight-line start-to-goal distance of the robot.
double shortest_path_length(const WorldState& world);

}  // namespace socnav

#endif  // SOCNAV_SCENARIOS_HPP
