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

#include "socnav/scenarios.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <vector>

namespace socnav {
namespace {

struct FamilyName {
  ScenarioFamily family;
  std::string_view name;
};

constexpr std::array<FamilyName, 7> kFamilyNames{{
    {ScenarioFamily::kCircularCrossing, "CC"},
    {ScenarioFamily::kParallelTraffic, "PT"},
    {ScenarioFamily::kHybrid, "HS"},
    {ScenarioFamily::kPerpendicularTraffic, "PeT"},
    {ScenarioFamily::kRobotCrowding, "RC"},
    {ScenarioFamily::kCrowdNavigation, "CN"},
    {ScenarioFamily::kCircularCrossingObstacles, "CCSO"},
}};

bool iequals(std::string_view a, std::string_view b) {
  return a.size() == b.size() &&
         std::equal(a.begin(), a.end(), b.begin(), [](char x, char y) {
           return std::tolower(static_cast<unsigned char>(x)) ==
                  std::tolower(static_cast<unsigned char>(y));
         });
}

double heading_of(Vec2 v, double fallback) {
  if (v.x == 0.0 && v.y == 0.0) return fallback;
  return wrap_angle(std::atan2(v.y, v.x));
}

Vec2 uniform_in_disc(Rng& rng, double radius) {
  const double r = radius * std::sqrt(uniform(rng, 0.0, 1.0));
  const double phi = uniform(rng, 0.0, 2.0 * kPi);
  return {r * std::cos(phi), r * std::sin(phi)};
}

// Draws candidates until `accept` holds, or throws after the attempt budget.
template <typename Draw, typename Accept>
auto sample_until(Draw&& draw, Accept&& accept, const char* what) {
  for (int attempt = 0; attempt < kMaxPlacementAttempts; ++attempt) {
    auto candidate = draw();
    if (accept(candidate)) return candidate;
  }
  throw GenerationError(std::string("scenario generation failed: could not place ") + what +
                        " within " + std::to_string(kMaxPlacementAttempts) + " attempts");
}

bool clear_of(Vec2 p, const std::vector<Vec2>& placed, double separation) {
  const double sep_sq = separation * separation;
  return std::all_of(placed.begin(), placed.end(),
                     [&](Vec2 q) { return (p - q).norm_sq() >= sep_sq; });
}

HumanAgent make_human(const ScenarioSpec& spec, Vec2 position, Vec2 goal, Vec2 velocity,
                      double heading) {
  HumanAgent h;
  h.params = spec.human_params;
  h.state.position = position;
  h.state.velocity = velocity;
  h.state.heading = wrap_angle(heading);
  h.goal = goal;
  h.start = position;
  return h;
}

void place_robot(WorldState& world, const ScenarioSpec& spec, Vec2 start, Vec2 goal) {
  world.robot.params = spec.robot_params;
  world.robot.state.position = start;
  world.robot.state.heading = heading_of(goal - start, 0.0);
  world.robot.goal = goal;
  world.robot.start = start;
}

void generate_circle_crossing(WorldState& world, const ScenarioSpec& spec, Rng& rng) {
  const double radius = spec.circle_radius;
  const double robot_angle = uniform(rng, 0.0, 2.0 * kPi);
  const Vec2 robot_start{radius * std::cos(robot_angle), radius * std::sin(robot_angle)};
  place_robot(world, spec, robot_start, -robot_start);

  std::vector<double> angles{robot_angle};
  for (int i = 0; i < spec.n_humans; ++i) {
    const double angle = sample_until(
        [&] { return uniform(rng, 0.0, 2.0 * kPi); },
        [&](double a) {
          return std::all_of(angles.begin(), angles.end(), [&](double b) {
            return std::abs(wrap_angle(a - b)) * radius >= spec.min_spawn_separation;
          });
        },
        "circle-crossing human");
    angles.push_back(angle);
    const Vec2 start{radius * std::cos(angle), radius * std::sin(angle)};
    world.humans.push_back(make_human(spec, start, -start, {}, angle + kPi));
  }
}

void generate_lane(WorldState& world, const ScenarioSpec& spec, Rng& rng, bool perpendicular) {
  const double half_len = spec.lane_length / 2.0;
  const double half_width = spec.lane_width / 2.0;
  const double offset = spec.robot_start_offset;
  if (perpendicular) {
    place_robot(world, spec, {0.0, -offset}, {0.0, offset});
  } else {
    place_robot(world, spec, {-offset, 0.0}, {offset, 0.0});
  }
  std::vector<Vec2> placed{world.robot.start};
  const double speed = spec.human_params.max_speed;
  for (int i = 0; i < spec.n_humans; ++i) {
    const Vec2 p = sample_until(
        [&] {
          return Vec2{uniform(rng, -half_len, half_len), uniform(rng, -half_width, half_width)};
        },
        [&](Vec2 c) { return clear_of(c, placed, spec.min_spawn_separation); },
        "traffic-lane human");
    placed.push_back(p);
    // Goal lies past the exit edge so the flow keeps full speed until respawn.
    world.humans.push_back(make_human(spec, p, {-half_len - 1.0, p.y}, {-speed, 0.0}, kPi));
  }
}

void generate_robot_crowding(WorldState& world, const ScenarioSpec& spec, Rng& rng) {
  const double half = spec.square_side / 2.0;
  place_robot(world, spec, {0.0, -half}, {0.0, half});
  std::vector<Vec2> placed{world.robot.start, world.robot.goal};
  for (int i = 0; i < spec.n_humans; ++i) {
    const Vec2 p = sample_until(
        [&] { return Vec2{uniform(rng, -half, half), uniform(rng, -half, half)}; },
        [&](Vec2 c) { return clear_of(c, placed, spec.min_spawn_separation); },
        "robot-crowding human");
    placed.push_back(p);
    const double heading = uniform(rng, -kPi, kPi);
    world.humans.push_back(make_human(spec, p, p, {}, heading));
  }
}

void generate_crowd_navigation(WorldState& world, const ScenarioSpec& spec, Rng& rng) {
  const double radius = spec.crowd_radius;
  const double robot_angle = uniform(rng, 0.0, 2.0 * kPi);
  const Vec2 robot_start{radius * std::cos(robot_angle), radius * std::sin(robot_angle)};
  place_robot(world, spec, robot_start, -robot_start);
  std::vector<Vec2> placed{robot_start};
  for (int i = 0; i < spec.n_humans; ++i) {
    const Vec2 p = sample_until([&] { return uniform_in_disc(rng, radius); },
                                [&](Vec2 c) { return clear_of(c, placed, spec.min_spawn_separation); },
                                "crowd-navigation human");
    placed.push_back(p);
    const Vec2 goal = uniform_in_disc(rng, radius);
    world.humans.push_back(make_human(spec, p, goal, {}, heading_of(goal - p, 0.0)));
  }
}

void add_static_obstacles(WorldState& world, const ScenarioSpec& spec, Rng& rng) {
  const int count = spec.obstacle_count;
  if (count <= 0) return;
  const double total_area = uniform(rng, spec.obstacle_area_min, spec.obstacle_area_max);
  std::vector<double> weights(static_cast<std::size_t>(count));
  for (double& w : weights) w = uniform(rng, 0.5, 1.5);
  double weight_sum = 0.0;
  for (double w : weights) weight_sum += w;

  // Every agent start and goal the obstacles must stay clear of.
  std::vector<std::pair<Vec2, double>> keep_clear;
  keep_clear.emplace_back(world.robot.start, world.robot.params.radius);
  keep_clear.emplace_back(world.robot.goal, world.robot.params.radius);
  for (const HumanAgent& h : world.humans) {
    keep_clear.emplace_back(h.start, h.params.radius);
    keep_clear.emplace_back(h.goal, h.params.radius);
  }

  for (double w : weights) {
    const double r = std::sqrt(total_area * w / weight_sum / kPi);
    const double max_center = std::max(0.0, spec.circle_radius - r);
    const Vec2 c = sample_until(
        [&] { return uniform_in_disc(rng, max_center); },
        [&](Vec2 cand) {
          for (const auto& [q, qr] : keep_clear) {
            if ((cand - q).norm() - r - qr < spec.obstacle_clearance) return false;
          }
          for (const Obstacle& o : world.obstacles) {
            if ((cand - o.center).norm() < r + o.radius) return false;
          }
          return true;
        },
        "static obstacle");
    world.obstacles.push_back({c, r});
  }
}

}  // namespace

std::string_view to_string(ScenarioFamily family) {
  for (const auto& entry : kFamilyNames) {
    if (entry.family == family) return entry.name;
  }
  return "?";
}

std::optional<ScenarioFamily> parse_scenario_family(std::string_view name) {
  for (const auto& entry : kFamilyNames) {
    if (iequals(entry.name, name)) return entry.family;
  }
  return std::nullopt;
}

void ScenarioSpec::validate() const {
  auto require = [](bool ok, const char* what) {
    if (!ok) throw std::invalid_argument(std::string("invalid scenario parameters: ") + what);
  };
  require(n_humans >= 0, "n_humans must be >= 0");
  require(circle_radius > 0.0 && lane_length > 0.0 && lane_width > 0.0 && square_side > 0.0 &&
              crowd_radius > 0.0,
          "geometry constants must be positive");
  require(obstacle_count >= 0, "obstacle_count must be >= 0");
  require(obstacle_area_min > 0.0 && obstacle_area_max >= obstacle_area_min,
          "obstacle area range must be positive and ordered");
  require(min_spawn_separation >= 2.0 * std::max(human_params.radius, robot_params.radius),
          "min_spawn_separation must be >= 2 * agent radius");
  human_params.validate();
  robot_params.validate();
}

GeneratedScenario generate(const ScenarioSpec& spec, std::uint64_t seed) {
  spec.validate();
  Rng rng(seed);
  GeneratedScenario out;
  ScenarioFamily family = spec.family;
  if (family == ScenarioFamily::kHybrid) {
    family = uniform(rng, 0.0, 1.0) < 0.5 ? ScenarioFamily::kCircularCrossing
                                          : ScenarioFamily::kParallelTraffic;
  }
  out.realized = family;
  WorldState& world = out.world;
  switch (family) {
    case ScenarioFamily::kCircularCrossing:
      generate_circle_crossing(world, spec, rng);
      break;
    case ScenarioFamily::kCircularCrossingObstacles:
      generate_circle_crossing(world, spec, rng);
      add_static_obstacles(world, spec, rng);
      break;
    case ScenarioFamily::kParallelTraffic:
      generate_lane(world, spec, rng, false);
      break;
    case ScenarioFamily::kPerpendicularTraffic:
      generate_lane(world, spec, rng, true);
      break;
    case ScenarioFamily::kRobotCrowding:
      generate_robot_crowding(world, spec, rng);
      break;
    case ScenarioFamily::kCrowdNavigation:
      generate_crowd_navigation(world, spec, rng);
      break;
    case ScenarioFamily::kHybrid:
      break;
  }
  out.rule.family = family;
  out.rule.lane_half_length = spec.lane_length / 2.0;
  out.rule.lane_half_width = spec.lane_width / 2.0;
  out.rule.crowd_radius = spec.crowd_radius;
  out.rule.entry_separation = spec.min_spawn_separation;
  return out;
}

bool needs_respawn(const WorldState& world, const RespawnRule& rule, std::size_t index) {
  const HumanAgent& h = world.humans.at(index);
  switch (rule.family) {
    case ScenarioFamily::kParallelTraffic:
    case ScenarioFamily::kPerpendicularTraffic:
      return h.state.position.x < -rule.lane_half_length;
    case ScenarioFamily::kCircularCrossing:
    case ScenarioFamily::kCircularCrossingObstacles:
    case ScenarioFamily::kCrowdNavigation:
      return (h.state.position - h.goal).norm() < h.params.goal_radius();
    case ScenarioFamily::kRobotCrowding:
    case ScenarioFamily::kHybrid:
      return false;
  }
  return false;
}

void respawn(WorldState& world, const RespawnRule& rule, std::size_t index, Rng& rng) {
  HumanAgent& h = world.humans.at(index);
  switch (rule.family) {
    case ScenarioFamily::kParallelTraffic:
    case ScenarioFamily::kPerpendicularTraffic: {
      // Re-enter on the far edge at the same height, stepping further out
      // while the entry point is occupied.
      Vec2 entry{rule.lane_half_length, h.state.position.y};
      const double sep_sq = rule.entry_separation * rule.entry_separation;
      auto occupied = [&](Vec2 p) {
        for (std::size_t j = 0; j < world.humans.size(); ++j) {
          if (j != index && (world.humans[j].state.position - p).norm_sq() < sep_sq) return true;
        }
        return (world.robot.state.position - p).norm_sq() < sep_sq;
      };
      for (int k = 0; k < 100 && occupied(entry); ++k) entry.x += 0.1;
      h.state.position = entry;
      h.state.velocity = {-h.params.max_speed, 0.0};
      h.state.heading = kPi;
      h.state.angular_velocity = 0.0;
      break;
    }
    case ScenarioFamily::kCircularCrossing:
    case ScenarioFamily::kCircularCrossingObstacles:
      std::swap(h.start, h.goal);
      break;
    case ScenarioFamily::kCrowdNavigation:
      h.goal = uniform_in_disc(rng, rule.crowd_radius);
      break;
    case ScenarioFamily::kRobotCrowding:
    case ScenarioFamily::kHybrid:
      break;
  }
}

double shortest_path_length(const WorldState& world) {
  return (world.robot.goal - world.robot.start).norm();
}

}  // namespace socnav
