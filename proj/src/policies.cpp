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

#include "socnav/policies.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "socnav/bridge.hpp"
#include "socnav/orca.hpp"

namespace socnav {

double d_min(Vec2 robot_position, Vec2 robot_velocity, double robot_radius, Vec2 human_position,
             Vec2 human_velocity, double human_radius, double dt) {
  const Vec2 p0 = robot_position - human_position;
  const Vec2 w = robot_velocity - human_velocity;
  const double w_sq = w.norm_sq();
  double t = 0.0;
  if (w_sq > 0.0) t = std::clamp(-dot(p0, w) / w_sq, 0.0, dt);
  return (p0 + w * t).norm() - robot_radius - human_radius;
}

double reward(double min_gap, double goal_distance, double robot_radius,
              const RewardParams& params) {
  if (min_gap < 0.0) return params.collision_penalty;
  if (min_gap < params.discomfort_distance) {
    return -(params.discomfort_distance - min_gap) * params.robot_dt / 2.0;
  }
  if (goal_distance < robot_radius) return params.success_reward;
  return 0.0;
}

double discount_factor(double gamma, double robot_dt, double max_speed) {
  return std::pow(gamma, robot_dt * max_speed);
}

double discounted_return(std::span<const double> rewards, double gamma, double robot_dt,
                         double max_speed) {
  const double g = discount_factor(gamma, robot_dt, max_speed);
  double total = 0.0;
  double weight = 1.0;
  for (double r : rewards) {
    total += weight * r;
    weight *= g;
  }
  return total;
}

RobotAction bp_action(const RobotFullState& robot) {
  return clamp_action({desired_velocity(robot.position, robot.goal, robot.max_speed, robot.radius)},
                      robot.max_speed);
}

RobotAction ssp_action(const RobotFullState& robot, std::span<const HumanObservation> humans) {
  for (const HumanObservation& h : humans) {
    const double gap = (h.position - robot.position).norm() - robot.radius - h.radius;
    if (gap < kSspStopGap) return {};
  }
  return bp_action(robot);
}

RobotAction orca_robot_action(const Observation& obs, const ModelParams& robot_params) {
  ModelParams params = robot_params;
  params.radius = obs.robot.radius;
  params.max_speed = obs.robot.max_speed;
  AgentState ego;
  ego.position = obs.robot.position;
  ego.velocity = obs.robot.velocity;
  std::vector<OrcaNeighbor> neighbors;
  neighbors.reserve(obs.humans.size() + obs.obstacles.size());
  for (const HumanObservation& h : obs.humans) {
    neighbors.push_back({h.position, h.velocity, h.radius, true});
  }
  for (const Obstacle& o : obs.obstacles) neighbors.push_back({o.center, Vec2{}, o.radius, false});
  const OrcaResult res = orca_step(ego, params, obs.robot.goal, neighbors);
  return clamp_action({res.new_velocity}, params.max_speed);
}

RobotAction clamp_action(RobotAction action, double max_speed) {
  const double speed = action.velocity.norm();
  if (speed > max_speed) action.velocity = action.velocity * (max_speed / speed);
  // Rounding can leave the norm one ulp above the bound.
  while (action.velocity.norm() > max_speed) {
    action.velocity = {std::nextafter(action.velocity.x, 0.0),
                       std::nextafter(action.velocity.y, 0.0)};
  }
  return action;
}

std::unique_ptr<Policy> make_policy(const std::string& spec, const ModelParams& robot_params) {
  if (spec == "BP") return std::make_unique<BlindPlanner>();
  if (spec == "SSP") return std::make_unique<SimpleSocialPlanner>();
  if (spec == "ORCA") return std::make_unique<OrcaPlanner>(robot_params);
  constexpr std::string_view kExternal = "external:";
  if (spec.rfind(kExternal, 0) == 0 && spec.size() > kExternal.size()) {
    return std::make_unique<ExternalPolicy>(spec.substr(kExternal.size()));
  }
  throw std::invalid_argument("unknown robot policy '" + spec +
                              "' (expected BP, SSP, ORCA or external:<command>)");
}

}  // namespace socnav
