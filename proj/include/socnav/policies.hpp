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

#ifndef SOCNAV_POLICIES_HPP
#define SOCNAV_POLICIES_HPP

#include <cstdint>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "socnav/core.hpp"

namespace socnav {

/// Holonomic velocity command, |velocity| <= v_max.
struct RobotAction {
  Vec2 velocity;
};

struct RobotFullState {
  Vec2 position;
  Vec2 velocity;
  Vec2 goal;
  double radius{0.3};
  double max_speed{1.0};
};

/// Observable part of one human. Position and velocity may carry noise;
/// heading and angular velocity are passed exactly (inert for ORCA/SFM).
struct HumanObservation {
  Vec2 position;
  Vec2 velocity;
  double heading{0.0};
  double angular_velocity{0.0};
  double radius{0.3};
};

struct Observation {
  double time{0.0};
  RobotFullState robot;
  std::vector<HumanObservation> humans;
  std::vector<Obstacle> obstacles;
};

struct RewardParams {
  double discomfort_distance{0.2};  // d_s, m
  double robot_dt{0.25};            // s
  double collision_penalty{-0.25};
  double success_reward{1.0};
};

/// Minimum predicted surface gap over [0, dt] with both velocities held.
double d_min(Vec2 robot_position, Vec2 robot_velocity, double robot_radius, Vec2 human_position,
             Vec2 human_velocity, double human_radius, double dt);

/// Step reward; branches are tested in order collision, discomfort,
/// goal, otherwise.
double reward(double min_gap, double goal_distance, double robot_radius,
              const RewardParams& params);

/// gamma^(robot_dt * v_max).
double discount_factor(double gamma, double robot_dt, double max_speed);

/// sum_k gamma_bar^k R_k over the reward sequence.
double discounted_return(std::span<const double> rewards, double gamma, double robot_dt,
                         double max_speed);

/// Straight to the goal at full speed, blind to humans.
RobotAction bp_action(const RobotFullState& robot);

inline constexpr double kSspStopGap = 0.2;  // m

/// BP, but halts while any human surface gap is below 0.2 m.
RobotAction ssp_action(const RobotFullState& robot, std::span<const HumanObservation> humans);

/// Robot runs the ORCA pipeline against humans (reciprocal) and obstacles.
RobotAction orca_robot_action(const Observation& obs, const ModelParams& robot_params);

/// Projects onto the closed speed ball.
RobotAction clamp_action(RobotAction action, double max_speed);

/// Controller failure (bridge closed, timeout, malformed reply). The
/// engine marks the episode aborted.
class PolicyFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct EpisodeInfo {
  std::uint64_t episode_id{0};
  std::string model;     // human motion model name
  std::string scenario;  // realized scenario family
};

class Policy {
 public:
  virtual ~Policy() = default;
  virtual std::string name() const = 0;
  virtual void begin_episode(const EpisodeInfo& /*info*/) {}
  virtual RobotAction act(const Observation& obs) = 0;
  virtual void end_episode(const std::string& /*outcome*/) {}
};

class BlindPlanner final : public Policy {
 public:
  std::string name() const override { return "BP"; }
  RobotAction act(const Observation& obs) override { return bp_action(obs.robot); }
};

class SimpleSocialPlanner final : public Policy {
 public:
  std::string name() const override { return "SSP"; }
  RobotAction act(const Observation& obs) override { return ssp_action(obs.robot, obs.humans); }
};

class OrcaPlanner final : public Policy {
 public:
  explicit OrcaPlanner(ModelParams robot_params = {}) : params_(robot_params) {}
  std::string name() const override { return "ORCA"; }
  RobotAction act(const Observation& obs) override { return orca_robot_action(obs, params_); }

 private:
  ModelParams params_;
};

/// "BP", "SSP", "ORCA", or "external:<shell command>". Throws
/// std::invalid_argument for anything else.
std::unique_ptr<Policy> make_policy(const std::string& spec, const ModelParams& robot_params);

}  // namespace socnav

#endif  // SOCNAV_POLICIES_HPP
