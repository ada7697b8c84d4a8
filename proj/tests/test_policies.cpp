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

#include <vector>

#include "socnav/policies.hpp"

namespace socnav {
namespace {

TEST(Reward, Branches) {
  const RewardParams p;
  EXPECT_DOUBLE_EQ(reward(-0.01, 5.0, 0.3, p), -0.25);
  EXPECT_DOUBLE_EQ(reward(-0.01, 0.0, 0.3, p), -0.25);  // collision wins over goal
  EXPECT_DOUBLE_EQ(reward(0.1, 5.0, 0.3, p), -(0.2 - 0.1) * 0.25 / 2.0);
  EXPECT_DOUBLE_EQ(reward(0.0, 5.0, 0.3, p), -0.2 * 0.25 / 2.0);
  EXPECT_DOUBLE_EQ(reward(0.2, 5.0, 0.3, p), 0.0);
  EXPECT_DOUBLE_EQ(reward(1.0, 0.29, 0.3, p), 1.0);
  EXPECT_DOUBLE_EQ(reward(INFINITY, 0.29, 0.3, p), 1.0);
  EXPECT_DOUBLE_EQ(reward(1.0, 0.3, 0.3, p), 0.0);
}

TEST(Reward, Discounting) {
  EXPECT_DOUBLE_EQ(discount_factor(0.9, 0.25, 1.0), std::pow(0.9, 0.25));
  const std::vector<double> r{0.0, 0.0, 1.0};
  EXPECT_NEAR(discounted_return(r, 0.9, 0.25, 1.0), std::pow(0.9, 0.5), 1e-12);
  EXPECT_DOUBLE_EQ(discounted_return({}, 0.9, 0.25, 1.0), 0.0);
}

TEST(DMin, StaticPair) {
  EXPECT_NEAR(d_min({0, 0}, {}, 0.3, {1, 0}, {}, 0.3, 0.25), 0.4, 1e-12);
}

TEST(DMin, ClosestApproachInsideInterval) {
  // Head-on at 2 m/s closing speed: centres meet at t = 0.5 s.
  EXPECT_NEAR(d_min({0, 0}, {1, 0}, 0.3, {1, 0}, {-1, 0}, 0.3, 1.0), -0.6, 1e-12);
  // Only 0.25 s elapses: gap 1 - 0.5 - 0.6.
  EXPECT_NEAR(d_min({0, 0}, {1, 0}, 0.3, {1, 0}, {-1, 0}, 0.3, 0.25), -0.1, 1e-12);
}

TEST(DMin, PassingOffset) {
  // Lateral offset 1 m, relative motion along x: closest gap 1 - 0.6.
  EXPECT_NEAR(d_min({0, 0}, {1, 0}, 0.3, {1, 1}, {0, 0}, 0.3, 2.0), 0.4, 1e-12);
}

TEST(DMin, RecedingUsesStart) {
  EXPECT_NEAR(d_min({0, 0}, {-1, 0}, 0.3, {1, 0}, {1, 0}, 0.3, 0.25), 0.4, 1e-12);
}

TEST(Clamp, ProjectsOntoBall) {
  const RobotAction a = clamp_action({{3.0, 4.0}}, 1.0);
  EXPECT_NEAR(a.velocity.x, 0.6, 1e-12);
  EXPECT_NEAR(a.velocity.y, 0.8, 1e-12);
  const RobotAction b = clamp_action({{0.3, 0.4}}, 1.0);
  EXPECT_EQ(b.velocity, (Vec2{0.3, 0.4}));
}

RobotFullState robot_at(Vec2 p, Vec2 goal) {
  RobotFullState r;
  r.position = p;
  r.goal = goal;
  return r;
}

TEST(Bp, HeadsToGoalAtFullSpeed) {
  const RobotAction a = bp_action(robot_at({0, 0}, {3, 4}));
  EXPECT_NEAR(a.velocity.x, 0.6, 1e-12);
  EXPECT_NEAR(a.velocity.y, 0.8, 1e-12);
  EXPECT_EQ(bp_action(robot_at({0, 0}, {0.1, 0})).velocity, Vec2{});
}

TEST(Ssp, StopsNearHumans) {
  const RobotFullState r = robot_at({0, 0}, {5, 0});
  HumanObservation near;
  near.position = {0.0, 0.75};  // gap 0.15
  HumanObservation far;
  far.position = {0.0, 0.85};  // gap 0.25
  EXPECT_EQ(ssp_action(r, std::vector{near}).velocity, Vec2{});
  EXPECT_EQ(ssp_action(r, std::vector{far}).velocity, (Vec2{1.0, 0.0}));
  EXPECT_EQ(ssp_action(r, {}).velocity, (Vec2{1.0, 0.0}));
}

TEST(OrcaRobot, AvoidsHumanAhead) {
  Observation obs;
  obs.robot = robot_at({0, 0}, {5, 0});
  HumanObservation h;
  h.position = {1.5, 0.0};
  h.velocity = {-1.0, 0.0};
  obs.humans.push_back(h);
  const RobotAction a = orca_robot_action(obs, ModelParams{});
  EXPECT_LE(a.velocity.norm(), 1.0 + 1e-9);
  EXPECT_GT(std::abs(a.velocity.y), 1e-3);
  obs.humans.clear();
  EXPECT_EQ(orca_robot_action(obs, ModelParams{}).velocity, (Vec2{1.0, 0.0}));
}

TEST(MakePolicy, KnownNames) {
  EXPECT_EQ(make_policy("BP", {})->name(), "BP");
  EXPECT_EQ(make_policy("SSP", {})->name(), "SSP");
  EXPECT_EQ(make_policy("ORCA", {})->name(), "ORCA");
  EXPECT_EQ(make_policy("external:cat", {})->name(), "external:cat");
}

TEST(MakePolicy, RejectsUnknown) {
  EXPECT_THROW(make_policy("RL", {}), std::invalid_argument);
  EXPECT_THROW(make_policy("", {}), std::invalid_argument);
  EXPECT_THROW(make_policy("external:", {}), std::invalid_argument);
}

}  // namespace
}  // namespace socnav
