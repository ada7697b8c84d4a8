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

#include "socnav/engine.hpp"
#include "socnav/orca.hpp"
#include "socnav/rng.hpp"

namespace socnav {
namespace {

AgentState at(Vec2 p, Vec2 v = {}) {
  AgentState s;
  s.position = p;
  s.velocity = v;
  return s;
}

TEST(SolveVelocity, UnconstrainedReturnsPreferred) {
  const VelocitySolution s = solve_velocity({}, {0.3, -0.4}, 1.0);
  EXPECT_TRUE(s.feasible);
  EXPECT_DOUBLE_EQ(s.velocity.x, 0.3);
  EXPECT_DOUBLE_EQ(s.velocity.y, -0.4);
}

TEST(SolveVelocity, ProjectsOntoSpeedDisc) {
  const VelocitySolution s = solve_velocity({}, {1.2, 1.6}, 1.0);
  EXPECT_NEAR(s.velocity.x, 0.6, 1e-12);
  EXPECT_NEAR(s.velocity.y, 0.8, 1e-12);
}

TEST(SolveVelocity, ProjectsOntoSingleHalfPlane) {
  const HalfPlane hp{{0.0, 0.2}, {0.0, 1.0}};  // v.y >= 0.2
  const VelocitySolution s = solve_velocity(std::vector{hp}, {0.5, -0.3}, 1.0);
  EXPECT_TRUE(s.feasible);
  EXPECT_NEAR(s.velocity.x, 0.5, 1e-12);
  EXPECT_NEAR(s.velocity.y, 0.2, 1e-12);
}

TEST(SolveVelocity, InfeasibleFallsBackToLeastViolation) {
  // v.x >= 0.5 and v.x <= -0.5 cannot both hold; the balanced point is x = 0.
  const std::vector<HalfPlane> planes{{{0.5, 0.0}, {1.0, 0.0}}, {{-0.5, 0.0}, {-1.0, 0.0}}};
  const VelocitySolution s = solve_velocity(planes, {0.0, 0.7}, 1.0);
  EXPECT_FALSE(s.feasible);
  EXPECT_NEAR(s.velocity.x, 0.0, 1e-9);
  EXPECT_LE(s.velocity.norm(), 1.0 + 1e-9);
}

TEST(SolveVelocity, FeasibilityCertificate) {
  Rng rng(5);
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<HalfPlane> planes;
    const int m = static_cast<int>(uniform(rng, 0.0, 6.0));
    for (int i = 0; i < m; ++i) {
      const double a = uniform(rng, -kPi, kPi);
      HalfPlane hp{{uniform(rng, -1.0, 1.0), uniform(rng, -1.0, 1.0)}, {std::cos(a), std::sin(a)}};
      if (!hp.contains({0.0, 0.0})) hp.normal = -hp.normal;  // keep the origin feasible
      planes.push_back(hp);
    }
    const VelocitySolution s =
        solve_velocity(planes, {uniform(rng, -2.0, 2.0), uniform(rng, -2.0, 2.0)}, 1.0);
    ASSERT_TRUE(s.feasible);
    EXPECT_LE(s.velocity.norm(), 1.0 + 1e-9);
    for (const HalfPlane& hp : planes) EXPECT_TRUE(hp.contains(s.velocity, 1e-9));
  }
}

TEST(BuildConstraints, NoNeighboursNoPlanes) {
  EXPECT_TRUE(build_constraints(at({0.0, 0.0}), ModelParams{}, {}, 5.0).empty());
}

TEST(BuildConstraints, ObstacleDeadAheadIsViolated) {
  const ModelParams p;
  const AgentState ego = at({0.0, 0.0}, {1.0, 0.0});
  // Surface gap 2 m ahead: contact after 2 s < 5 s horizon.
  const std::vector<OrcaNeighbor> obstacle{{{2.0 + 0.3 + 0.5, 0.0}, {}, 0.5, false}};
  const auto planes = build_constraints(ego, p, obstacle, 5.0);
  ASSERT_EQ(planes.size(), 1u);
  EXPECT_FALSE(planes[0].contains(ego.velocity));
  EXPECT_NEAR(planes[0].normal.norm(), 1.0, 1e-9);
}

TEST(BuildConstraints, RecedingNeighbourIsSatisfied) {
  const ModelParams p;
  const AgentState ego = at({0.0, 0.0}, {-0.5, 0.0});
  const std::vector<OrcaNeighbor> n{{{1.0, 0.0}, {0.5, 0.0}, 0.3, true}};
  const auto planes = build_constraints(ego, p, n, 5.0);
  ASSERT_EQ(planes.size(), 1u);
  EXPECT_TRUE(planes[0].contains(ego.velocity));
}

TEST(BuildConstraints, CutoffAndOrdering) {
  ModelParams p;
  p.neighbor_cutoff = 3.0;
  const std::vector<OrcaNeighbor> n{{{2.5, 0.0}, {}, 0.3, true},
                                    {{5.0, 0.0}, {}, 0.3, true},
                                    {{0.0, 1.0}, {}, 0.3, true}};
  const auto planes = build_constraints(at({0.0, 0.0}), p, n, 5.0);
  ASSERT_EQ(planes.size(), 2u);
  // Nearest first: the neighbour above comes before the one at x = 2.5.
  EXPECT_NEAR(std::abs(planes[0].normal.y), 1.0, 1e-6);
}

TEST(BuildConstraints, OverlapPushesApartAlongCentreLine) {
  const ModelParams p;
  const std::vector<OrcaNeighbor> n{{{0.5, 0.0}, {}, 0.3, false}};
  const auto planes = build_constraints(at({0.0, 0.0}), p, n, 5.0);
  ASSERT_EQ(planes.size(), 1u);
  EXPECT_LT(planes[0].normal.x, -0.99);  // must move away from +x
  EXPECT_FALSE(planes[0].contains({0.0, 0.0}));
}

// A velocity on the admissible side of a static obstacle's plane, held for
// the horizon, never produces contact.
TEST(BuildConstraints, ForwardSimulationOracleForStaticDiscs) {
  Rng rng(11);
  const ModelParams p;
  int checked = 0;
  for (int trial = 0; trial < 300; ++trial) {
    const double angle = uniform(rng, -kPi, kPi);
    const double dist = uniform(rng, 0.9, 6.0);
    const double r = uniform(rng, 0.2, 1.0);
    if (dist <= r + p.radius) continue;
    const OrcaNeighbor obs{{dist * std::cos(angle), dist * std::sin(angle)}, {}, r, false};
    const AgentState ego = at({0.0, 0.0}, {uniform(rng, -1.0, 1.0), uniform(rng, -1.0, 1.0)});
    const auto planes = build_constraints(ego, p, std::vector{obs}, p.orca_horizon);
    ASSERT_EQ(planes.size(), 1u);
    for (int k = 0; k < 20; ++k) {
      const Vec2 v{uniform(rng, -1.5, 1.5), uniform(rng, -1.5, 1.5)};
      if (!planes[0].contains(v)) continue;
      ++checked;
      for (double t = 0.0; t <= p.orca_horizon; t += 0.005) {
        EXPECT_GE((v * t - obs.position).norm(), r + p.radius - 1e-6);
      }
    }
  }
  EXPECT_GT(checked, 1000);
}

TEST(OrcaStep, LoneAgentKeepsPreferredVelocity) {
  const ModelParams p;
  const OrcaResult r = orca_step(at({0.0, 0.0}, {0.2, 0.0}), p, {7.0, 0.0}, {});
  EXPECT_TRUE(r.feasible);
  EXPECT_DOUBLE_EQ(r.new_velocity.x, 1.0);
  EXPECT_DOUBLE_EQ(r.new_velocity.y, 0.0);
  EXPECT_NEAR(r.acceleration.x, (1.0 - 0.2) / p.orca_delta, 1e-9);
}

TEST(OrcaStep, AtGoalStops) {
  const ModelParams p;
  const OrcaResult r = orca_step(at({1.0, 1.0}), p, {1.0, 1.1}, {});
  EXPECT_EQ(r.new_velocity, Vec2{});
}

TEST(OrcaStep, SpeedBoundHolds) {
  Rng rng(3);
  const ModelParams p;
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<OrcaNeighbor> n;
    for (int i = 0; i < 4; ++i) {
      n.push_back({{uniform(rng, -3, 3), uniform(rng, -3, 3)},
                   {uniform(rng, -1, 1), uniform(rng, -1, 1)}, 0.3, true});
    }
    const AgentState ego = at({uniform(rng, -0.2, 0.2), -4.0}, {0.0, 0.5});
    const OrcaResult r = orca_step(ego, p, {0.0, 5.0}, n);
    EXPECT_LE(r.new_velocity.norm(), p.max_speed + 1e-9);
    EXPECT_NEAR(r.acceleration.x, (r.new_velocity.x - ego.velocity.x) / p.orca_delta, 1e-9);
  }
}

TEST(OrcaInput, HeadOnPairStaysMirroredAndApart) {
  WorldState w;
  w.robot_visible = false;
  for (double s : {-1.0, 1.0}) {
    HumanAgent h;
    h.state.position = {2.0 * s, 0.0};
    h.goal = {-2.0 * s, 0.0};
    h.start = h.state.position;
    w.humans.push_back(h);
  }
  double closest = INFINITY;
  for (int k = 0; k < 1000; ++k) {
    w = step_humans(w, MotionModel::kOrca, 0.01);
    const Vec2 a = w.humans[0].state.position;
    const Vec2 b = w.humans[1].state.position;
    ASSERT_NEAR(a.x, -b.x, 1e-9);
    ASSERT_NEAR(a.y, -b.y, 1e-9);
    closest = std::min(closest, (a - b).norm());
  }
  EXPECT_GE(closest, 0.6);
  // The pair actually passed each other.
  EXPECT_GT(w.humans[0].state.position.x, 1.0);
}

TEST(OrcaInput, NeighbourSetFollowsVisibility) {
  WorldState w;
  HumanAgent h;
  h.goal = {5.0, 0.0};
  w.humans.push_back(h);
  w.robot.state.position = {1.0, 0.0};
  w.robot_visible = false;
  const OrcaResult hidden = orca_input(w, 0);
  EXPECT_DOUBLE_EQ(hidden.new_velocity.x, 1.0);
  w.robot_visible = true;
  const OrcaResult seen = orca_input(w, 0);
  EXPECT_NE(seen.new_velocity, hidden.new_velocity);
}

}  // namespace
}  // namespace socnav
