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

#include "socnav/sfm.hpp"

#include <algorithm>

namespace socnav {
namespace {

Vec2 pair_force(Vec2 pi, Vec2 vi, double ri, const ModelParams& params, Vec2 pj, Vec2 vj,
                double rj) {
  const Vec2 diff = pi - pj;
  const double d = diff.norm();
  if (d == 0.0) throw DegenerateGeometry("repulsive_force: coincident agent centres");
  const Vec2 n = diff / d;
  const Vec2 t = perp(n);
  const double overlap = (ri + rj) - d;
  const double compression = std::max(0.0, overlap);
  const double tangential_dv = dot(vj - vi, t);
  const double radial = params.repulsion_a * std::exp(overlap / params.repulsion_b) +
                        params.compression_k1 * compression;
  const double tangential = params.repulsion_c * std::exp(overlap / params.repulsion_d) +
                            params.friction_k2 * compression * tangential_dv;
  return n * radial + t * tangential;
}

template <typename Visit>
void for_each_neighbor(const WorldState& world, std::size_t i, Visit&& visit) {
  const HumanAgent& self = world.humans.at(i);
  const Vec2 p = self.state.position;
  const Vec2 v = self.state.velocity;
  const double r = self.params.radius;
  const double cutoff_sq = self.params.neighbor_cutoff * self.params.neighbor_cutoff;
  for (std::size_t j = 0; j < world.humans.size(); ++j) {
    if (j == i) continue;
    const HumanAgent& other = world.humans[j];
    if ((other.state.position - p).norm_sq() > cutoff_sq) continue;
    visit(pair_force(p, v, r, self.params, other.state.position, other.state.velocity,
                     other.params.radius));
  }
  if (world.robot_visible) {
    const RobotAgent& robot = world.robot;
    visit(pair_force(p, v, r, self.params, robot.state.position, robot.state.velocity,
                     robot.params.radius));
  }
  for (const Obstacle& o : world.obstacles) {
    visit(pair_force(p, v, r, self.params, o.center, Vec2{}, o.radius));
  }
}

}  // namespace

Vec2 desired_force(const AgentState& state, const ModelParams& params, Vec2 goal) {
  const Vec2 vd =
      desired_velocity(state.position, goal, params.max_speed, params.goal_radius());
  return (vd - state.velocity) * (params.mass / params.relaxation_time);
}

Vec2 repulsive_force(const AgentState& i, const ModelParams& pi, const AgentState& j,
                     const ModelParams& pj) {
  return pair_force(i.position, i.velocity, pi.radius, pi, j.position, j.velocity, pj.radius);
}

Vec2 obstacle_force(const AgentState& i, const ModelParams& pi, const Obstacle& obstacle) {
  return pair_force(i.position, i.velocity, pi.radius, pi, obstacle.center, Vec2{},
                    obstacle.radius);
}

ForceBreakdown force_breakdown(const WorldState& world, std::size_t agent_index) {
  const HumanAgent& self = world.humans.at(agent_index);
  ForceBreakdown out;
  out.desired = desired_force(self.state, self.params, self.goal);
  for_each_neighbor(world, agent_index, [&](Vec2 f) {
    out.per_neighbor.push_back(f);
    out.repulsive_total += f;
  });
  return out;
}

Vec2 repulsion_total(const WorldState& world, std::size_t agent_index) {
  Vec2 total;
  for_each_neighbor(world, agent_index, [&](Vec2 f) { total += f; });
  return total;
}

Vec2 sfm_input(const WorldState& world, std::size_t agent_index) {
  const HumanAgent& self = world.humans.at(agent_index);
  return desired_force(self.state, self.params, self.goal) + repulsion_total(world, agent_index);
}

}  // namespace socnav
