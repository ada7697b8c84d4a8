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

#ifndef SOCNAV_SFM_HPP
#define SOCNAV_SFM_HPP

#include <cstddef>
#include <vector>

#include "socnav/core.hpp"

namespace socnav {

struct ForceBreakdown {
  Vec2 desired;
  Vec2 repulsive_total;
  std::vector<Vec2> per_neighbor;
};

/// m (v_d - v) / tau, with v_d toward `goal`.
Vec2 desired_force(const AgentState& state, const ModelParams& params, Vec2 goal);

/// Repulsion exerted by j on i: exponential plus compression along the
/// centre line, exponential plus sliding friction along its right-handed
/// orthogonal. Constants A..D are taken from i; only j's radius matters.
/// Throws DegenerateGeometry when the centres coincide.
Vec2 repulsive_force(const AgentState& i, const ModelParams& pi, const AgentState& j,
                     const ModelParams& pj);

/// Same law against a disc with zero velocity (static obstacle).
Vec2 obstacle_force(const AgentState& i, const ModelParams& pi, const Obstacle& obstacle);

/// Desired force and every repulsion term acting on human `agent_index`:
/// other humans inside the cutoff, the robot when visible, every obstacle.
ForceBreakdown force_breakdown(const WorldState& world, std::size_t agent_index);

/// Sum of repulsions only; same neighbour set as force_breakdown.
Vec2 repulsion_total(const WorldState& world, std::size_t agent_index);

/// Driving input u = f_d + sum f_p.
Vec2 sfm_input(const WorldState& world, std::size_t agent_index);

}  // namespace socnav

#endif  // SOCNAV_SFM_HPP
