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

#ifndef SOCNAV_ORCA_HPP
#define SOCNAV_ORCA_HPP

#include <cstddef>
#include <span>
#include <vector>

#include "socnav/core.hpp"

namespace socnav {

/// Velocities v with dot(normal, v - point) >= 0 are admissible.
struct HalfPlane {
  Vec2 point;
  Vec2 normal;  // unit

  bool contains(Vec2 v, double tolerance = 0.0) const {
    return dot(normal, v - point) >= -tolerance;
  }
  /// Boundary direction with the feasible side on its left.
  Vec2 direction() const { return {normal.y, -normal.x}; }
};

struct OrcaNeighbor {
  Vec2 position;
  Vec2 velocity;
  double radius{0.0};
  /// Reactive agents share avoidance half/half; static discs do not react.
  bool reciprocal{true};
};

struct OrcaResult {
  Vec2 new_velocity;
  Vec2 acceleration;
  bool feasible{true};
};

struct VelocitySolution {
  Vec2 velocity;
  bool feasible{true};
};

/// One half-plane per neighbour inside the ego's cutoff, ordered by
/// ascending distance (ties keep input order). Overlapping pairs get an
/// escape constraint that separates them within orca_delta.
std::vector<HalfPlane> build_constraints(const AgentState& ego, const ModelParams& params,
                                         std::span<const OrcaNeighbor> neighbors,
                                         double horizon);

/// Closest point to `preferred` inside the speed disc and every half-plane.
/// When the intersection is empty, returns the velocity minimising the
/// largest violation and flags feasible = false.
VelocitySolution solve_velocity(std::span<const HalfPlane> constraints, Vec2 preferred,
                                double max_speed);

/// ORCA pipeline for an arbitrary ego disc.
OrcaResult orca_step(const AgentState& ego, const ModelParams& params, Vec2 goal,
                     std::span<const OrcaNeighbor> neighbors);

/// ORCA pipeline for human `agent_index`: other humans, the robot when
/// visible, and static obstacles as neighbours.
OrcaResult orca_input(const WorldState& world, std::size_t agent_index);

}  // namespace socnav

#endif  // SOCNAV_ORCA_HPP
