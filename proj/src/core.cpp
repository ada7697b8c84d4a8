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

#include "socnav/core.hpp"

namespace socnav {

Mat2 rotation(double theta) {
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  return {{c, s}, {-s, c}};
}

double wrap_angle(double a) {
  double r = std::remainder(a, 2.0 * kPi);
  if (r <= -kPi) r += 2.0 * kPi;
  return r;
}

Vec2 desired_velocity(Vec2 position, Vec2 goal, double max_speed, double goal_radius) {
  const Vec2 to_goal = goal - position;
  const double dist = to_goal.norm();
  if (dist <= goal_radius || dist == 0.0) return {};
  return to_goal * (max_speed / dist);
}

void ModelParams::validate() const {
  auto require = [](bool ok, const char* what) {
    if (!ok) throw std::invalid_argument(std::string("invalid model params: ") + what);
  };
  require(radius > 0.0, "radius must be > 0");
  require(mass > 0.0, "mass must be > 0");
  require(inertia > 0.0, "inertia must be > 0");
  require(max_speed > 0.0, "max_speed must be > 0");
  require(relaxation_time > 0.0, "relaxation_time must be > 0");
  require(repulsion_b > 0.0, "repulsion_b must be > 0");
  require(repulsion_d > 0.0, "repulsion_d must be > 0");
  require(orca_delta > 0.0, "orca_delta must be > 0");
  require(orca_horizon > 0.0, "orca_horizon must be > 0");
  require(neighbor_cutoff > 0.0, "neighbor_cutoff must be > 0");
  require(heading_damping_alpha > 0.0, "heading_damping_alpha must be > 0");
}

ModelParams make_params(double radius, double mass, double max_speed) {
  ModelParams p;
  p.radius = radius;
  p.mass = mass;
  p.inertia = 0.5 * mass * radius * radius;
  p.max_speed = max_speed;
  return p;
}

}  // namespace socnav
