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

#include "socnav/hsfm.hpp"

#include "socnav/sfm.hpp"

namespace socnav {
namespace {

constexpr double kZeroForce = 1e-9;

}  // namespace

HeadingGains heading_gains(const ModelParams& params, double desired_force_norm) {
  const double k_lambda = params.heading_stiffness_scale;
  const double alpha = params.heading_damping_alpha;
  const double stiffness = k_lambda * desired_force_norm;
  return {params.inertia * stiffness,
          params.inertia * (1.0 + alpha) * std::sqrt(stiffness / alpha)};
}

double heading_torque(double heading, double angular_velocity, double desired_heading,
                      const HeadingGains& gains) {
  return -gains.k_theta * wrap_angle(heading - desired_heading) -
         gains.k_omega * angular_velocity;
}

double desired_heading(double heading, Vec2 desired, Vec2 repulsive, HsfmVariant variant) {
  const Vec2 steer = variant == HsfmVariant::kTotalForce ? desired + repulsive : desired;
  if (steer.norm() < kZeroForce) return heading;
  return std::atan2(steer.y, steer.x);
}

BodyInput hsfm_input_from_forces(const AgentState& state, const ModelParams& params,
                                 Vec2 desired, Vec2 repulsive, HsfmVariant variant) {
  const Mat2 r = rotation(state.heading);
  const double v_orth = dot(state.velocity, r.c1);
  BodyInput in;
  in.forward = dot(desired + repulsive, r.c0);
  in.orthogonal = params.hsfm_ko * dot(repulsive, r.c1) - params.hsfm_kd * v_orth;
  const double theta_d = desired_heading(state.heading, desired, repulsive, variant);
  in.torque = heading_torque(state.heading, state.angular_velocity, theta_d,
                             heading_gains(params, desired.norm()));
  return in;
}

BodyInput hsfm_input(const WorldState& world, std::size_t agent_index, HsfmVariant variant) {
  const HumanAgent& self = world.humans.at(agent_index);
  return hsfm_input_from_forces(self.state, self.params,
                                desired_force(self.state, self.params, self.goal),
                                repulsion_total(world, agent_index), variant);
}

HsfmDerivative hsfm_derivative(const AgentState& state, const ModelParams& params,
                               const BodyInput& input) {
  const Mat2 r = rotation(state.heading);
  const Vec2 body_velocity = r.transposed() * state.velocity;
  HsfmDerivative d;
  d.position_rate = r * body_velocity;
  d.body_velocity_rate = Vec2{input.forward, input.orthogonal} / params.mass;
  d.heading_rate = state.angular_velocity;
  d.angular_rate = input.torque / params.inertia;
  return d;
}

}  // namespace socnav
