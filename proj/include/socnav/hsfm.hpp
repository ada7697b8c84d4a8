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

#ifndef SOCNAV_HSFM_HPP
#define SOCNAV_HSFM_HPP

#include <cstddef>

#include "socnav/core.hpp"

namespace socnav {

/// Which force the desired heading follows.
enum class HsfmVariant {
  kDesiredForce,  // standard HSFM
  kTotalForce,    // desired plus repulsive force
};

/// Body-frame forces (forward, orthogonal) and heading torque.
struct BodyInput {
  double forward{0.0};     // N
  double orthogonal{0.0};  // N
  double torque{0.0};      // N m
};

struct HsfmDerivative {
  Vec2 position_rate;       // global frame, m/s
  Vec2 body_velocity_rate;  // body frame, m/s^2
  double heading_rate{0.0};
  double angular_rate{0.0};
};

struct HeadingGains {
  double k_theta{0.0};
  double k_omega{0.0};
};

/// Force-scaled, near critically damped heading gains.
HeadingGains heading_gains(const ModelParams& params, double desired_force_norm);

/// Heading torque for a given desired heading.
double heading_torque(double heading, double angular_velocity, double desired_heading,
                      const HeadingGains& gains);

/// Heading the agent steers toward: angle of f_d (standard) or f_d + sum f_p
/// (modified); the current heading when that force is numerically zero.
double desired_heading(double heading, Vec2 desired, Vec2 repulsive, HsfmVariant variant);

BodyInput hsfm_input(const WorldState& world, std::size_t agent_index, HsfmVariant variant);

/// Same as hsfm_input with the social forces already evaluated.
BodyInput hsfm_input_from_forces(const AgentState& state, const ModelParams& params,
                                 Vec2 desired, Vec2 repulsive, HsfmVariant variant);

HsfmDerivative hsfm_derivative(const AgentState& state, const ModelParams& params,
                               const BodyInput& input);

}  // namespace socnav

#endif  // SOCNAV_HSFM_HPP
