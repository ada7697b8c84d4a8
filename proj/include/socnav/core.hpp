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

#ifndef SOCNAV_CORE_HPP
#define SOCNAV_CORE_HPP

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace socnav {

inline constexpr double kPi = std::numbers::pi;

/// Planar vector. Units are carried by context (m, m/s, N).
struct Vec2 {
  double x{0.0};
  double y{0.0};

  constexpr Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
  constexpr Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
  constexpr Vec2 operator-() const { return {-x, -y}; }
  constexpr Vec2 operator*(double s) const { return {x * s, y * s}; }
  constexpr Vec2 operator/(double s) const { return {x / s, y / s}; }
  constexpr Vec2& operator+=(Vec2 o) {
    x += o.x;
    y += o.y;
    return *this;
  }
  constexpr Vec2& operator-=(Vec2 o) {
    x -= o.x;
    y -= o.y;
    return *this;
  }
  constexpr bool operator==(const Vec2&) const = default;

  double norm() const { return std::hypot(x, y); }
  constexpr double norm_sq() const { return x * x + y * y; }
  bool finite() const { return std::isfinite(x) && std::isfinite(y); }
};

constexpr Vec2 operator*(double s, Vec2 v) { return v * s; }
constexpr double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
/// z-component of the 3D cross product.
constexpr double det(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
/// Counter-clockwise quarter turn.
constexpr Vec2 perp(Vec2 v) { return {-v.y, v.x}; }

/// 2x2 matrix stored by columns.
struct Mat2 {
  Vec2 c0;
  Vec2 c1;

  constexpr Vec2 operator*(Vec2 v) const { return c0 * v.x + c1 * v.y; }
  constexpr Mat2 operator*(const Mat2& o) const { return {(*this) * o.c0, (*this) * o.c1}; }
  constexpr Mat2 transposed() const { return {{c0.x, c1.x}, {c0.y, c1.y}}; }
  constexpr double determinant() const { return det(c0, c1); }
};

/// Rotation by `theta`. Column 0 is the forward unit vector, column 1 the
/// orthogonal (left) one.
Mat2 rotation(double theta);

/// Maps an angle to (-pi, pi]; -pi itself maps to +pi.
double wrap_angle(double a);

/// Max-speed velocity toward `goal`, or zero once within `goal_radius`.
Vec2 desired_velocity(Vec2 position, Vec2 goal, double max_speed, double goal_radius);

struct AgentState {
  Vec2 position;
  Vec2 velocity;
  double heading{0.0};           // rad, (-pi, pi]
  double angular_velocity{0.0};  // rad/s
};

/// Physical and model constants of one agent. Defaults are the standard
/// SFM/HSFM literature values for an adult pedestrian.
struct ModelParams {
  double radius{0.3};          // m
  double mass{80.0};           // kg
  double inertia{0.5 * 80.0 * 0.3 * 0.3};  // kg m^2
  double max_speed{1.0};       // m/s
  double relaxation_time{0.5}; // s
  double repulsion_a{2000.0};  // N
  double repulsion_b{0.08};    // m
  double repulsion_c{120.0};   // N
  double repulsion_d{0.6};     // m
  double compression_k1{1.2e5};  // kg/s^2
  double friction_k2{2.4e5};     // kg/(m s)
  double hsfm_ko{1.0};
  double hsfm_kd{500.0};         // kg/s
  double heading_stiffness_scale{0.3};  // k_lambda in k_theta = I k_lambda |f_d|
  double heading_damping_alpha{3.0};    // alpha in k_omega = I (1+alpha) sqrt(k_lambda |f_d| / alpha)
  double orca_delta{0.25};       // s
  double orca_horizon{5.0};      // s
  double neighbor_cutoff{10.0};  // m

  /// Goal-reached radius; equals the body radius.
  double goal_radius() const { return radius; }

  /// Throws std::invalid_argument naming the first violated invariant.
  void validate() const;
};

/// Parameters with radius and mass set, inertia following 0.5 m r^2.
ModelParams make_params(double radius, double mass, double max_speed);

struct HumanAgent {
  AgentState state;
  ModelParams params;
  Vec2 goal;
  Vec2 start;  // point the human returns to under back-and-forth rules
};

struct RobotAgent {
  AgentState state;
  ModelParams params;
  Vec2 goal;
  Vec2 start;
};

struct Obstacle {
  Vec2 center;
  double radius{0.0};
};

struct WorldState {
  double time{0.0};
  std::vector<HumanAgent> humans;
  RobotAgent robot;
  std::vector<Obstacle> obstacles;
  bool robot_visible{true};
};

/// Coincident agent centres: the pairwise direction is undefined.
class DegenerateGeometry : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace socnav

#endif  // SOCNAV_CORE_HPP
