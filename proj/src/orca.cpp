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

#include "socnav/orca.hpp"

#include <algorithm>
#include <numeric>

namespace socnav {
namespace {

constexpr double kParallel = 1e-12;
constexpr double kTieBreakAngle = 1e-6;

// Boundary line in point/direction form; feasible side is to the left.
struct Line {
  Vec2 point;
  Vec2 direction;
};

Line to_line(const HalfPlane& h) { return {h.point, h.direction()}; }

HalfPlane from_line(Vec2 point, Vec2 direction) { return {point, perp(direction)}; }

Vec2 rotate(Vec2 v, double a) {
  const double c = std::cos(a);
  const double s = std::sin(a);
  return {c * v.x - s * v.y, s * v.x + c * v.y};
}

// Optimum on line `line_no` subject to lines [0, line_no) and the disc.
bool solve_on_line(std::span<const Line> lines, std::size_t line_no, double radius, Vec2 opt,
                   bool direction_opt, Vec2& result) {
  const Line& line = lines[line_no];
  const double dot_product = dot(line.point, line.direction);
  const double discriminant = dot_product * dot_product + radius * radius - line.point.norm_sq();
  if (discriminant < 0.0) return false;

  const double sqrt_disc = std::sqrt(discriminant);
  double t_left = -dot_product - sqrt_disc;
  double t_right = -dot_product + sqrt_disc;

  for (std::size_t i = 0; i < line_no; ++i) {
    const double denominator = det(line.direction, lines[i].direction);
    const double numerator = det(lines[i].direction, line.point - lines[i].point);
    if (std::abs(denominator) <= kParallel) {
      if (numerator < 0.0) return false;
      continue;
    }
    const double t = numerator / denominator;
    if (denominator >= 0.0) {
      t_right = std::min(t_right, t);
    } else {
      t_left = std::max(t_left, t);
    }
    if (t_left > t_right) return false;
  }

  if (direction_opt) {
    result = dot(opt, line.direction) > 0.0 ? line.point + line.direction * t_right
                                            : line.point + line.direction * t_left;
  } else {
    const double t = std::clamp(dot(line.direction, opt - line.point), t_left, t_right);
    result = line.point + line.direction * t;
  }
  return true;
}

// Incremental LP; returns the index of the first line that made the problem
// infeasible, or lines.size() on success.
std::size_t solve_incremental(std::span<const Line> lines, double radius, Vec2 opt,
                              bool direction_opt, Vec2& result) {
  if (direction_opt) {
    result = opt * radius;
  } else if (opt.norm_sq() > radius * radius) {
    result = opt * (radius / opt.norm());
  } else {
    result = opt;
  }
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (det(lines[i].direction, lines[i].point - result) > 0.0) {
      const Vec2 previous = result;
      if (!solve_on_line(lines, i, radius, opt, direction_opt, result)) {
        result = previous;
        return i;
      }
    }
  }
  return lines.size();
}

// Minimises the largest violation over lines [begin, n) starting from the
// partial solution of solve_incremental.
void solve_least_violation(std::span<const Line> lines, std::size_t begin, double radius,
                           Vec2& result) {
  double distance = 0.0;
  std::vector<Line> projected;
  for (std::size_t i = begin; i < lines.size(); ++i) {
    if (det(lines[i].direction, lines[i].point - result) <= distance) continue;
    projected.clear();
    for (std::size_t j = 0; j < i; ++j) {
      Line line;
      const double determinant = det(lines[i].direction, lines[j].direction);
      if (std::abs(determinant) <= kParallel) {
        if (dot(lines[i].direction, lines[j].direction) > 0.0) continue;
        line.point = (lines[i].point + lines[j].point) * 0.5;
      } else {
        line.point = lines[i].point +
                     lines[i].direction *
                         (det(lines[j].direction, lines[i].point - lines[j].point) / determinant);
      }
      const Vec2 bisector = lines[j].direction - lines[i].direction;
      line.direction = bisector / bisector.norm();
      projected.push_back(line);
    }
    const Vec2 previous = result;
    if (solve_incremental(projected, radius, perp(lines[i].direction), true, result) <
        projected.size()) {
      result = previous;
    }
    distance = det(lines[i].direction, lines[i].point - result);
  }
}

}  // namespace

std::vector<HalfPlane> build_constraints(const AgentState& ego, const ModelParams& params,
                                         std::span<const OrcaNeighbor> neighbors,
                                         double horizon) {
  std::vector<std::size_t> order;
  std::vector<double> dist;
  order.reserve(neighbors.size());
  dist.resize(neighbors.size());
  for (std::size_t j = 0; j < neighbors.size(); ++j) {
    dist[j] = (neighbors[j].position - ego.position).norm();
    if (dist[j] - neighbors[j].radius <= params.neighbor_cutoff) order.push_back(j);
  }
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return dist[a] < dist[b]; });

  const double inv_horizon = 1.0 / horizon;
  const double inv_escape = 1.0 / params.orca_delta;
  std::vector<HalfPlane> planes;
  planes.reserve(order.size());
  for (std::size_t j : order) {
    const OrcaNeighbor& other = neighbors[j];
    const Vec2 rel_pos = other.position - ego.position;
    const Vec2 rel_vel = ego.velocity - other.velocity;
    const double dist_sq = rel_pos.norm_sq();
    const double combined = params.radius + other.radius;
    const double combined_sq = combined * combined;

    Vec2 direction;
    Vec2 u;
    bool on_axis = false;
    if (dist_sq > combined_sq) {
      const Vec2 w = rel_vel - rel_pos * inv_horizon;
      const double w_len_sq = w.norm_sq();
      const double dot1 = dot(w, rel_pos);
      if (dot1 < 0.0 && dot1 * dot1 > combined_sq * w_len_sq) {
        // Closest boundary point lies on the truncation circle.
        const double w_len = std::sqrt(w_len_sq);
        const Vec2 unit_w = w / w_len;
        direction = {unit_w.y, -unit_w.x};
        u = unit_w * (combined * inv_horizon - w_len);
        on_axis = det(rel_pos, w) == 0.0;
      } else {
        // Project on a cone leg; on the axis itself the right leg is taken.
        const double leg = std::sqrt(dist_sq - combined_sq);
        if (det(rel_pos, w) > 0.0) {
          direction = Vec2{rel_pos.x * leg - rel_pos.y * combined,
                           rel_pos.x * combined + rel_pos.y * leg} /
                      dist_sq;
        } else {
          direction = -Vec2{rel_pos.x * leg + rel_pos.y * combined,
                            -rel_pos.x * combined + rel_pos.y * leg} /
                      dist_sq;
        }
        u = direction * dot(rel_vel, direction) - rel_vel;
      }
    } else {
      // Already overlapping: separate within the control period.
      const Vec2 w = rel_vel - rel_pos * inv_escape;
      const double w_len = w.norm();
      const Vec2 unit_w = w_len > 0.0 ? w / w_len : -rel_pos / std::sqrt(dist_sq);
      direction = {unit_w.y, -unit_w.x};
      u = unit_w * (combined * inv_escape - w_len);
      on_axis = det(rel_pos, w) == 0.0;
    }
    if (on_axis) direction = rotate(direction, kTieBreakAngle);
    const double share = other.reciprocal ? 0.5 : 1.0;
    planes.push_back(from_line(ego.velocity + u * share, direction));
  }
  return planes;
}

VelocitySolution solve_velocity(std::span<const HalfPlane> constraints, Vec2 preferred,
                                double max_speed) {
  std::vector<Line> lines;
  lines.reserve(constraints.size());
  for (const HalfPlane& h : constraints) lines.push_back(to_line(h));
  VelocitySolution out;
  const std::size_t failed = solve_incremental(lines, max_speed, preferred, false, out.velocity);
  if (failed < lines.size()) {
    out.feasible = false;
    solve_least_violation(lines, failed, max_speed, out.velocity);
  }
  return out;
}

OrcaResult orca_step(const AgentState& ego, const ModelParams& params, Vec2 goal,
                     std::span<const OrcaNeighbor> neighbors) {
  const Vec2 preferred =
      desired_velocity(ego.position, goal, params.max_speed, params.goal_radius());
  const std::vector<HalfPlane> planes =
      build_constraints(ego, params, neighbors, params.orca_horizon);
  const VelocitySolution sol = solve_velocity(planes, preferred, params.max_speed);
  return {sol.velocity, (sol.velocity - ego.velocity) / params.orca_delta, sol.feasible};
}

OrcaResult orca_input(const WorldState& world, std::size_t agent_index) {
  const HumanAgent& self = world.humans.at(agent_index);
  std::vector<OrcaNeighbor> neighbors;
  neighbors.reserve(world.humans.size() + world.obstacles.size());
  for (std::size_t j = 0; j < world.humans.size(); ++j) {
    if (j == agent_index) continue;
    const HumanAgent& h = world.humans[j];
    neighbors.push_back({h.state.position, h.state.velocity, h.params.radius, true});
  }
  if (world.robot_visible) {
    const RobotAgent& r = world.robot;
    neighbors.push_back({r.state.position, r.state.velocity, r.params.radius, true});
  }
  for (const Obstacle& o : world.obstacles) {
    neighbors.push_back({o.center, Vec2{}, o.radius, false});
  }
  return orca_step(self.state, self.params, self.goal, neighbors);
}

}  // namespace socnav
