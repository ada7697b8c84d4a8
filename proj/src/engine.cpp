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

#include "socnav/engine.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <limits>

#include "socnav/hsfm.hpp"
#include "socnav/orca.hpp"
#include "socnav/sfm.hpp"

namespace socnav {
namespace {

bool iequals(std::string_view a, std::string_view b) {
  return a.size() == b.size() &&
         std::equal(a.begin(), a.end(), b.begin(), [](char x, char y) {
           return std::tolower(static_cast<unsigned char>(x)) ==
                  std::tolower(static_cast<unsigned char>(y));
         });
}

// Exact solution of x' = (target - x) * rate over dt.
double relax(double x, double target, double decay) { return target + (x - target) * decay; }
Vec2 relax(Vec2 x, Vec2 target, double decay) { return target + (x - target) * decay; }

Vec2 clamp_speed(Vec2 v, double max_speed) {
  const double s = v.norm();
  return s > max_speed ? v * (max_speed / s) : v;
}

// ORCA/SFM humans carry heading as the direction of travel.
void track_heading(AgentState& s, double previous_heading, double dt) {
  if (s.velocity.x != 0.0 || s.velocity.y != 0.0) {
    s.heading = wrap_angle(std::atan2(s.velocity.y, s.velocity.x));
  }
  s.angular_velocity = wrap_angle(s.heading - previous_heading) / dt;
}

void check_finite(const AgentState& s, std::size_t index) {
  if (!s.position.finite() || !s.velocity.finite() || !std::isfinite(s.heading) ||
      !std::isfinite(s.angular_velocity)) {
    throw EngineFault("non-finite state for human " + std::to_string(index) +
                      " after integration step");
  }
}

AgentState step_orca(const WorldState& world, std::size_t i, double dt) {
  const HumanAgent& h = world.humans[i];
  const OrcaResult res = orca_input(world, i);
  AgentState next = h.state;
  next.position = h.state.position + h.state.velocity * dt;
  // v' = (v_new - v) / delta held over dt.
  next.velocity = clamp_speed(
      relax(h.state.velocity, res.new_velocity, std::exp(-dt / h.params.orca_delta)),
      h.params.max_speed);
  track_heading(next, h.state.heading, dt);
  return next;
}

AgentState step_sfm(const WorldState& world, std::size_t i, double dt) {
  const HumanAgent& h = world.humans[i];
  const ModelParams& p = h.params;
  const Vec2 vd = desired_velocity(h.state.position, h.goal, p.max_speed, p.goal_radius());
  const Vec2 repulsion = repulsion_total(world, i);
  // m v' = m (v_d - v) / tau + f_p, with f_p frozen over the step.
  const Vec2 equilibrium = vd + repulsion * (p.relaxation_time / p.mass);
  AgentState next = h.state;
  next.position = h.state.position + h.state.velocity * dt;
  next.velocity = clamp_speed(
      relax(h.state.velocity, equilibrium, std::exp(-dt / p.relaxation_time)), p.max_speed);
  track_heading(next, h.state.heading, dt);
  return next;
}

AgentState step_hsfm(const WorldState& world, std::size_t i, double dt, HsfmVariant variant) {
  const HumanAgent& h = world.humans[i];
  const ModelParams& p = h.params;
  const Vec2 desired = desired_force(h.state, p, h.goal);
  const Vec2 repulsion = repulsion_total(world, i);
  const BodyInput input = hsfm_input_from_forces(h.state, p, desired, repulsion, variant);
  const HsfmDerivative d = hsfm_derivative(h.state, p, input);

  const Mat2 r = rotation(h.state.heading);
  const Vec2 body_v = r.transposed() * h.state.velocity;
  const Vec2 vd = desired_velocity(h.state.position, h.goal, p.max_speed, p.goal_radius());

  // Forward: m v_f' = m (v_d . r_f - v_f) / tau + f_p . r_f.
  const double forward_eq = dot(vd, r.c0) + dot(repulsion, r.c0) * (p.relaxation_time / p.mass);
  double forward = relax(body_v.x, forward_eq, std::exp(-dt / p.relaxation_time));
  // Sideways: m v_o' = k_o f_p . r_o - k_d v_o.
  double orthogonal = 0.0;
  if (p.hsfm_kd > 0.0) {
    const double orth_eq = p.hsfm_ko * dot(repulsion, r.c1) / p.hsfm_kd;
    orthogonal = relax(body_v.y, orth_eq, std::exp(-dt * p.hsfm_kd / p.mass));
  } else {
    orthogonal = body_v.y + d.body_velocity_rate.y * dt;
  }

  AgentState next = h.state;
  next.position = h.state.position + d.position_rate * dt;
  next.heading = wrap_angle(h.state.heading + d.heading_rate * dt);
  next.angular_velocity = h.state.angular_velocity + d.angular_rate * dt;
  const Vec2 body_next = clamp_speed({forward, orthogonal}, p.max_speed);
  next.velocity = rotation(next.heading) * body_next;
  return next;
}

}  // namespace

std::string_view to_string(MotionModel model) {
  switch (model) {
    case MotionModel::kOrca:
      return "ORCA";
    case MotionModel::kSfm:
      return "SFM";
    case MotionModel::kHsfmStandard:
      return "HSFM-standard";
    case MotionModel::kHsfmModified:
      return "HSFM-modified";
  }
  return "?";
}

std::optional<MotionModel> parse_motion_model(std::string_view name) {
  if (iequals(name, "ORCA")) return MotionModel::kOrca;
  if (iequals(name, "SFM")) return MotionModel::kSfm;
  if (iequals(name, "HSFM") || iequals(name, "HSFM-modified")) return MotionModel::kHsfmModified;
  if (iequals(name, "HSFM-standard")) return MotionModel::kHsfmStandard;
  return std::nullopt;
}

std::string_view to_string(Outcome outcome) {
  switch (outcome) {
    case Outcome::kSuccess:
      return "Success";
    case Outcome::kTimeout:
      return "Timeout";
    case Outcome::kCollision:
      return "Collision";
    case Outcome::kAborted:
      return "Aborted";
  }
  return "?";
}

std::optional<Outcome> parse_outcome(std::string_view name) {
  for (Outcome o : {Outcome::kSuccess, Outcome::kTimeout, Outcome::kCollision, Outcome::kAborted}) {
    if (to_string(o) == name) return o;
  }
  return std::nullopt;
}

void EngineConfig::validate() const {
  auto require = [](bool ok, const char* what) {
    if (!ok) throw std::invalid_argument(std::string("invalid engine config: ") + what);
  };
  require(human_dt > 0.0, "human_dt must be > 0");
  require(robot_dt > 0.0, "robot_dt must be > 0");
  const double ratio = robot_dt / human_dt;
  require(std::abs(ratio - std::round(ratio)) < 1e-9 * ratio && std::round(ratio) >= 1.0,
          "robot_dt must be an integer multiple of human_dt");
  require(time_limit > 0.0, "time_limit must be > 0");
  require(discount > 0.0 && discount < 1.0, "discount must lie in (0, 1)");
  require(discomfort_distance >= 0.0, "discomfort_distance must be >= 0");
  require(noise_pct >= 0.0, "noise_pct must be >= 0");
}

int EngineConfig::substeps() const {
  return static_cast<int>(std::lround(robot_dt / human_dt));
}

int EngineConfig::max_decisions() const {
  return static_cast<int>(std::ceil(time_limit / robot_dt - 1e-9));
}

WorldState step_humans(const WorldState& world, MotionModel model, double dt) {
  WorldState next = world;
  for (std::size_t i = 0; i < world.humans.size(); ++i) {
    AgentState s;
    switch (model) {
      case MotionModel::kOrca:
        s = step_orca(world, i, dt);
        break;
      case MotionModel::kSfm:
        s = step_sfm(world, i, dt);
        break;
      case MotionModel::kHsfmStandard:
        s = step_hsfm(world, i, dt, HsfmVariant::kDesiredForce);
        break;
      case MotionModel::kHsfmModified:
        s = step_hsfm(world, i, dt, HsfmVariant::kTotalForce);
        break;
    }
    check_finite(s, i);
    next.humans[i].state = s;
  }
  next.time = world.time + dt;
  return next;
}

void advance_humans(WorldState& world, MotionModel model, double dt, const RespawnRule& rule,
                    Rng& rng) {
  world = step_humans(world, model, dt);
  for (std::size_t i = 0; i < world.humans.size(); ++i) {
    if (needs_respawn(world, rule, i)) respawn(world, rule, i, rng);
  }
}

Observation observe(const WorldState& world, double noise_pct, Rng& rng) {
  Observation obs;
  obs.time = world.time;
  const RobotAgent& robot = world.robot;
  obs.robot = {robot.state.position, robot.state.velocity, robot.goal, robot.params.radius,
               robot.params.max_speed};
  obs.humans.reserve(world.humans.size());
  for (const HumanAgent& h : world.humans) {
    // Noise on the relative vector equals noise on the absolute one because
    // the robot's own state is exact; this keeps noise_pct = 0 bit-exact.
    const double sigma_p = noise_pct * (h.state.position - robot.state.position).norm();
    const double sigma_v = noise_pct * (h.state.velocity - robot.state.velocity).norm();
    const Vec2 noise_p{sigma_p * standard_normal(rng), sigma_p * standard_normal(rng)};
    const Vec2 noise_v{sigma_v * standard_normal(rng), sigma_v * standard_normal(rng)};
    obs.humans.push_back({h.state.position + noise_p, h.state.velocity + noise_v, h.state.heading,
                          h.state.angular_velocity, h.params.radius});
  }
  obs.obstacles = world.obstacles;
  return obs;
}

EpisodeLog run_episode(const ScenarioSpec& scenario, MotionModel model, Policy& policy,
                       const EngineConfig& config) {
  config.validate();
  EpisodeLog log;
  log.config = config;
  log.scenario = scenario;
  log.model = std::string(to_string(model));
  log.policy = policy.name();
  log.realized = scenario.family;
  log.robot_radius = scenario.robot_params.radius;
  log.robot_max_speed = scenario.robot_params.max_speed;

  GeneratedScenario gen;
  try {
    gen = generate(scenario, stream_seed(config.seed, "scenario"));
  } catch (const GenerationError& e) {
    log.outcome = Outcome::kAborted;
    log.abort_reason = e.what();
    return log;
  }
  WorldState world = std::move(gen.world);
  world.robot_visible = config.robot_visible;
  log.realized = gen.realized;
  log.robot_start = world.robot.start;
  log.robot_goal = world.robot.goal;
  for (const HumanAgent& h : world.humans) log.human_radii.push_back(h.params.radius);
  log.obstacles = world.obstacles;
  log.robot_final = world.robot.state;

  Rng respawn_rng(stream_seed(config.seed, "respawn"));
  Rng noise_rng(stream_seed(config.seed, "noise"));
  const int substeps = config.substeps();
  const double r_robot = world.robot.params.radius;
  const double v_max = world.robot.params.max_speed;
  const RewardParams reward_params{config.discomfort_distance, config.robot_dt};

  auto abort = [&](const std::string& reason) {
    log.outcome = Outcome::kAborted;
    log.abort_reason = reason;
    log.robot_final = world.robot.state;
    log.final_time = world.time;
    policy.end_episode(std::string(to_string(log.outcome)));
    return log;
  };

  try {
    policy.begin_episode({config.seed, log.model, std::string(to_string(gen.realized))});
  } catch (const PolicyFailure& e) {
    return abort(e.what());
  }

  log.outcome = Outcome::kTimeout;
  const int decisions = config.max_decisions();
  bool finished = false;
  for (int k = 0; k < decisions && !finished; ++k) {
    const double t0 = k * config.robot_dt;
    world.time = t0;
    const Observation obs = observe(world, config.noise_pct, noise_rng);
    RobotAction action;
    try {
      action = policy.act(obs);
    } catch (const PolicyFailure& e) {
      return abort(e.what());
    }
    if (!action.velocity.finite()) return abort("policy returned a non-finite action");
    action = clamp_action(action, v_max);

    StepRecord rec;
    rec.step = k;
    rec.time = t0;
    rec.robot = world.robot.state;
    rec.action = action.velocity;
    rec.humans.reserve(world.humans.size());
    for (const HumanAgent& h : world.humans) rec.humans.push_back(h.state);
    rec.d_min = std::numeric_limits<double>::infinity();
    for (const HumanAgent& h : world.humans) {
      rec.d_min = std::min(rec.d_min, d_min(world.robot.state.position, action.velocity, r_robot,
                                            h.state.position, h.state.velocity, h.params.radius,
                                            config.robot_dt));
    }

    // Zero-order hold of the velocity command over the decision interval.
    const Vec2 p0 = world.robot.state.position;
    world.robot.state.velocity = action.velocity;
    if (action.velocity.x != 0.0 || action.velocity.y != 0.0) {
      world.robot.state.heading = std::atan2(action.velocity.y, action.velocity.x);
    }
    bool collided = false;
    double actual_gap = std::numeric_limits<double>::infinity();
    int s = 1;
    for (; s <= substeps; ++s) {
      advance_humans(world, model, config.human_dt, gen.rule, respawn_rng);
      world.robot.state.position =
          s == substeps ? p0 + action.velocity * config.robot_dt
                        : p0 + action.velocity * (s * config.human_dt);
      const Vec2 pr = world.robot.state.position;
      for (std::size_t i = 0; i < world.humans.size(); ++i) {
        const HumanAgent& h = world.humans[i];
        const double gap = (h.state.position - pr).norm() - r_robot - h.params.radius;
        actual_gap = std::min(actual_gap, gap);
        if (gap < 0.0) collided = true;
        for (std::size_t j = i + 1; j < world.humans.size(); ++j) {
          const HumanAgent& o = world.humans[j];
          const double rr = h.params.radius + o.params.radius;
          if ((h.state.position - o.state.position).norm_sq() < rr * rr) ++log.human_overlaps;
        }
      }
      for (const Obstacle& o : world.obstacles) {
        if ((o.center - pr).norm() < o.radius + r_robot) {
          ++log.robot_obstacle_overlaps;
          break;
        }
      }
      if (collided) break;
    }

    const double goal_distance = (world.robot.state.position - world.robot.goal).norm();
    // A contact the constant-velocity prediction missed still costs the
    // collision penalty.
    const double gap_for_reward = collided ? std::min(rec.d_min, actual_gap) : rec.d_min;
    rec.reward = reward(gap_for_reward, goal_distance, r_robot, reward_params);
    log.records.push_back(std::move(rec));

    if (collided) {
      log.outcome = Outcome::kCollision;
      world.time = t0 + s * config.human_dt;
      finished = true;
    } else if (goal_distance < r_robot) {
      log.outcome = Outcome::kSuccess;
      log.time_to_goal = (k + 1) * config.robot_dt;
      world.time = *log.time_to_goal;
      finished = true;
    } else {
      world.time = (k + 1) * config.robot_dt;
    }
  }
  log.robot_final = world.robot.state;
  log.final_time = world.time;
  policy.end_episode(std::string(to_string(log.outcome)));
  return log;
}

}  // namespace socnav
