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

#include "socnav/log_io.hpp"

#include <unistd.h>

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace socnav {
namespace {

using nlohmann::json;

json vec(Vec2 v) { return json::array({v.x, v.y}); }

Vec2 to_vec(const json& j) {
  if (!j.is_array() || j.size() != 2) throw std::invalid_argument("expected [x, y]");
  return {j.at(0).get<double>(), j.at(1).get<double>()};
}

json state_row(const AgentState& s) {
  return json::array({s.position.x, s.position.y, s.velocity.x, s.velocity.y, s.heading,
                      s.angular_velocity});
}

AgentState to_state(const json& j) {
  if (!j.is_array() || j.size() != 6) {
    throw std::invalid_argument("expected [px, py, vx, vy, theta, omega]");
  }
  AgentState s;
  s.position = {j.at(0).get<double>(), j.at(1).get<double>()};
  s.velocity = {j.at(2).get<double>(), j.at(3).get<double>()};
  s.heading = j.at(4).get<double>();
  s.angular_velocity = j.at(5).get<double>();
  return s;
}

json params_json(const ModelParams& p) {
  return {{"radius", p.radius},
          {"mass", p.mass},
          {"inertia", p.inertia},
          {"max_speed", p.max_speed},
          {"relaxation_time", p.relaxation_time},
          {"repulsion_a", p.repulsion_a},
          {"repulsion_b", p.repulsion_b},
          {"repulsion_c", p.repulsion_c},
          {"repulsion_d", p.repulsion_d},
          {"compression_k1", p.compression_k1},
          {"friction_k2", p.friction_k2},
          {"hsfm_ko", p.hsfm_ko},
          {"hsfm_kd", p.hsfm_kd},
          {"heading_stiffness_scale", p.heading_stiffness_scale},
          {"heading_damping_alpha", p.heading_damping_alpha},
          {"orca_delta", p.orca_delta},
          {"orca_horizon", p.orca_horizon},
          {"neighbor_cutoff", p.neighbor_cutoff}};
}

ModelParams to_params(const json& j) {
  ModelParams p;
  p.radius = j.at("radius").get<double>();
  p.mass = j.at("mass").get<double>();
  p.inertia = j.at("inertia").get<double>();
  p.max_speed = j.at("max_speed").get<double>();
  p.relaxation_time = j.at("relaxation_time").get<double>();
  p.repulsion_a = j.at("repulsion_a").get<double>();
  p.repulsion_b = j.at("repulsion_b").get<double>();
  p.repulsion_c = j.at("repulsion_c").get<double>();
  p.repulsion_d = j.at("repulsion_d").get<double>();
  p.compression_k1 = j.at("compression_k1").get<double>();
  p.friction_k2 = j.at("friction_k2").get<double>();
  p.hsfm_ko = j.at("hsfm_ko").get<double>();
  p.hsfm_kd = j.at("hsfm_kd").get<double>();
  p.heading_stiffness_scale = j.at("heading_stiffness_scale").get<double>();
  p.heading_damping_alpha = j.at("heading_damping_alpha").get<double>();
  p.orca_delta = j.at("orca_delta").get<double>();
  p.orca_horizon = j.at("orca_horizon").get<double>();
  p.neighbor_cutoff = j.at("neighbor_cutoff").get<double>();
  return p;
}

json scenario_json(const ScenarioSpec& s) {
  return {{"family", std::string(to_string(s.family))},
          {"n_humans", s.n_humans},
          {"circle_radius", s.circle_radius},
          {"lane_length", s.lane_length},
          {"lane_width", s.lane_width},
          {"square_side", s.square_side},
          {"crowd_radius", s.crowd_radius},
          {"obstacle_count", s.obstacle_count},
          {"obstacle_area_min", s.obstacle_area_min},
          {"obstacle_area_max", s.obstacle_area_max},
          {"obstacle_clearance", s.obstacle_clearance},
          {"min_spawn_separation", s.min_spawn_separation},
          {"robot_start_offset", s.robot_start_offset},
          {"human_params", params_json(s.human_params)},
          {"robot_params", params_json(s.robot_params)}};
}

ScenarioFamily to_family(const json& j) {
  const auto f = parse_scenario_family(j.get<std::string>());
  if (!f) throw std::invalid_argument("unknown scenario family " + j.dump());
  return *f;
}

ScenarioSpec to_scenario(const json& j) {
  ScenarioSpec s;
  s.family = to_family(j.at("family"));
  s.n_humans = j.at("n_humans").get<int>();
  s.circle_radius = j.at("circle_radius").get<double>();
  s.lane_length = j.at("lane_length").get<double>();
  s.lane_width = j.at("lane_width").get<double>();
  s.square_side = j.at("square_side").get<double>();
  s.crowd_radius = j.at("crowd_radius").get<double>();
  s.obstacle_count = j.at("obstacle_count").get<int>();
  s.obstacle_area_min = j.at("obstacle_area_min").get<double>();
  s.obstacle_area_max = j.at("obstacle_area_max").get<double>();
  s.obstacle_clearance = j.at("obstacle_clearance").get<double>();
  s.min_spawn_separation = j.at("min_spawn_separation").get<double>();
  s.robot_start_offset = j.at("robot_start_offset").get<double>();
  s.human_params = to_params(j.at("human_params"));
  s.robot_params = to_params(j.at("robot_params"));
  return s;
}

json config_json(const EngineConfig& c) {
  return {{"human_dt", c.human_dt},
          {"robot_dt", c.robot_dt},
          {"time_limit", c.time_limit},
          {"discount", c.discount},
          {"discomfort_distance", c.discomfort_distance},
          {"robot_visible", c.robot_visible},
          {"noise_pct", c.noise_pct},
          {"seed", c.seed}};
}

EngineConfig to_config(const json& j) {
  EngineConfig c;
  c.human_dt = j.at("human_dt").get<double>();
  c.robot_dt = j.at("robot_dt").get<double>();
  c.time_limit = j.at("time_limit").get<double>();
  c.discount = j.at("discount").get<double>();
  c.discomfort_distance = j.at("discomfort_distance").get<double>();
  c.robot_visible = j.at("robot_visible").get<bool>();
  c.noise_pct = j.at("noise_pct").get<double>();
  c.seed = j.at("seed").get<std::uint64_t>();
  return c;
}

json header_json(const EpisodeLog& log) {
  json obstacles = json::array();
  for (const Obstacle& o : log.obstacles) obstacles.push_back({o.center.x, o.center.y, o.radius});
  return {{"type", "header"},
          {"schema", kLogSchema},
          {"units",
           {{"length", "m"},
            {"time", "s"},
            {"velocity", "m/s"},
            {"angle", "rad"},
            {"angular_velocity", "rad/s"},
            {"robot_row", "px, py, vx, vy, theta, omega"},
            {"human_row", "px, py, vx, vy, theta, omega"},
            {"step_states", "taken at the decision instant, before the action is applied"},
            {"d_min", "predicted minimum surface gap over the decision interval, m"}}},
          {"episode",
           {{"seed", log.config.seed},
            {"scenario", std::string(to_string(log.scenario.family))},
            {"realized", std::string(to_string(log.realized))},
            {"model", log.model},
            {"policy", log.policy},
            {"n_humans", log.scenario.n_humans},
            {"noise_pct", log.config.noise_pct},
            {"cell", log.cell}}},
          {"config", config_json(log.config)},
          {"scenario", scenario_json(log.scenario)},
          {"robot",
           {{"radius", log.robot_radius},
            {"max_speed", log.robot_max_speed},
            {"start", vec(log.robot_start)},
            {"goal", vec(log.robot_goal)}}},
          {"human_radii", log.human_radii},
          {"obstacles", std::move(obstacles)}};
}

json step_json(const StepRecord& r) {
  json humans = json::array();
  for (const AgentState& h : r.humans) humans.push_back(state_row(h));
  json j{{"type", "step"},
         {"k", r.step},
         {"t", r.time},
         {"robot", state_row(r.robot)},
         {"action", vec(r.action)},
         {"humans", std::move(humans)},
         {"reward", r.reward}};
  j["d_min"] = std::isfinite(r.d_min) ? json(r.d_min) : json(nullptr);
  return j;
}

json footer_json(const EpisodeLog& log) {
  json j{{"type", "footer"},
         {"outcome", std::string(to_string(log.outcome))},
         {"steps", log.records.size()},
         {"final_time", log.final_time},
         {"robot_final", state_row(log.robot_final)},
         {"human_overlaps", log.human_overlaps},
         {"robot_obstacle_overlaps", log.robot_obstacle_overlaps},
         {"abort_reason", log.abort_reason}};
  j["time_to_goal"] = log.time_to_goal ? json(*log.time_to_goal) : json(nullptr);
  return j;
}

void read_header(const json& j, EpisodeLog& log) {
  if (j.at("schema").get<int>() != kLogSchema) {
    throw std::invalid_argument("unsupported schema " + j.at("schema").dump());
  }
  const json& ep = j.at("episode");
  log.config = to_config(j.at("config"));
  log.scenario = to_scenario(j.at("scenario"));
  log.realized = to_family(ep.at("realized"));
  log.model = ep.at("model").get<std::string>();
  log.policy = ep.at("policy").get<std::string>();
  log.cell = ep.at("cell").get<std::string>();
  const json& robot = j.at("robot");
  log.robot_radius = robot.at("radius").get<double>();
  log.robot_max_speed = robot.at("max_speed").get<double>();
  log.robot_start = to_vec(robot.at("start"));
  log.robot_goal = to_vec(robot.at("goal"));
  log.human_radii = j.at("human_radii").get<std::vector<double>>();
  for (const json& o : j.at("obstacles")) {
    if (!o.is_array() || o.size() != 3) throw std::invalid_argument("expected [x, y, radius]");
    log.obstacles.push_back({{o.at(0).get<double>(), o.at(1).get<double>()},
                             o.at(2).get<double>()});
  }
}

StepRecord read_step(const json& j, std::size_t n_humans) {
  StepRecord r;
  r.step = j.at("k").get<int>();
  r.time = j.at("t").get<double>();
  r.robot = to_state(j.at("robot"));
  r.action = to_vec(j.at("action"));
  const json& humans = j.at("humans");
  if (!humans.is_array() || humans.size() != n_humans) {
    throw std::invalid_argument("expected " + std::to_string(n_humans) + " human rows");
  }
  for (const json& h : humans) r.humans.push_back(to_state(h));
  r.reward = j.at("reward").get<double>();
  const json& d = j.at("d_min");
  r.d_min = d.is_null() ? std::numeric_limits<double>::infinity() : d.get<double>();
  return r;
}

void read_footer(const json& j, EpisodeLog& log) {
  const auto outcome = parse_outcome(j.at("outcome").get<std::string>());
  if (!outcome) throw std::invalid_argument("unknown outcome " + j.at("outcome").dump());
  log.outcome = *outcome;
  if (j.at("steps").get<std::size_t>() != log.records.size()) {
    throw std::invalid_argument("footer step count " + j.at("steps").dump() + " but " +
                                std::to_string(log.records.size()) + " step records");
  }
  const json& ttg = j.at("time_to_goal");
  if (!ttg.is_null()) log.time_to_goal = ttg.get<double>();
  log.final_time = j.at("final_time").get<double>();
  log.robot_final = to_state(j.at("robot_final"));
  log.human_overlaps = j.at("human_overlaps").get<long>();
  log.robot_obstacle_overlaps = j.at("robot_obstacle_overlaps").get<long>();
  log.abort_reason = j.at("abort_reason").get<std::string>();
}

}  // namespace

std::string serialize_log(const EpisodeLog& log) {
  std::string out = header_json(log).dump();
  out += '\n';
  for (const StepRecord& r : log.records) {
    out += step_json(r).dump();
    out += '\n';
  }
  out += footer_json(log).dump();
  out += '\n';
  return out;
}

EpisodeLog parse_log(std::string_view text) {
  EpisodeLog log;
  enum class Expect { kHeader, kStepOrFooter, kEnd } expect = Expect::kHeader;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    const std::string_view line = text.substr(pos, nl - pos);
    pos = nl + 1;
    ++line_no;
    if (line.empty()) continue;
    std::string kind = "unknown";
    try {
      const json j = json::parse(line);
      kind = j.at("type").get<std::string>();
      if (expect == Expect::kEnd) throw std::invalid_argument("content after footer");
      if (kind == "header") {
        if (expect != Expect::kHeader) throw std::invalid_argument("duplicate header");
        read_header(j, log);
        expect = Expect::kStepOrFooter;
      } else if (expect == Expect::kHeader) {
        throw std::invalid_argument("first record must be the header");
      } else if (kind == "step") {
        StepRecord r = read_step(j, log.human_radii.size());
        if (r.step != static_cast<int>(log.records.size())) {
          throw std::invalid_argument("step index " + std::to_string(r.step) + " out of order");
        }
        log.records.push_back(std::move(r));
      } else if (kind == "footer") {
        read_footer(j, log);
        expect = Expect::kEnd;
      } else {
        throw std::invalid_argument("unknown record type");
      }
    } catch (const std::exception& e) {
      throw LogParseError("log line " + std::to_string(line_no) + " (" + kind +
                          " record): " + e.what());
    }
  }
  if (expect != Expect::kEnd) {
    throw LogParseError(expect == Expect::kHeader ? "log has no header record"
                                                  : "log truncated: no footer record after line " +
                                                        std::to_string(line_no));
  }
  return log;
}

void write_file_atomic(const std::filesystem::path& path, std::string_view content) {
  namespace fs = std::filesystem;
  std::error_code ec;
  if (path.has_parent_path()) {
    fs::create_directories(path.parent_path(), ec);
    if (ec) throw IoError("cannot create " + path.parent_path().string() + ": " + ec.message());
  }
  fs::path tmp = path;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw IoError("cannot open " + tmp.string() + " for writing");
    f.write(content.data(), static_cast<std::streamsize>(content.size()));
    f.flush();
    if (!f) throw IoError("write failed: " + tmp.string());
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0) {
    const std::string why = std::strerror(errno);
    fs::remove(tmp, ec);
    throw IoError("cannot rename " + tmp.string() + " to " + path.string() + ": " + why);
  }
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open " + path.string());
  std::ostringstream ss;
  ss << f.rdbuf();
  if (f.bad()) throw IoError("read failed: " + path.string());
  return ss.str();
}

}  // namespace socnav
