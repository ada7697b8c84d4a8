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

#ifndef SOCNAV_BRIDGE_HPP
#define SOCNAV_BRIDGE_HPP

#include <chrono>
#include <cstdint>
#include <string>

#include "socnav/policies.hpp"

namespace socnav {

/// Wire records of the external-policy bridge, one JSON object per line.
///
///   engine -> policy  {"type":"hello","protocol":1,"episode":..,"model":..,
///                      "scenario":..,"observation_layout":{..}}
///   policy -> engine  {"type":"ready"}
///   engine -> policy  {"type":"step","episode":..,"step":k,"time":t,
///                      "observation":{"robot":[..],"humans":[[..],..],
///                                     "obstacles":[[x,y,r],..]}}
///   policy -> engine  {"velocity":[vx,vy]}
///   engine -> policy  {"type":"end","episode":..,"outcome":".."}
///
/// The robot row is px,py,vx,vy,gx,gy,radius,v_max; each human row is
/// px,py,vx,vy,theta,omega,radius. HSFM heading fields are always present.
inline constexpr int kBridgeProtocol = 1;

std::string bridge_hello(const EpisodeInfo& info);
std::string bridge_step(std::uint64_t episode, std::uint64_t step, const Observation& obs);
/// Parses a velocity reply; throws PolicyFailure when malformed or non-finite.
RobotAction parse_bridge_reply(const std::string& line);

/// Learned controller living in another process. One process is spawned
/// per episode via /bin/sh -c <command>; each decision is a blocking
/// request/response bounded by `timeout`.
class ExternalPolicy final : public Policy {
 public:
  explicit ExternalPolicy(std::string command,
                          std::chrono::milliseconds timeout = std::chrono::seconds(5));
  ~ExternalPolicy() override;
  ExternalPolicy(const ExternalPolicy&) = delete;
  ExternalPolicy& operator=(const ExternalPolicy&) = delete;

  std::string name() const override { return "external:" + command_; }
  void begin_episode(const EpisodeInfo& info) override;
  RobotAction act(const Observation& obs) override;
  void end_episode(const std::string& outcome) override;

 private:
  void spawn();
  void shutdown();
  void send_line(const std::string& line);
  std::string read_line();

  std::string command_;
  std::chrono::milliseconds timeout_;
  int pid_{-1};
  int to_child_{-1};
  int from_child_{-1};
  std::string buffer_;
  std::uint64_t episode_{0};
  std::uint64_t step_{0};
};

}  // namespace socnav

#endif  // SOCNAV_BRIDGE_HPP
