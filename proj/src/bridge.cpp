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

#include "socnav/bridge.hpp"

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <spawn.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <cmath>
#include <cstring>
#include <mutex>
#include <thread>

#include "json.hpp"

extern char** environ;

namespace socnav {
namespace {

using nlohmann::json;

void ignore_sigpipe_once() {
  static std::once_flag flag;
  std::call_once(flag, [] { ::signal(SIGPIPE, SIG_IGN); });
}

}  // namespace

std::string bridge_hello(const EpisodeInfo& info) {
  json j{{"type", "hello"},
         {"protocol", kBridgeProtocol},
         {"episode", info.episode_id},
         {"model", info.model},
         {"scenario", info.scenario},
         {"observation_layout",
          {{"robot", {"px", "py", "vx", "vy", "gx", "gy", "radius", "v_max"}},
           {"human", {"px", "py", "vx", "vy", "theta", "omega", "radius"}},
           {"obstacle", {"x", "y", "radius"}}}}};
  return j.dump();
}

std::string bridge_step(std::uint64_t episode, std::uint64_t step, const Observation& obs) {
  const RobotFullState& r = obs.robot;
  json humans = json::array();
  for (const HumanObservation& h : obs.humans) {
    humans.push_back({h.position.x, h.position.y, h.velocity.x, h.velocity.y, h.heading,
                      h.angular_velocity, h.radius});
  }
  json obstacles = json::array();
  for (const Obstacle& o : obs.obstacles) obstacles.push_back({o.center.x, o.center.y, o.radius});
  json j{{"type", "step"},
         {"episode", episode},
         {"step", step},
         {"time", obs.time},
         {"observation",
          {{"robot",
            {r.position.x, r.position.y, r.velocity.x, r.velocity.y, r.goal.x, r.goal.y, r.radius,
             r.max_speed}},
           {"humans", std::move(humans)},
           {"obstacles", std::move(obstacles)}}}};
  return j.dump();
}

RobotAction parse_bridge_reply(const std::string& line) {
  json j;
  try {
    j = json::parse(line);
  } catch (const json::parse_error& e) {
    throw PolicyFailure(std::string("bridge reply is not JSON: ") + e.what());
  }
  if (!j.is_object() || !j.contains("velocity") || !j["velocity"].is_array() ||
      j["velocity"].size() != 2 || !j["velocity"][0].is_number() ||
      !j["velocity"][1].is_number()) {
    throw PolicyFailure("bridge reply lacks a two-element numeric 'velocity': " + line);
  }
  const Vec2 v{j["velocity"][0].get<double>(), j["velocity"][1].get<double>()};
  if (!v.finite()) throw PolicyFailure("bridge reply velocity is not finite");
  return {v};
}

ExternalPolicy::ExternalPolicy(std::string command, std::chrono::milliseconds timeout)
    : command_(std::move(command)), timeout_(timeout) {
  ignore_sigpipe_once();
}

ExternalPolicy::~ExternalPolicy() { shutdown(); }

void ExternalPolicy::spawn() {
  int in_pipe[2];
  int out_pipe[2];
  if (::pipe2(in_pipe, O_CLOEXEC) != 0) throw PolicyFailure("bridge: pipe() failed");
  if (::pipe2(out_pipe, O_CLOEXEC) != 0) {
    ::close(in_pipe[0]);
    ::close(in_pipe[1]);
    throw PolicyFailure("bridge: pipe() failed");
  }
  posix_spawn_file_actions_t actions;
  posix_spawn_file_actions_init(&actions);
  posix_spawn_file_actions_adddup2(&actions, in_pipe[0], STDIN_FILENO);
  posix_spawn_file_actions_adddup2(&actions, out_pipe[1], STDOUT_FILENO);

  std::string shell = "/bin/sh";
  std::string flag = "-c";
  char* argv[] = {shell.data(), flag.data(), command_.data(), nullptr};
  // Own process group, so a stuck policy behind the shell can be killed too.
  posix_spawnattr_t attr;
  posix_spawnattr_init(&attr);
  posix_spawnattr_setflags(&attr, POSIX_SPAWN_SETPGROUP);
  posix_spawnattr_setpgroup(&attr, 0);
  pid_t pid = -1;
  const int rc = ::posix_spawn(&pid, "/bin/sh", &actions, &attr, argv, environ);
  posix_spawnattr_destroy(&attr);
  posix_spawn_file_actions_destroy(&actions);
  ::close(in_pipe[0]);
  ::close(out_pipe[1]);
  if (rc != 0) {
    ::close(in_pipe[1]);
    ::close(out_pipe[0]);
    throw PolicyFailure(std::string("bridge: cannot spawn policy: ") + std::strerror(rc));
  }
  pid_ = pid;
  to_child_ = in_pipe[1];
  from_child_ = out_pipe[0];
  buffer_.clear();
}

void ExternalPolicy::shutdown() {
  if (to_child_ >= 0) {
    ::close(to_child_);
    to_child_ = -1;
  }
  if (from_child_ >= 0) {
    ::close(from_child_);
    from_child_ = -1;
  }
  if (pid_ > 0) {
    int status = 0;
    // Closed stdin is the polite stop signal; escalate if it lingers.
    for (int i = 0; i < 50; ++i) {
      if (::waitpid(pid_, &status, WNOHANG) == pid_) {
        pid_ = -1;
        return;
      }
      std::this_thread::sleep_for(std::chrono::milliseconds(2));
    }
    ::kill(-pid_, SIGKILL);
    ::waitpid(pid_, &status, 0);
    pid_ = -1;
  }
}

void ExternalPolicy::send_line(const std::string& line) {
  std::string data = line + "\n";
  std::size_t written = 0;
  while (written < data.size()) {
    const ssize_t n = ::write(to_child_, data.data() + written, data.size() - written);
    if (n < 0) {
      if (errno == EINTR) continue;
      throw PolicyFailure("bridge: policy process closed its input");
    }
    written += static_cast<std::size_t>(n);
  }
}

std::string ExternalPolicy::read_line() {
  const auto deadline = std::chrono::steady_clock::now() + timeout_;
  for (;;) {
    const auto nl = buffer_.find('\n');
    if (nl != std::string::npos) {
      std::string line = buffer_.substr(0, nl);
      buffer_.erase(0, nl + 1);
      return line;
    }
    const auto remaining = std::chrono::duration_cast<std::chrono::milliseconds>(
        deadline - std::chrono::steady_clock::now());
    if (remaining.count() <= 0) throw PolicyFailure("bridge: policy reply timed out");
    pollfd pfd{from_child_, POLLIN, 0};
    const int ready = ::poll(&pfd, 1, static_cast<int>(remaining.count()));
    if (ready < 0) {
      if (errno == EINTR) continue;
      throw PolicyFailure("bridge: poll() failed");
    }
    if (ready == 0) throw PolicyFailure("bridge: policy reply timed out");
    char chunk[4096];
    const ssize_t n = ::read(from_child_, chunk, sizeof(chunk));
    if (n < 0) {
      if (errno == EINTR) continue;
      throw PolicyFailure("bridge: read() failed");
    }
    if (n == 0) throw PolicyFailure("bridge: policy process closed its output");
    buffer_.append(chunk, static_cast<std::size_t>(n));
  }
}

void ExternalPolicy::begin_episode(const EpisodeInfo& info) {
  shutdown();
  spawn();
  episode_ = info.episode_id;
  step_ = 0;
  send_line(bridge_hello(info));
  const std::string ack = read_line();
  json j = json::parse(ack, nullptr, false);
  if (j.is_discarded() || !j.is_object() || j.value("type", "") != "ready") {
    throw PolicyFailure("bridge: expected {\"type\":\"ready\"} handshake, got: " + ack);
  }
}

RobotAction ExternalPolicy::act(const Observation& obs) {
  if (pid_ <= 0) throw PolicyFailure("bridge: no running policy process");
  send_line(bridge_step(episode_, step_++, obs));
  return parse_bridge_reply(read_line());
}

void ExternalPolicy::end_episode(const std::string& outcome) {
  if (pid_ > 0 && to_child_ >= 0) {
    try {
      send_line(json{{"type", "end"}, {"episode", episode_}, {"outcome", outcome}}.dump());
    } catch (const PolicyFailure&) {
      // Process already gone; nothing to tell it.
    }
  }
  shutdown();
}

}  // namespace socnav
