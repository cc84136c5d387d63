// Copyright 2026 The Counterfactual Importance Authors
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

#include "cfi/external_predictor.h"

#include <poll.h>
#include <signal.h>
#include <sys/socket.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <thread>

#include "cfi/errors.h"
#include "cfi/scene_io.h"
#include "json.hpp"

namespace cfi {

using Clock = std::chrono::steady_clock;

ExternalEgoPredictor::ExternalEgoPredictor(std::string command,
                                           std::chrono::milliseconds timeout)
    : command_(std::move(command)), timeout_(timeout) {
  int fds[2];
  if (socketpair(AF_UNIX, SOCK_STREAM | SOCK_CLOEXEC, 0, fds) != 0) {
    throw RuntimeError(std::string("socketpair: ") + std::strerror(errno));
  }
  const pid_t pid = fork();
  if (pid < 0) {
    close(fds[0]);
    close(fds[1]);
    throw RuntimeError(std::string("fork: ") + std::strerror(errno));
  }
  if (pid == 0) {
    dup2(fds[1], STDIN_FILENO);
    dup2(fds[1], STDOUT_FILENO);
    execl("/bin/sh", "sh", "-c", command_.c_str(), static_cast<char*>(nullptr));
    _exit(127);
  }
  close(fds[1]);
  pid_ = pid;
  fd_ = fds[0];
}

ExternalEgoPredictor::~ExternalEgoPredictor() { Shutdown(); }

void ExternalEgoPredictor::Shutdown() noexcept {
  if (fd_ >= 0) {
    close(fd_);
    fd_ = -1;
  }
  if (pid_ <= 0) return;
  // EOF on stdin asks the child to exit; give it a moment before killing.
  for (int i = 0; i < 50; ++i) {
    if (waitpid(pid_, nullptr, WNOHANG) == pid_) {
      pid_ = -1;
      return;
    }
    std::this_thread::sleep_for(std::chrono::milliseconds(10));
  }
  kill(pid_, SIGKILL);
  waitpid(pid_, nullptr, 0);
  pid_ = -1;
}

std::string ExternalEgoPredictor::ReadLine() const {
  const auto deadline = Clock::now() + timeout_;
  for (;;) {
    const auto nl = pending_.find('\n');
    if (nl != std::string::npos) {
      std::string line = pending_.substr(0, nl);
      pending_.erase(0, nl + 1);
      return line;
    }
    const auto left = std::chrono::duration_cast<std::chrono::milliseconds>(
        deadline - Clock::now());
    if (left.count() <= 0) {
      throw RuntimeError("external predictor timed out after " +
                         std::to_string(timeout_.count()) + " ms");
    }
    pollfd pfd{fd_, POLLIN, 0};
    const int ready = poll(&pfd, 1, static_cast<int>(left.count()));
    if (ready < 0) {
      if (errno == EINTR) continue;
      throw RuntimeError(std::string("poll: ") + std::strerror(errno));
    }
    if (ready == 0) continue;
    char buf[4096];
    const ssize_t n = recv(fd_, buf, sizeof(buf), 0);
    if (n < 0) {
      if (errno == EINTR) continue;
      throw RuntimeError(std::string("recv: ") + std::strerror(errno));
    }
    if (n == 0) throw RuntimeError("external predictor closed its output");
    pending_.append(buf, static_cast<size_t>(n));
  }
}

Trajectory ExternalEgoPredictor::Plan(const Scene& scene) const {
  std::lock_guard<std::mutex> lock(mu_);
  if (fd_ < 0) throw RuntimeError("external predictor is not running");
  const nlohmann::json request = {{"type", "predict"},
                                  {"agent_id", scene.ego.id},
                                  {"scene", SceneToJson(scene)}};
  const std::string line = request.dump() + "\n";
  size_t sent = 0;
  while (sent < line.size()) {
    const ssize_t n =
        send(fd_, line.data() + sent, line.size() - sent, MSG_NOSIGNAL);
    if (n < 0) {
      if (errno == EINTR) continue;
      throw RuntimeError(std::string("external predictor write failed: ") +
                         std::strerror(errno));
    }
    sent += static_cast<size_t>(n);
  }

  nlohmann::json response;
  try {
    response = nlohmann::json::parse(ReadLine());
  } catch (const nlohmann::json::parse_error& e) {
    throw RuntimeError(std::string("external predictor sent malformed JSON: ") +
                       e.what());
  }
  if (response.contains("error")) {
    throw RuntimeError("external predictor error: " +
                       response["error"].dump());
  }
  const auto it = response.find("waypoints");
  if (it == response.end() || !it->is_array()) {
    throw RuntimeError("external predictor response lacks 'waypoints'");
  }
  if (static_cast<int>(it->size()) != scene.horizon) {
    throw RuntimeError("external predictor returned " +
                       std::to_string(it->size()) + " waypoints, expected " +
                       std::to_string(scene.horizon));
  }
  Trajectory out;
  out.dt = scene.dt;
  for (const auto& w : *it) {
    Vec2 p;
    try {
      p = Vec2FromJson(w);
    } catch (const ParseError& e) {
      throw RuntimeError(std::string("external predictor waypoint: ") +
                         e.what());
    }
    if (!IsFinite(p)) throw RuntimeError("external predictor: non-finite waypoint");
    out.waypoints.push_back(p);
  }
  return out;
}

}  // namespace cfi
