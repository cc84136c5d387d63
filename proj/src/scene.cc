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

#include "cfi/scene.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>
#include <string>

#include "cfi/errors.h"

namespace cfi {
namespace {

void Require(bool ok, const std::string& message) {
  if (!ok) throw ValidationError(message);
}

void ValidateAgent(const AgentState& agent, double dt,
                   const std::string& where) {
  Require(!agent.id.empty(), where + ".id: must be non-empty");
  const std::string field = where + " '" + agent.id + "'";
  Require(IsFinite(agent.position), field + ".position: non-finite");
  Require(std::isfinite(agent.heading) && agent.heading >= -std::numbers::pi &&
              agent.heading < std::numbers::pi,
          field + ".heading: must lie in [-pi, pi)");
  Require(std::isfinite(agent.speed) && agent.speed >= 0.0,
          field + ".speed: must be finite and >= 0");
  Require(IsFinite(agent.half_extent) && agent.half_extent.x > 0.0 &&
              agent.half_extent.y > 0.0,
          field + ".half_extent: components must be finite and > 0");
  Require(static_cast<int>(agent.history.size()) >= kVelocityAveragingSteps,
          field + ".history: history length < " +
              std::to_string(kVelocityAveragingSteps));
  const double tol = 1e-6 * std::max(1.0, dt);
  for (size_t i = 0; i < agent.history.size(); ++i) {
    const HistorySample& s = agent.history[i];
    Require(IsFinite(s.position) && std::isfinite(s.t),
            field + ".history[" + std::to_string(i) + "]: non-finite");
    if (i == 0) continue;
    const double step = s.t - agent.history[i - 1].t;
    Require(step > 0.0, field + ".history[" + std::to_string(i) +
                            "].t: timestamps must be strictly increasing");
    Require(std::abs(step - dt) <= tol,
            field + ".history[" + std::to_string(i) +
                "].t: samples must be spaced at dt");
  }
}

}  // namespace

std::string_view ToString(AgentKind kind) {
  return kind == AgentKind::kVehicle ? "vehicle" : "pedestrian";
}

AgentKind AgentKindFromString(std::string_view name) {
  if (name == "vehicle") return AgentKind::kVehicle;
  if (name == "pedestrian") return AgentKind::kPedestrian;
  throw ParseError("unknown agent kind '" + std::string(name) + "'");
}

const AgentState* Scene::FindAgent(std::string_view agent_id) const {
  for (const AgentState& a : agents) {
    if (a.id == agent_id) return &a;
  }
  return nullptr;
}

void ValidateScene(const Scene& scene) {
  Require(std::isfinite(scene.dt) && scene.dt > 0.0, "dt: must be > 0");
  Require(scene.horizon > 0, "horizon: must be a positive integer");
  Require(std::isfinite(scene.lane_width) && scene.lane_width > 0.0,
          "lane_width: must be > 0");

  Require(scene.route.size() >= 2, "route: needs at least 2 points");
  double length = 0.0;
  for (size_t i = 0; i < scene.route.size(); ++i) {
    Require(IsFinite(scene.route[i]),
            "route[" + std::to_string(i) + "]: non-finite");
    if (i > 0) {
      const double seg = Distance(scene.route[i], scene.route[i - 1]);
      Require(seg > 0.0, "route[" + std::to_string(i) +
                             "]: coincides with the previous point");
      length += seg;
    }
  }
  Require(length > 0.0, "route: total length must be > 0");

  ValidateAgent(scene.ego, scene.dt, "ego");
  Require(scene.ego.kind == AgentKind::kVehicle, "ego.kind: must be vehicle");

  std::set<std::string> ids{scene.ego.id};
  for (size_t i = 0; i < scene.agents.size(); ++i) {
    const AgentState& a = scene.agents[i];
    ValidateAgent(a, scene.dt, "agents[" + std::to_string(i) + "]");
    Require(ids.insert(a.id).second,
            "agents[" + std::to_string(i) + "].id: duplicate id '" + a.id +
                "'");
  }
}

Scene SceneWithoutAgent(const Scene& scene, std::string_view agent_id) {
  if (agent_id == scene.ego.id) {
    throw ValidationError("cannot remove the ego vehicle '" +
                          std::string(agent_id) + "'");
  }
  Scene out = scene;
  const auto it = std::find_if(
      out.agents.begin(), out.agents.end(),
      [&](const AgentState& a) { return a.id == agent_id; });
  if (it == out.agents.end()) {
    throw ValidationError("unknown agent id '" + std::string(agent_id) + "'");
  }
  out.agents.erase(it);
  return out;
}

Scene TransformScene(const Scene& scene, double angle, const Vec2& offset) {
  auto map = [&](const Vec2& p) { return Rotate(p, angle) + offset; };
  auto map_agent = [&](AgentState a) {
    a.position = map(a.position);
    a.heading = WrapAngle(a.heading + angle);
    for (HistorySample& s : a.history) s.position = map(s.position);
    return a;
  };
  Scene out = scene;
  out.ego = map_agent(scene.ego);
  for (AgentState& a : out.agents) a = map_agent(a);
  for (Vec2& p : out.route) p = map(p);
  return out;
}

}  // namespace cfi
