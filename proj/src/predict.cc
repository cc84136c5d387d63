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

#include "cfi/predict.h"

#include <algorithm>
#include <cmath>
#include <utility>
#include <vector>

#include "cfi/errors.h"

namespace cfi {
namespace {

// Slack on corridor comparisons so boundary cases survive rounding under
// rigid motion of the scene.
constexpr double kCorridorSlack = 1e-9;

void RequirePositive(double value, const char* name) {
  if (!std::isfinite(value) || value <= 0.0) {
    throw ValidationError(std::string("predictor.") + name + ": must be > 0");
  }
}

}  // namespace

void ValidatePredictorConfig(const PredictorConfig& config) {
  RequirePositive(config.desired_speed, "desired_speed");
  RequirePositive(config.max_accel, "max_accel");
  RequirePositive(config.max_decel, "max_decel");
  if (config.corridor_halfwidth) {
    RequirePositive(*config.corridor_halfwidth, "corridor_halfwidth");
  }
  RequirePositive(config.lookahead_gap, "lookahead_gap");
}

Trajectory ConstantVelocityPredict(const AgentState& agent, int horizon,
                                   double dt) {
  if (static_cast<int>(agent.history.size()) < kVelocityAveragingSteps) {
    throw ValidationError("agent '" + agent.id +
                          "': insufficient history for velocity averaging");
  }
  if (horizon <= 0 || !(dt > 0.0)) {
    throw ValidationError("horizon and dt must be positive");
  }
  // Chain of the most recent samples ending at the current position.
  std::vector<Vec2> chain;
  chain.reserve(kVelocityAveragingSteps + 1);
  const size_t first = agent.history.size() - kVelocityAveragingSteps;
  for (size_t i = first; i < agent.history.size(); ++i) {
    chain.push_back(agent.history[i].position);
  }
  chain.push_back(agent.position);

  Vec2 sum;
  for (size_t i = 1; i < chain.size(); ++i) sum += chain[i] - chain[i - 1];
  const Vec2 velocity = sum / (kVelocityAveragingSteps * dt);

  Trajectory out;
  out.dt = dt;
  out.waypoints.reserve(horizon);
  for (int k = 1; k <= horizon; ++k) {
    out.waypoints.push_back(agent.position + (k * dt) * velocity);
  }
  return out;
}

Trajectory EgoPlan(const Scene& scene, const PredictorConfig& config) {
  ValidatePredictorConfig(config);
  Polyline route = [&] {
    try {
      return Polyline(scene.route);
    } catch (const std::invalid_argument& e) {
      throw ValidationError(std::string("degenerate route: ") + e.what());
    }
  }();
  const int horizon = scene.horizon;
  const double dt = scene.dt;
  const double halfwidth =
      config.corridor_halfwidth.value_or(scene.lane_width / 2.0);

  // Route-frame positions of every agent at times 0, dt, ..., (K-1) dt.
  std::vector<std::vector<PolylineProjection>> agent_frames;
  agent_frames.reserve(scene.agents.size());
  for (const AgentState& agent : scene.agents) {
    const Trajectory future = ConstantVelocityPredict(agent, horizon, dt);
    std::vector<PolylineProjection> frames;
    frames.reserve(horizon);
    frames.push_back(route.Project(agent.position));
    for (int k = 1; k < horizon; ++k) {
      frames.push_back(route.Project(future.waypoints[k - 1]));
    }
    agent_frames.push_back(std::move(frames));
  }

  double station = route.Project(scene.ego.position).station;
  double speed = std::clamp(scene.ego.speed, 0.0, config.desired_speed);

  Trajectory out;
  out.dt = dt;
  out.waypoints.reserve(horizon);
  for (int k = 0; k < horizon; ++k) {
    const double reach =
        speed * speed / (2.0 * config.max_decel) + config.lookahead_gap;
    const bool blocked = std::any_of(
        agent_frames.begin(), agent_frames.end(), [&](const auto& frames) {
          const PolylineProjection& p = frames[k];
          const double gap = p.station - station;
          return std::abs(p.lateral) <= halfwidth + kCorridorSlack &&
                 gap >= -kCorridorSlack && gap <= reach + kCorridorSlack;
        });
    station += speed * dt;
    speed = blocked ? std::max(0.0, speed - config.max_decel * dt)
                    : std::min(config.desired_speed,
                               speed + config.max_accel * dt);
    out.waypoints.push_back(route.PointAt(station));
  }
  return out;
}

RuleBasedEgoPlanner::RuleBasedEgoPlanner(PredictorConfig config)
    : config_(std::move(config)) {
  ValidatePredictorConfig(config_);
}

Trajectory RuleBasedEgoPlanner::Plan(const Scene& scene) const {
  return EgoPlan(scene, config_);
}

ScenePrediction PredictAll(const Scene& scene, const EgoPredictor& ego) {
  ScenePrediction out;
  out.ego = ego.Plan(scene);
  for (const AgentState& agent : scene.agents) {
    out.agents.emplace(agent.id, ConstantVelocityPredict(agent, scene.horizon,
                                                         scene.dt));
  }
  return out;
}

ScenePrediction PredictAll(const Scene& scene, const PredictorConfig& config) {
  return PredictAll(scene, RuleBasedEgoPlanner(config));
}

}  // namespace cfi
