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

#ifndef CFI_SCENE_H_
#define CFI_SCENE_H_

#include <string>
#include <string_view>
#include <vector>

#include "cfi/geometry.h"

namespace cfi {

// Minimum number of past samples an agent must carry; the constant-velocity
// model averages this many per-step displacements.
inline constexpr int kVelocityAveragingSteps = 5;
inline constexpr int kDefaultHorizon = 20;
inline constexpr double kDefaultDt = 0.25;
inline constexpr double kDefaultLaneWidth = 3.5;

enum class AgentKind { kVehicle, kPedestrian };

std::string_view ToString(AgentKind kind);
// Accepts "vehicle" / "pedestrian"; throws ParseError otherwise.
AgentKind AgentKindFromString(std::string_view name);

struct HistorySample {
  Vec2 position;
  double t = 0.0;  // seconds

  friend bool operator==(const HistorySample&, const HistorySample&) = default;
};

// The current position is taken to follow the last history sample by one
// time step, so a history of N samples yields N per-step displacements.
struct AgentState {
  std::string id;
  AgentKind kind = AgentKind::kVehicle;
  Vec2 position;
  double heading = 0.0;  // radians, [-pi, pi)
  double speed = 0.0;    // m/s
  Vec2 half_extent{2.25, 0.95};
  std::vector<HistorySample> history;  // oldest first

  friend bool operator==(const AgentState&, const AgentState&) = default;
};

struct Scene {
  std::string id;
  AgentState ego;
  std::vector<Vec2> route;
  std::vector<AgentState> agents;
  double lane_width = kDefaultLaneWidth;
  double dt = kDefaultDt;
  int horizon = kDefaultHorizon;  // K, number of predicted waypoints

  friend bool operator==(const Scene&, const Scene&) = default;

  // nullptr when absent.
  const AgentState* FindAgent(std::string_view agent_id) const;
};

// K future waypoints at a fixed step; waypoints[k] is the position at time
// (k + 1) * dt.
struct Trajectory {
  std::vector<Vec2> waypoints;
  double dt = kDefaultDt;

  friend bool operator==(const Trajectory&, const Trajectory&) = default;

  int size() const { return static_cast<int>(waypoints.size()); }
};

// Throws ValidationError naming the offending field on the first violated
// invariant.
void ValidateScene(const Scene& scene);

// Copy of `scene` with the named non-ego agent deleted. Throws
// ValidationError for the ego id or an unknown id.
Scene SceneWithoutAgent(const Scene& scene, std::string_view agent_id);

// Applies x -> R(angle) x + offset to every position, history sample, route
// point and heading.
Scene TransformScene(const Scene& scene, double angle, const Vec2& offset);

}  // namespace cfi

#endif  // CFI_SCENE_H_
