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

#ifndef CFI_SYNTH_H_
#define CFI_SYNTH_H_

#include <cstdint>
#include <set>
#include <string>
#include <string_view>

#include "cfi/scene.h"

namespace cfi {

// Bumped whenever a fixture geometry changes.
inline constexpr int kSynthFixtureVersion = 1;

enum class SynthKind {
  kLeadFollow,
  kAdjacentLane,
  kIntersectionCross,
  kJaywalker,
  kRandom
};

std::string_view ToString(SynthKind kind);
SynthKind SynthKindFromString(std::string_view name);

// Ego starts at the origin heading +x along a straight route. Fields not used
// by a kind are ignored.
struct SynthSpec {
  SynthKind kind = SynthKind::kLeadFollow;
  uint64_t seed = 0;

  double ego_speed = 8.0;
  double lane_width = kDefaultLaneWidth;
  double dt = kDefaultDt;
  int horizon = kDefaultHorizon;

  // LeadFollow: lead `gap` m ahead at `agent_speed`, plus `count` parked
  // vehicles at least `parked_offset` m off the route.
  // AdjacentLane: vehicle `gap` m ahead, `lateral_offset` m to the left, at
  // `agent_speed`.
  // IntersectionCross: vehicle crossing the route `gap` m ahead, arriving
  // together with the ego, at `agent_speed`.
  // Jaywalker: pedestrian `gap` m ahead, `lateral_offset` m off the route,
  // plus `count` farther pedestrians.
  // Random: `count` agents in a 60 m box around the ego.
  double gap = 10.0;
  double agent_speed = 0.0;
  double lateral_offset = kDefaultLaneWidth;
  double parked_offset = 15.0;
  int count = 2;
};

// Throws ValidationError on out-of-range parameters.
void ValidateSynthSpec(const SynthSpec& spec);

struct SynthScene {
  Scene scene;
  // Ids the fixture is built to make important.
  std::set<std::string> designed_important;
};

SynthScene GenerateWithLabels(const SynthSpec& spec);
Scene Generate(const SynthSpec& spec);

// Agent moving at constant velocity with a history consistent with it.
AgentState MakeAgent(std::string id, AgentKind kind, const Vec2& position,
                     double heading, double speed, double dt);

}  // namespace cfi

#endif  // CFI_SYNTH_H_
