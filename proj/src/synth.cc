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

#include "cfi/synth.h"

#include <cmath>
#include <numbers>
#include <random>
#include <string>
#include <utility>

#include "cfi/errors.h"

namespace cfi {
namespace {

// std::uniform_real_distribution is implementation-defined; mapping raw
// mt19937_64 output by hand keeps fixtures identical across standard
// libraries.
class FixtureRng {
 public:
  explicit FixtureRng(uint64_t seed) : engine_(seed) {}

  double Uniform(double lo, double hi) {
    const double unit = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    return lo + (hi - lo) * unit;
  }

 private:
  std::mt19937_64 engine_;
};

constexpr double kRouteStart = -20.0;
constexpr double kRouteEnd = 400.0;
constexpr Vec2 kVehicleHalfExtent{2.25, 0.95};
constexpr Vec2 kPedestrianHalfExtent{0.3, 0.3};

Scene BaseScene(const SynthSpec& spec) {
  Scene scene;
  scene.id = std::string(ToString(spec.kind)) + "_" + std::to_string(spec.seed);
  scene.dt = spec.dt;
  scene.horizon = spec.horizon;
  scene.lane_width = spec.lane_width;
  scene.route = {{kRouteStart, 0.0}, {kRouteEnd, 0.0}};
  scene.ego = MakeAgent("ego", AgentKind::kVehicle, {0.0, 0.0}, 0.0,
                        spec.ego_speed, spec.dt);
  return scene;
}

void AddParked(Scene& scene, const SynthSpec& spec, FixtureRng& rng) {
  for (int i = 0; i < spec.count; ++i) {
    const double side = i % 2 == 0 ? 1.0 : -1.0;
    const Vec2 pos{rng.Uniform(-10.0, 40.0),
                   side * (spec.parked_offset + rng.Uniform(0.0, 5.0))};
    scene.agents.push_back(MakeAgent("parked_" + std::to_string(i),
                                     AgentKind::kVehicle, pos, 0.0, 0.0,
                                     spec.dt));
  }
}

}  // namespace

std::string_view ToString(SynthKind kind) {
  switch (kind) {
    case SynthKind::kLeadFollow:
      return "lead_follow";
    case SynthKind::kAdjacentLane:
      return "adjacent_lane";
    case SynthKind::kIntersectionCross:
      return "intersection_cross";
    case SynthKind::kJaywalker:
      return "jaywalker";
    case SynthKind::kRandom:
      return "random";
  }
  return "unknown";
}

SynthKind SynthKindFromString(std::string_view name) {
  for (SynthKind k : {SynthKind::kLeadFollow, SynthKind::kAdjacentLane,
                      SynthKind::kIntersectionCross, SynthKind::kJaywalker,
                      SynthKind::kRandom}) {
    if (ToString(k) == name) return k;
  }
  throw ParseError("unknown synthetic scene kind '" + std::string(name) + "'");
}

void ValidateSynthSpec(const SynthSpec& spec) {
  auto require = [](bool ok, const char* msg) {
    if (!ok) throw ValidationError(std::string("synth: ") + msg);
  };
  require(std::isfinite(spec.ego_speed) && spec.ego_speed >= 0.0,
          "ego_speed must be >= 0");
  require(std::isfinite(spec.lane_width) && spec.lane_width > 0.0,
          "lane_width must be > 0");
  require(std::isfinite(spec.dt) && spec.dt > 0.0, "dt must be > 0");
  require(spec.horizon > 0, "horizon must be > 0");
  require(std::isfinite(spec.gap), "gap must be finite");
  require(std::isfinite(spec.agent_speed) && spec.agent_speed >= 0.0,
          "agent_speed must be >= 0");
  require(std::isfinite(spec.lateral_offset), "lateral_offset must be finite");
  require(std::isfinite(spec.parked_offset) && spec.parked_offset > 0.0,
          "parked_offset must be > 0");
  require(spec.count >= 0 && spec.count <= 1000, "count must lie in [0, 1000]");
  switch (spec.kind) {
    case SynthKind::kLeadFollow:
    case SynthKind::kIntersectionCross:
      require(spec.gap > 0.0, "gap must be > 0");
      break;
    case SynthKind::kJaywalker:
      require(spec.gap >= 0.0, "gap must be >= 0");
      break;
    case SynthKind::kAdjacentLane:
    case SynthKind::kRandom:
      break;
  }
}

AgentState MakeAgent(std::string id, AgentKind kind, const Vec2& position,
                     double heading, double speed, double dt) {
  AgentState a;
  a.id = std::move(id);
  a.kind = kind;
  a.position = position;
  a.heading = WrapAngle(heading);
  a.speed = speed;
  a.half_extent =
      kind == AgentKind::kVehicle ? kVehicleHalfExtent : kPedestrianHalfExtent;
  const Vec2 velocity = speed * Vec2{std::cos(heading), std::sin(heading)};
  for (int i = kVelocityAveragingSteps; i >= 1; --i) {
    a.history.push_back({position - (i * dt) * velocity, -i * dt});
  }
  return a;
}

SynthScene GenerateWithLabels(const SynthSpec& spec) {
  ValidateSynthSpec(spec);
  FixtureRng rng(spec.seed);
  SynthScene out{BaseScene(spec), {}};
  Scene& scene = out.scene;

  switch (spec.kind) {
    case SynthKind::kLeadFollow: {
      scene.agents.push_back(MakeAgent("lead", AgentKind::kVehicle,
                                       {spec.gap, 0.0}, 0.0, spec.agent_speed,
                                       spec.dt));
      out.designed_important.insert("lead");
      AddParked(scene, spec, rng);
      break;
    }
    case SynthKind::kAdjacentLane: {
      scene.agents.push_back(MakeAgent("adjacent", AgentKind::kVehicle,
                                       {spec.gap, spec.lateral_offset}, 0.0,
                                       spec.agent_speed, spec.dt));
      out.designed_important.insert("adjacent");
      break;
    }
    case SynthKind::kIntersectionCross: {
      // Arrives at the conflict point together with the ego. Without an
      // explicit speed the crossing vehicle matches the ego.
      const double speed =
          spec.agent_speed > 0.0 ? spec.agent_speed : spec.ego_speed;
      const double arrival =
          spec.ego_speed > 0.0 ? spec.gap / spec.ego_speed : 0.0;
      scene.agents.push_back(MakeAgent("crossing", AgentKind::kVehicle,
                                       {spec.gap, -speed * arrival},
                                       std::numbers::pi / 2.0, speed,
                                       spec.dt));
      out.designed_important.insert("crossing");
      break;
    }
    case SynthKind::kJaywalker: {
      const double toward_route =
          spec.lateral_offset > 0.0 ? -std::numbers::pi / 2.0
                                    : std::numbers::pi / 2.0;
      scene.agents.push_back(MakeAgent("ped_0", AgentKind::kPedestrian,
                                       {spec.gap, spec.lateral_offset},
                                       toward_route, spec.agent_speed,
                                       spec.dt));
      out.designed_important.insert("ped_0");
      const double base = std::abs(spec.lateral_offset);
      for (int i = 1; i <= spec.count; ++i) {
        const double side = i % 2 == 0 ? 1.0 : -1.0;
        const Vec2 pos{spec.gap + 10.0 * i + rng.Uniform(0.0, 5.0),
                       side * (base + 3.0 + rng.Uniform(0.0, 4.0))};
        scene.agents.push_back(MakeAgent("ped_" + std::to_string(i),
                                         AgentKind::kPedestrian, pos, 0.0,
                                         0.0, spec.dt));
      }
      break;
    }
    case SynthKind::kRandom: {
      for (int i = 0; i < spec.count; ++i) {
        const bool vehicle = rng.Uniform(0.0, 1.0) < 0.7;
        Vec2 pos;
        do {
          pos = {rng.Uniform(-30.0, 30.0), rng.Uniform(-30.0, 30.0)};
        } while (Norm(pos) < 4.0);
        const double heading =
            rng.Uniform(-std::numbers::pi, std::numbers::pi);
        const double speed =
            vehicle ? rng.Uniform(0.0, 10.0) : rng.Uniform(0.0, 2.0);
        scene.agents.push_back(MakeAgent(
            "agent_" + std::to_string(i),
            vehicle ? AgentKind::kVehicle : AgentKind::kPedestrian, pos,
            heading, speed, spec.dt));
      }
      break;
    }
  }
  ValidateScene(scene);
  return out;
}

Scene Generate(const SynthSpec& spec) { return GenerateWithLabels(spec).scene; }

}  // namespace cfi
