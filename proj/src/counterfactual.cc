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

#include "cfi/counterfactual.h"

#include <cmath>
#include <numbers>
#include <optional>
#include <string>

#include "cfi/errors.h"

namespace cfi {
namespace {

constexpr double kSin45 = std::numbers::sqrt2 / 2.0;

std::optional<Vec2> InitialHeading(const Trajectory& traj) {
  for (size_t i = 1; i < traj.waypoints.size(); ++i) {
    const Vec2 d = traj.waypoints[i] - traj.waypoints[i - 1];
    const double len = Norm(d);
    if (len > 0.0) return d / len;
  }
  return std::nullopt;
}

}  // namespace

std::string_view ToString(PerturbationKind kind) {
  switch (kind) {
    case PerturbationKind::kHardStop:
      return "hard_stop";
    case PerturbationKind::kSpeedUp:
      return "speed_up";
    case PerturbationKind::kLaneChangeLeft:
      return "lane_change_left";
    case PerturbationKind::kLaneChangeRight:
      return "lane_change_right";
  }
  return "unknown";
}

std::string_view ToString(VariantKind kind) {
  switch (kind) {
    case VariantKind::kPredicted:
      return "predicted";
    case VariantKind::kHardStop:
      return "hard_stop";
    case VariantKind::kSpeedUp:
      return "speed_up";
    case VariantKind::kLaneChangeLeft:
      return "lane_change_left";
    case VariantKind::kLaneChangeRight:
      return "lane_change_right";
  }
  return "unknown";
}

VariantKind ToVariant(PerturbationKind kind) {
  switch (kind) {
    case PerturbationKind::kHardStop:
      return VariantKind::kHardStop;
    case PerturbationKind::kSpeedUp:
      return VariantKind::kSpeedUp;
    case PerturbationKind::kLaneChangeLeft:
      return VariantKind::kLaneChangeLeft;
    case PerturbationKind::kLaneChangeRight:
      return VariantKind::kLaneChangeRight;
  }
  return VariantKind::kPredicted;
}

PerturbationKind PerturbationKindFromString(std::string_view name) {
  for (PerturbationKind kind : AllPerturbations()) {
    if (ToString(kind) == name) return kind;
  }
  throw ParseError("unknown perturbation '" + std::string(name) + "'");
}

VariantKind VariantKindFromString(std::string_view name) {
  if (name == "predicted") return VariantKind::kPredicted;
  return ToVariant(PerturbationKindFromString(name));
}

void ValidatePerturbationConfig(const PerturbationConfig& config) {
  if (!std::isfinite(config.speed_up_factor) || config.speed_up_factor <= 1.0) {
    throw ValidationError("perturbation.speed_up_factor: must be > 1");
  }
  if (!std::isfinite(config.lane_width) || config.lane_width <= 0.0) {
    throw ValidationError("perturbation.lane_width: must be > 0");
  }
}

Trajectory HardStop(const Trajectory& traj) {
  Trajectory out = traj;
  if (!out.waypoints.empty()) {
    const Vec2 first = out.waypoints.front();
    for (Vec2& w : out.waypoints) w = first;
  }
  return out;
}

Trajectory SpeedUp(const Trajectory& traj, double factor) {
  if (!std::isfinite(factor) || factor <= 1.0) {
    throw ValidationError("speed-up factor must be > 1, got " +
                          std::to_string(factor));
  }
  Trajectory out = traj;
  for (size_t k = 1; k < out.waypoints.size(); ++k) {
    out.waypoints[k] =
        out.waypoints[k - 1] + factor * (traj.waypoints[k] - traj.waypoints[k - 1]);
  }
  return out;
}

Trajectory LaneChange(const Trajectory& traj, LaneSide side,
                      double lane_width) {
  const std::optional<Vec2> heading = InitialHeading(traj);
  if (!heading) return traj;
  const Vec2 h = *heading;
  const double sign = side == LaneSide::kLeft ? 1.0 : -1.0;
  const Vec2 normal{-h.y * sign, h.x * sign};
  const Vec2 diagonal = kSin45 * (h + normal);

  Trajectory out = traj;
  double lateral = 0.0;
  for (size_t k = 1; k < out.waypoints.size(); ++k) {
    const double step = Distance(traj.waypoints[k], traj.waypoints[k - 1]);
    if (lateral < lane_width) {
      out.waypoints[k] = out.waypoints[k - 1] + step * diagonal;
      lateral += step * kSin45;
    } else {
      out.waypoints[k] = out.waypoints[k - 1] + step * h;
    }
  }
  return out;
}

Trajectory ApplyPerturbation(const Trajectory& traj, PerturbationKind kind,
                             const PerturbationConfig& config) {
  switch (kind) {
    case PerturbationKind::kHardStop:
      return HardStop(traj);
    case PerturbationKind::kSpeedUp:
      return SpeedUp(traj, config.speed_up_factor);
    case PerturbationKind::kLaneChangeLeft:
      return LaneChange(traj, LaneSide::kLeft, config.lane_width);
    case PerturbationKind::kLaneChangeRight:
      return LaneChange(traj, LaneSide::kRight, config.lane_width);
  }
  return traj;
}

std::vector<TrajectoryVariant> AgentVariants(const Trajectory& traj,
                                             const PerturbationConfig& config) {
  std::vector<TrajectoryVariant> out;
  out.reserve(1 + config.enabled.size());
  out.push_back({VariantKind::kPredicted, traj});
  for (PerturbationKind kind : config.enabled) {
    out.push_back({ToVariant(kind), ApplyPerturbation(traj, kind, config)});
  }
  return out;
}

std::vector<TrajectoryVariant> EgoVariants(const Trajectory& ego_traj,
                                           const PerturbationConfig& config) {
  if (!config.perturb_ego) return {{VariantKind::kPredicted, ego_traj}};
  return AgentVariants(ego_traj, config);
}

Trajectory RemovalEgoTrajectory(const Scene& scene, std::string_view agent_id,
                                const EgoPredictor& predictor) {
  return predictor.Plan(SceneWithoutAgent(scene, agent_id));
}

Trajectory RemovalEgoTrajectory(const Scene& scene, std::string_view agent_id,
                                const PredictorConfig& config) {
  return RemovalEgoTrajectory(scene, agent_id, RuleBasedEgoPlanner(config));
}

}  // namespace cfi
