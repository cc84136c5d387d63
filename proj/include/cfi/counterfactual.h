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

#ifndef CFI_COUNTERFACTUAL_H_
#define CFI_COUNTERFACTUAL_H_

#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "cfi/predict.h"
#include "cfi/scene.h"

namespace cfi {

enum class PerturbationKind { kHardStop, kSpeedUp, kLaneChangeLeft, kLaneChangeRight };

// A trajectory variant: the unperturbed prediction or one perturbation.
enum class VariantKind {
  kPredicted,
  kHardStop,
  kSpeedUp,
  kLaneChangeLeft,
  kLaneChangeRight
};

enum class LaneSide { kLeft, kRight };

std::string_view ToString(PerturbationKind kind);
std::string_view ToString(VariantKind kind);
VariantKind ToVariant(PerturbationKind kind);
PerturbationKind PerturbationKindFromString(std::string_view name);
VariantKind VariantKindFromString(std::string_view name);

inline const std::set<PerturbationKind>& AllPerturbations() {
  static const std::set<PerturbationKind> kAll = {
      PerturbationKind::kHardStop, PerturbationKind::kSpeedUp,
      PerturbationKind::kLaneChangeLeft, PerturbationKind::kLaneChangeRight};
  return kAll;
}

struct PerturbationConfig {
  double speed_up_factor = 1.5;
  double lane_width = kDefaultLaneWidth;
  std::set<PerturbationKind> enabled = AllPerturbations();
  bool perturb_ego = true;

  friend bool operator==(const PerturbationConfig&,
                         const PerturbationConfig&) = default;
};

void ValidatePerturbationConfig(const PerturbationConfig& config);

// Every waypoint collapsed onto the first one.
Trajectory HardStop(const Trajectory& traj);

// w'_0 = w_0, w'_k = w'_{k-1} + factor (w_k - w_{k-1}). Throws
// ValidationError for factor <= 1.
Trajectory SpeedUp(const Trajectory& traj, double factor);

// Keeps every per-step length of `traj`. Steps head 45 degrees off the
// initial heading toward `side` until the lateral offset from the initial
// heading line reaches lane_width, then continue parallel to that heading.
// The initial heading is the first non-zero segment; a stationary trajectory
// is returned unchanged.
Trajectory LaneChange(const Trajectory& traj, LaneSide side,
                      double lane_width);

Trajectory ApplyPerturbation(const Trajectory& traj, PerturbationKind kind,
                             const PerturbationConfig& config);

struct TrajectoryVariant {
  VariantKind kind;
  Trajectory trajectory;
};

// The prediction followed by one entry per enabled perturbation, in
// PerturbationKind order.
std::vector<TrajectoryVariant> AgentVariants(const Trajectory& traj,
                                             const PerturbationConfig& config);

// As AgentVariants when config.perturb_ego, otherwise only the prediction.
std::vector<TrajectoryVariant> EgoVariants(const Trajectory& ego_traj,
                                           const PerturbationConfig& config);

// Ego plan of the scene with `agent_id` removed.
Trajectory RemovalEgoTrajectory(const Scene& scene, std::string_view agent_id,
                                const EgoPredictor& predictor);
Trajectory RemovalEgoTrajectory(const Scene& scene, std::string_view agent_id,
                                const PredictorConfig& config);

}  // namespace cfi

#endif  // CFI_COUNTERFACTUAL_H_
