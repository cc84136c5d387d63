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

#ifndef CFI_SCORING_H_
#define CFI_SCORING_H_

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cfi/counterfactual.h"
#include "cfi/predict.h"
#include "cfi/scene.h"

namespace cfi {

struct ScoringConfig {
  double tau = 2.0;  // collision distance threshold, meters
  bool index_weighting = true;
  PerturbationConfig perturbation;
  PredictorConfig predictor;

  friend bool operator==(const ScoringConfig&, const ScoringConfig&) = default;
};

void ValidateScoringConfig(const ScoringConfig& config);

struct CollisionInfo {
  VariantKind ego_variant = VariantKind::kPredicted;
  VariantKind agent_variant = VariantKind::kPredicted;
  int index = 0;  // k*, 0-based waypoint index

  friend bool operator==(const CollisionInfo&, const CollisionInfo&) = default;
};

// Per-object scores. Vehicle fields are meaningful for vehicles scored by
// the counterfactual method, `ps` / `norm_ps` for pedestrians. `score` is the
// value objects are ranked by during evaluation: `is` for vehicles,
// `norm_ps` for pedestrians, or the baseline score.
struct ObjectScore {
  std::string id;
  AgentKind kind = AgentKind::kVehicle;
  double raw_rs = 0.0;
  int raw_vs = 0;
  double norm_rs = 0.0;
  double norm_vs = 0.0;
  double is = 0.0;
  double ps = 0.0;
  double norm_ps = 0.0;
  std::optional<CollisionInfo> collision;
  double score = 0.0;

  friend bool operator==(const ObjectScore&, const ObjectScore&) = default;
};

struct SceneReport {
  std::string scene_id;
  int horizon = kDefaultHorizon;
  std::vector<ObjectScore> objects;  // scene agent order

  friend bool operator==(const SceneReport&, const SceneReport&) = default;
};

// Sum over k of the squared distance between same-index waypoints.
double RemovalScore(const Trajectory& base, const Trajectory& counterfactual);

// Index of the closest same-index approach (ties to the smaller index) if
// that distance is below tau.
std::optional<int> CollisionIndex(const Trajectory& ego,
                                  const Trajectory& agent, double tau);

struct VelocityScoreResult {
  int raw_vs = 0;
  std::optional<CollisionInfo> collision;
};

// Soonest collision over every (ego variant, agent variant) pair; -k* or -K
// without one. With index weighting disabled every collision scores 0.
VelocityScoreResult VelocityScore(std::span<const TrajectoryVariant> ego_variants,
                                  std::span<const TrajectoryVariant> agent_variants,
                                  const ScoringConfig& config);

// Min-max normalization into [0, 1]; all zeros when max == min.
std::vector<double> Normalize(std::span<const double> values);

// max(norm_rs, norm_vs); throws ValidationError outside [0, 1].
double Combine(double norm_rs, double norm_vs);

// Negative squared distance to the ego; throws ValidationError for
// non-pedestrians.
double PedestrianScore(const AgentState& ped, const AgentState& ego);

// Raw counterfactual scores for every agent; normalized fields are left at 0
// until NormalizeReports runs.
SceneReport ScoreScene(const Scene& scene, const ScoringConfig& config);
SceneReport ScoreScene(const Scene& scene, const ScoringConfig& config,
                       const EgoPredictor& predictor);

// Min-max normalizes raw_rs and raw_vs over every vehicle and ps over every
// pedestrian in the batch, then fills is / norm_ps / score.
void NormalizeReports(std::span<SceneReport> reports);

enum class ScoringMethod { kCounterfactual, kEverythingImportant, kInverseDistance };

std::string_view ToString(ScoringMethod method);
ScoringMethod ScoringMethodFromString(std::string_view name);

// Every object scores 1.
SceneReport BaselineEverything(const Scene& scene);
// Score is the negative distance to the ego.
SceneReport BaselineInverseDistance(const Scene& scene);

}  // namespace cfi

#endif  // CFI_SCORING_H_
