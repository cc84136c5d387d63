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

#ifndef CFI_PREDICT_H_
#define CFI_PREDICT_H_

#include <map>
#include <optional>
#include <string>

#include "cfi/scene.h"

namespace cfi {

// Parameters of the rule-based ego planner.
struct PredictorConfig {
  double desired_speed = 8.0;  // m/s
  double max_accel = 2.0;      // m/s^2
  double max_decel = 4.0;      // m/s^2
  // Unset means half the scene's lane width.
  std::optional<double> corridor_halfwidth;
  double lookahead_gap = 6.0;  // m

  friend bool operator==(const PredictorConfig&,
                         const PredictorConfig&) = default;
};

// Throws ValidationError unless every parameter is finite and > 0.
void ValidatePredictorConfig(const PredictorConfig& config);

// Projects the agent forward with the mean of its 5 most recent per-step
// displacements (history followed by the current position), so waypoint k
// (1-based) sits at position + k * dt * v.
Trajectory ConstantVelocityPredict(const AgentState& agent, int horizon,
                                   double dt);

// Deterministic corridor-following longitudinal planner along scene.route.
//
// At step k the ego sits at station s_k with speed v_k. Every agent is
// propagated with ConstantVelocityPredict to time k * dt; the ego is blocked
// if some agent lies within corridor_halfwidth of the route laterally and at
// most v_k^2 / (2 max_decel) + lookahead_gap ahead along it. Then
//   s_{k+1} = s_k + v_k dt
//   v_{k+1} = blocked ? max(0, v_k - max_decel dt)
//                     : min(desired, v_k + max_accel dt)
// with v_0 = min(ego.speed, desired_speed) and s_0 the ego's route station.
// Waypoint k is the route point at s_k, k = 1..K.
Trajectory EgoPlan(const Scene& scene, const PredictorConfig& config);

// Source of ego trajectories. The rule-based planner is the default; an
// external model can be plugged in through ExternalEgoPredictor.
class EgoPredictor {
 public:
  virtual ~EgoPredictor() = default;
  virtual Trajectory Plan(const Scene& scene) const = 0;
  virtual std::string Name() const = 0;
};

class RuleBasedEgoPlanner : public EgoPredictor {
 public:
  explicit RuleBasedEgoPlanner(PredictorConfig config);
  Trajectory Plan(const Scene& scene) const override;
  std::string Name() const override { return "rule_based"; }

 private:
  PredictorConfig config_;
};

struct ScenePrediction {
  Trajectory ego;
  std::map<std::string, Trajectory> agents;  // by agent id
};

ScenePrediction PredictAll(const Scene& scene, const EgoPredictor& ego);
ScenePrediction PredictAll(const Scene& scene, const PredictorConfig& config);

}  // namespace cfi

#endif  // CFI_PREDICT_H_
