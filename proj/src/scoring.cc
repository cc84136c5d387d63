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

#include "cfi/scoring.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "cfi/errors.h"

namespace cfi {
namespace {

void RequireSameLength(const Trajectory& a, const Trajectory& b) {
  if (a.waypoints.size() != b.waypoints.size()) {
    throw ValidationError("trajectory length mismatch: " +
                          std::to_string(a.waypoints.size()) + " vs " +
                          std::to_string(b.waypoints.size()));
  }
}

}  // namespace

void ValidateScoringConfig(const ScoringConfig& config) {
  if (!std::isfinite(config.tau) || config.tau <= 0.0) {
    throw ValidationError("scoring.tau: must be > 0");
  }
  ValidatePerturbationConfig(config.perturbation);
  ValidatePredictorConfig(config.predictor);
}

double RemovalScore(const Trajectory& base, const Trajectory& counterfactual) {
  RequireSameLength(base, counterfactual);
  if (base.dt != counterfactual.dt) {
    throw ValidationError("trajectory dt mismatch");
  }
  double sum = 0.0;
  for (size_t k = 0; k < base.waypoints.size(); ++k) {
    sum += SquaredNorm(base.waypoints[k] - counterfactual.waypoints[k]);
  }
  return sum;
}

std::optional<int> CollisionIndex(const Trajectory& ego,
                                  const Trajectory& agent, double tau) {
  RequireSameLength(ego, agent);
  if (ego.waypoints.empty()) return std::nullopt;
  int best = 0;
  double best_dist = Distance(ego.waypoints[0], agent.waypoints[0]);
  for (int k = 1; k < ego.size(); ++k) {
    const double d = Distance(ego.waypoints[k], agent.waypoints[k]);
    if (d < best_dist) {
      best_dist = d;
      best = k;
    }
  }
  if (best_dist < tau) return best;
  return std::nullopt;
}

VelocityScoreResult VelocityScore(
    std::span<const TrajectoryVariant> ego_variants,
    std::span<const TrajectoryVariant> agent_variants,
    const ScoringConfig& config) {
  if (ego_variants.empty() || agent_variants.empty()) {
    throw ValidationError("velocity score needs non-empty variant lists");
  }
  const int horizon = ego_variants.front().trajectory.size();
  VelocityScoreResult result;
  for (const TrajectoryVariant& ego : ego_variants) {
    for (const TrajectoryVariant& agent : agent_variants) {
      const std::optional<int> k =
          CollisionIndex(ego.trajectory, agent.trajectory, config.tau);
      if (k && (!result.collision || *k < result.collision->index)) {
        result.collision = CollisionInfo{ego.kind, agent.kind, *k};
      }
    }
  }
  if (!result.collision) {
    result.raw_vs = -horizon;
  } else {
    result.raw_vs = config.index_weighting ? -result.collision->index : 0;
  }
  return result;
}

std::vector<double> Normalize(std::span<const double> values) {
  std::vector<double> out(values.size(), 0.0);
  if (values.empty()) return out;
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  const double min = *lo;
  const double range = *hi - min;
  if (!(range > 0.0)) return out;
  for (size_t i = 0; i < values.size(); ++i) {
    out[i] = std::clamp((values[i] - min) / range, 0.0, 1.0);
  }
  return out;
}

double Combine(double norm_rs, double norm_vs) {
  auto in_unit = [](double v) { return v >= 0.0 && v <= 1.0; };
  if (!in_unit(norm_rs) || !in_unit(norm_vs)) {
    throw ValidationError("combine: inputs must lie in [0, 1]");
  }
  return std::max(norm_rs, norm_vs);
}

double PedestrianScore(const AgentState& ped, const AgentState& ego) {
  if (ped.kind != AgentKind::kPedestrian) {
    throw ValidationError("agent '" + ped.id + "' is not a pedestrian");
  }
  return -SquaredNorm(ped.position - ego.position);
}

SceneReport ScoreScene(const Scene& scene, const ScoringConfig& config) {
  return ScoreScene(scene, config, RuleBasedEgoPlanner(config.predictor));
}

SceneReport ScoreScene(const Scene& scene, const ScoringConfig& config,
                       const EgoPredictor& predictor) {
  ValidateScoringConfig(config);
  SceneReport report;
  report.scene_id = scene.id;
  report.horizon = scene.horizon;
  if (scene.agents.empty()) return report;

  const ScenePrediction prediction = PredictAll(scene, predictor);
  const std::vector<TrajectoryVariant> ego_variants =
      EgoVariants(prediction.ego, config.perturbation);

  for (const AgentState& agent : scene.agents) {
    ObjectScore obj;
    obj.id = agent.id;
    obj.kind = agent.kind;
    if (agent.kind == AgentKind::kPedestrian) {
      obj.ps = PedestrianScore(agent, scene.ego);
    } else {
      obj.raw_rs = RemovalScore(
          prediction.ego, RemovalEgoTrajectory(scene, agent.id, predictor));
      const std::vector<TrajectoryVariant> agent_variants =
          AgentVariants(prediction.agents.at(agent.id), config.perturbation);
      const VelocityScoreResult vs =
          VelocityScore(ego_variants, agent_variants, config);
      obj.raw_vs = vs.raw_vs;
      obj.collision = vs.collision;
    }
    report.objects.push_back(std::move(obj));
  }
  return report;
}

void NormalizeReports(std::span<SceneReport> reports) {
  std::vector<ObjectScore*> vehicles;
  std::vector<ObjectScore*> pedestrians;
  for (SceneReport& r : reports) {
    for (ObjectScore& o : r.objects) {
      (o.kind == AgentKind::kVehicle ? vehicles : pedestrians).push_back(&o);
    }
  }
  std::vector<double> rs, vs, ps;
  for (const ObjectScore* o : vehicles) {
    rs.push_back(o->raw_rs);
    vs.push_back(o->raw_vs);
  }
  for (const ObjectScore* o : pedestrians) ps.push_back(o->ps);
  const std::vector<double> norm_rs = Normalize(rs);
  const std::vector<double> norm_vs = Normalize(vs);
  const std::vector<double> norm_ps = Normalize(ps);
  for (size_t i = 0; i < vehicles.size(); ++i) {
    ObjectScore& o = *vehicles[i];
    o.norm_rs = norm_rs[i];
    o.norm_vs = norm_vs[i];
    o.is = Combine(o.norm_rs, o.norm_vs);
    o.score = o.is;
  }
  for (size_t i = 0; i < pedestrians.size(); ++i) {
    pedestrians[i]->norm_ps = norm_ps[i];
    pedestrians[i]->score = norm_ps[i];
  }
}

std::string_view ToString(ScoringMethod method) {
  switch (method) {
    case ScoringMethod::kCounterfactual:
      return "counterfactual";
    case ScoringMethod::kEverythingImportant:
      return "everything_important";
    case ScoringMethod::kInverseDistance:
      return "inverse_distance";
  }
  return "unknown";
}

ScoringMethod ScoringMethodFromString(std::string_view name) {
  for (ScoringMethod m :
       {ScoringMethod::kCounterfactual, ScoringMethod::kEverythingImportant,
        ScoringMethod::kInverseDistance}) {
    if (ToString(m) == name) return m;
  }
  throw ParseError("unknown scoring method '" + std::string(name) + "'");
}

SceneReport BaselineEverything(const Scene& scene) {
  SceneReport report;
  report.scene_id = scene.id;
  report.horizon = scene.horizon;
  for (const AgentState& a : scene.agents) {
    ObjectScore o;
    o.id = a.id;
    o.kind = a.kind;
    o.score = 1.0;
    report.objects.push_back(std::move(o));
  }
  return report;
}

SceneReport BaselineInverseDistance(const Scene& scene) {
  SceneReport report;
  report.scene_id = scene.id;
  report.horizon = scene.horizon;
  for (const AgentState& a : scene.agents) {
    ObjectScore o;
    o.id = a.id;
    o.kind = a.kind;
    o.score = -Distance(a.position, scene.ego.position);
    report.objects.push_back(std::move(o));
  }
  return report;
}

}  // namespace cfi
