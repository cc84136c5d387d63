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

#include "cfi/cli.h"

#include <chrono>
#include <memory>
#include <optional>

#include "CLI11.hpp"
#include "cfi/errors.h"
#include "cfi/external_predictor.h"
#include "cfi/manifest.h"
#include "cfi/pipeline.h"
#include "cfi/render.h"
#include "cfi/report_io.h"
#include "cfi/scene_io.h"
#include "cfi/synth.h"

namespace cfi::cli {
namespace {

using nlohmann::json;

// Writes to `path`, or to `out` when the path is empty or "-".
void Emit(const std::string& path, const std::string& contents,
          std::ostream& out) {
  if (path.empty() || path == "-") {
    out << contents;
  } else {
    WriteFile(path, contents);
  }
}

struct ScoreOptions {
  std::vector<std::string> scenes;
  std::string output;
  std::string method = "counterfactual";
  std::string config_path;
  double tau = 0.0;
  double speed_up_factor = 0.0;
  double lane_width = 0.0;
  std::vector<std::string> disable;
  bool no_ego_perturbation = false;
  bool no_index_weighting = false;
  double desired_speed = 0.0;
  double max_accel = 0.0;
  double max_decel = 0.0;
  double corridor_halfwidth = 0.0;
  double lookahead_gap = 0.0;
  int horizon = 0;
  double dt = 0.0;
  int theta1 = 0;
  int theta2 = 0;
  unsigned jobs = 0;
  std::string external_predictor;
  int predictor_timeout_ms = 10000;
};

struct EvalOptions {
  std::string report;
  std::string annotations;
  std::string output;
  std::string pr_table;
  int theta1 = 0;
  int theta2 = 0;
  std::string only;
  bool override_manifest = false;
};

struct GenOptions {
  std::string kind;
  uint64_t seed = 0;
  std::string output;
  std::string annotations;
  SynthSpec spec;
};

struct RenderOptions {
  std::string scene;
  std::string report;
  std::string output;
  double threshold = 0.5;
};

bool Given(const CLI::App* app, const char* name) {
  return app->count(name) > 0;
}

int RunScore(const CLI::App* cmd, const ScoreOptions& opt, std::ostream& out,
             std::ostream& err) {
  RunManifest manifest;
  const ScoringMethod method = ScoringMethodFromString(opt.method);

  if (!opt.config_path.empty()) {
    json doc;
    try {
      doc = json::parse(ReadFile(opt.config_path));
    } catch (const json::parse_error& e) {
      throw ParseError(opt.config_path + ": " + e.what());
    }
    if (!doc.is_object()) throw ParseError(opt.config_path + ": expected an object");
    for (const auto& [key, value] : doc.items()) {
      if (key == "scoring") {
        manifest.scoring = ScoringConfigFromJson(value, manifest.scoring);
      } else if (key == "eval") {
        manifest.eval = EvalConfigFromJson(value, manifest.eval);
      } else if (key == "scene_overrides") {
        if (value.contains("horizon") && !value["horizon"].is_null()) {
          manifest.overrides.horizon = value["horizon"].get<int>();
        }
        if (value.contains("dt") && !value["dt"].is_null()) {
          manifest.overrides.dt = value["dt"].get<double>();
        }
      } else {
        throw ParseError(opt.config_path + ": unknown key '" + key + "'");
      }
    }
  }

  ScoringConfig& sc = manifest.scoring;
  if (Given(cmd, "--tau")) sc.tau = opt.tau;
  if (Given(cmd, "--speed-up-factor")) {
    sc.perturbation.speed_up_factor = opt.speed_up_factor;
  }
  if (Given(cmd, "--lane-width")) sc.perturbation.lane_width = opt.lane_width;
  for (const std::string& d : opt.disable) {
    if (d == "lane_change") {
      sc.perturbation.enabled.erase(PerturbationKind::kLaneChangeLeft);
      sc.perturbation.enabled.erase(PerturbationKind::kLaneChangeRight);
    } else {
      sc.perturbation.enabled.erase(PerturbationKindFromString(d));
    }
  }
  if (opt.no_ego_perturbation) sc.perturbation.perturb_ego = false;
  if (opt.no_index_weighting) sc.index_weighting = false;
  if (Given(cmd, "--desired-speed")) sc.predictor.desired_speed = opt.desired_speed;
  if (Given(cmd, "--max-accel")) sc.predictor.max_accel = opt.max_accel;
  if (Given(cmd, "--max-decel")) sc.predictor.max_decel = opt.max_decel;
  if (Given(cmd, "--corridor-halfwidth")) {
    sc.predictor.corridor_halfwidth = opt.corridor_halfwidth;
  }
  if (Given(cmd, "--lookahead-gap")) sc.predictor.lookahead_gap = opt.lookahead_gap;
  if (Given(cmd, "--horizon")) manifest.overrides.horizon = opt.horizon;
  if (Given(cmd, "--dt")) manifest.overrides.dt = opt.dt;
  if (Given(cmd, "--theta1")) manifest.eval.theta1 = opt.theta1;
  if (Given(cmd, "--theta2")) manifest.eval.theta2 = opt.theta2;
  ValidateScoringConfig(sc);
  ValidateEvalConfig(manifest.eval);

  std::vector<Scene> scenes;
  std::vector<std::string> contents;
  for (const std::string& path : opt.scenes) {
    contents.push_back(ReadFile(path));
    Scene scene = LoadScene(path);
    if (manifest.overrides.horizon) scene.horizon = *manifest.overrides.horizon;
    if (manifest.overrides.dt) scene.dt = *manifest.overrides.dt;
    try {
      ValidateScene(scene);
    } catch (const ValidationError& e) {
      throw ValidationError(path + " (after overrides): " + e.what());
    }
    scenes.push_back(std::move(scene));
  }
  manifest.inputs = opt.scenes;
  manifest.content_hash = ContentHash(contents);

  std::unique_ptr<EgoPredictor> predictor;
  if (!opt.external_predictor.empty()) {
    predictor = std::make_unique<ExternalEgoPredictor>(
        opt.external_predictor,
        std::chrono::milliseconds(opt.predictor_timeout_ms));
    manifest.predictor = "external";
  } else {
    predictor = std::make_unique<RuleBasedEgoPlanner>(sc.predictor);
  }

  BatchReport report;
  report.method = method;
  report.normalization = scenes.size() == 1 ? NormalizationScope::kScene
                                            : NormalizationScope::kBatch;
  report.manifest = manifest;
  report.scenes = ScoreBatch(scenes, method, sc, *predictor, opt.jobs);
  Emit(opt.output, SerializeReport(report), out);
  if (!opt.output.empty() && opt.output != "-") {
    err << "scored " << scenes.size() << " scene(s) -> " << opt.output << "\n";
  }
  return kOk;
}

int RunEval(const CLI::App* cmd, const EvalOptions& opt, std::ostream& out,
            std::ostream& err) {
  const std::string report_text = ReadFile(opt.report);
  const BatchReport report = LoadReport(opt.report);
  EvalConfig config = report.manifest.eval;
  config.category_filter.reset();
  if (Given(cmd, "--theta1")) config.theta1 = opt.theta1;
  if (Given(cmd, "--theta2")) config.theta2 = opt.theta2;
  ValidateEvalConfig(config);
  if (!opt.override_manifest &&
      (config.theta1 != report.manifest.eval.theta1 ||
       config.theta2 != report.manifest.eval.theta2)) {
    throw ValidationError(
        "eval thresholds conflict with the report manifest (theta1=" +
        std::to_string(report.manifest.eval.theta1) +
        ", theta2=" + std::to_string(report.manifest.eval.theta2) +
        "); pass --override-manifest to evaluate anyway");
  }
  if (opt.only == "vehicles") {
    config.category_filter = AgentKind::kVehicle;
  } else if (opt.only == "pedestrians") {
    config.category_filter = AgentKind::kPedestrian;
  }

  const AnnotationSet annotations = LoadAnnotations(opt.annotations);
  const EvalResult result =
      EvaluateDataset(report.scenes, annotations, config);
  const std::string hash = ContentHash({report_text});
  Emit(opt.output, EvalResultToJson(result, config, hash).dump(2) + "\n", out);
  if (!opt.pr_table.empty()) WriteFile(opt.pr_table, PrTableCsv(result));
  if (!opt.output.empty() && opt.output != "-") {
    err << "AP " << result.ap << "  OT-F1 " << result.ot_f1
        << "  OT-Accuracy " << result.ot_accuracy << "\n";
  }
  return kOk;
}

int RunGen(const GenOptions& opt, std::ostream& out, std::ostream& err) {
  SynthSpec spec = opt.spec;
  spec.kind = SynthKindFromString(opt.kind);
  spec.seed = opt.seed;
  const SynthScene synth = GenerateWithLabels(spec);
  Emit(opt.output, SerializeScene(synth.scene), out);
  if (!opt.annotations.empty()) {
    // Designed-important objects get every vote, the rest none.
    AnnotationSet set;
    for (const AgentState& a : synth.scene.agents) {
      const bool important = synth.designed_important.contains(a.id);
      set.Add({synth.scene.id, a.id},
              {important ? kMinAnnotators : 0, kMinAnnotators});
    }
    WriteFile(opt.annotations, AnnotationsToJson(set).dump(2) + "\n");
  }
  if (!opt.output.empty() && opt.output != "-") {
    err << "wrote " << synth.scene.id << " -> " << opt.output << "\n";
  }
  return kOk;
}

int RunRender(const RenderOptions& opt, std::ostream& out) {
  const Scene scene = LoadScene(opt.scene);
  const BatchReport report = LoadReport(opt.report);
  const SceneReport* match = nullptr;
  for (const SceneReport& s : report.scenes) {
    if (s.scene_id == scene.id) match = &s;
  }
  if (match == nullptr) {
    throw ValidationError("report has no scene '" + scene.id + "'");
  }
  Emit(opt.output, RenderSvg(scene, *match, opt.threshold), out);
  return kOk;
}

}  // namespace

int Run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"Counterfactual object importance for driving scenes", "cfimp"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kToolVersion));

  ScoreOptions score;
  CLI::App* score_cmd =
      app.add_subcommand("score", "Score scenario files into a report");
  score_cmd->add_option("scenes", score.scenes, "Scenario files")
      ->required()
      ->check(CLI::ExistingFile);
  score_cmd->add_option("-o,--output", score.output, "Report path (default stdout)");
  score_cmd->add_option("--method", score.method, "Scoring method")
      ->check(CLI::IsMember(
          {"counterfactual", "everything_important", "inverse_distance"}));
  score_cmd->add_option("--config", score.config_path, "JSON config overriding defaults")
      ->check(CLI::ExistingFile);
  score_cmd->add_option("--tau", score.tau, "Collision threshold (m)");
  score_cmd->add_option("--speed-up-factor", score.speed_up_factor);
  score_cmd->add_option("--lane-width", score.lane_width, "Lane-change width (m)");
  score_cmd
      ->add_option("--disable", score.disable, "Disable perturbations")
      ->check(CLI::IsMember({"hard_stop", "speed_up", "lane_change",
                             "lane_change_left", "lane_change_right"}));
  score_cmd->add_flag("--no-ego-perturbation", score.no_ego_perturbation);
  score_cmd->add_flag("--no-index-weighting", score.no_index_weighting);
  score_cmd->add_option("--desired-speed", score.desired_speed);
  score_cmd->add_option("--max-accel", score.max_accel);
  score_cmd->add_option("--max-decel", score.max_decel);
  score_cmd->add_option("--corridor-halfwidth", score.corridor_halfwidth);
  score_cmd->add_option("--lookahead-gap", score.lookahead_gap);
  score_cmd->add_option("--horizon", score.horizon, "Override K");
  score_cmd->add_option("--dt", score.dt, "Override the time step (s)");
  score_cmd->add_option("--theta1", score.theta1, "Recorded for eval");
  score_cmd->add_option("--theta2", score.theta2, "Recorded for eval");
  score_cmd->add_option("--jobs", score.jobs, "Worker threads (0 = all cores)");
  score_cmd->add_option("--external-predictor", score.external_predictor,
                        "Shell command of an external ego predictor");
  score_cmd->add_option("--predictor-timeout-ms", score.predictor_timeout_ms)
      ->check(CLI::PositiveNumber);

  EvalOptions eval;
  CLI::App* eval_cmd =
      app.add_subcommand("eval", "Evaluate a report against annotations");
  eval_cmd->add_option("report", eval.report)->required()->check(CLI::ExistingFile);
  eval_cmd->add_option("annotations", eval.annotations)
      ->required()
      ->check(CLI::ExistingFile);
  eval_cmd->add_option("-o,--output", eval.output);
  eval_cmd->add_option("--pr-table", eval.pr_table, "Write the PR trace as CSV");
  eval_cmd->add_option("--theta1", eval.theta1);
  eval_cmd->add_option("--theta2", eval.theta2);
  eval_cmd->add_option("--only", eval.only)
      ->check(CLI::IsMember({"vehicles", "pedestrians"}));
  eval_cmd->add_flag("--override-manifest", eval.override_manifest);

  GenOptions gen;
  CLI::App* gen_cmd = app.add_subcommand("gen", "Generate a synthetic scene");
  gen_cmd->add_option("--kind", gen.kind)
      ->required()
      ->check(CLI::IsMember({"lead_follow", "adjacent_lane",
                             "intersection_cross", "jaywalker", "random"}));
  gen_cmd->add_option("--seed", gen.seed);
  gen_cmd->add_option("-o,--output", gen.output);
  gen_cmd->add_option("--annotations", gen.annotations,
                      "Also write fixture annotations");
  gen_cmd->add_option("--ego-speed", gen.spec.ego_speed);
  gen_cmd->add_option("--lane-width", gen.spec.lane_width);
  gen_cmd->add_option("--dt", gen.spec.dt);
  gen_cmd->add_option("--horizon", gen.spec.horizon);
  gen_cmd->add_option("--gap", gen.spec.gap);
  gen_cmd->add_option("--agent-speed", gen.spec.agent_speed);
  gen_cmd->add_option("--lateral-offset", gen.spec.lateral_offset);
  gen_cmd->add_option("--parked-offset", gen.spec.parked_offset);
  gen_cmd->add_option("--count", gen.spec.count);

  RenderOptions render;
  CLI::App* render_cmd = app.add_subcommand("render", "Draw a scored scene as SVG");
  render_cmd->add_option("scene", render.scene)->required()->check(CLI::ExistingFile);
  render_cmd->add_option("report", render.report)->required()->check(CLI::ExistingFile);
  render_cmd->add_option("-o,--output", render.output);
  render_cmd->add_option("--threshold", render.threshold);

  try {
    app.parse(std::vector<std::string>(args.rbegin(), args.rend()));
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*score_cmd) return RunScore(score_cmd, score, out, err);
    if (*eval_cmd) return RunEval(eval_cmd, eval, out, err);
    if (*gen_cmd) return RunGen(gen, out, err);
    if (*render_cmd) return RunRender(render, out);
  } catch (const ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kValidation;
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << "\n";
    return kValidation;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kRuntime;
  }
  return kUsage;
}

}  // namespace cfi::cli
