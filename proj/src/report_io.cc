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

#include "cfi/report_io.h"

#include <cstdio>

#include "cfi/errors.h"
#include "cfi/scene_io.h"

namespace cfi {
namespace {

using nlohmann::json;

json ObjectToJson(const ObjectScore& o, ScoringMethod method) {
  json j = {{"id", o.id},
            {"kind", std::string(ToString(o.kind))},
            {"score", o.score}};
  if (method != ScoringMethod::kCounterfactual) return j;
  if (o.kind == AgentKind::kPedestrian) {
    j["ps"] = o.ps;
    j["norm_ps"] = o.norm_ps;
    return j;
  }
  j["raw_rs"] = o.raw_rs;
  j["raw_vs"] = o.raw_vs;
  j["norm_rs"] = o.norm_rs;
  j["norm_vs"] = o.norm_vs;
  j["is"] = o.is;
  if (o.collision) {
    j["collision"] = {
        {"ego_variant", std::string(ToString(o.collision->ego_variant))},
        {"agent_variant", std::string(ToString(o.collision->agent_variant))},
        {"index", o.collision->index}};
  } else {
    j["collision"] = nullptr;
  }
  return j;
}

template <typename T>
T Get(const json& j, const char* key, const std::string& where) {
  const auto it = j.find(key);
  if (it == j.end()) throw ParseError(where + ": missing field '" + key + "'");
  try {
    return it->get<T>();
  } catch (const json::exception&) {
    throw ParseError(where + "." + key + ": wrong type");
  }
}

ObjectScore ObjectFromJson(const json& j, ScoringMethod method,
                           const std::string& where) {
  ObjectScore o;
  o.id = Get<std::string>(j, "id", where);
  o.kind = AgentKindFromString(Get<std::string>(j, "kind", where));
  o.score = Get<double>(j, "score", where);
  if (method != ScoringMethod::kCounterfactual) return o;
  if (o.kind == AgentKind::kPedestrian) {
    o.ps = Get<double>(j, "ps", where);
    o.norm_ps = Get<double>(j, "norm_ps", where);
    return o;
  }
  o.raw_rs = Get<double>(j, "raw_rs", where);
  o.raw_vs = Get<int>(j, "raw_vs", where);
  o.norm_rs = Get<double>(j, "norm_rs", where);
  o.norm_vs = Get<double>(j, "norm_vs", where);
  o.is = Get<double>(j, "is", where);
  if (const auto c = j.find("collision"); c != j.end() && !c->is_null()) {
    CollisionInfo info;
    info.ego_variant =
        VariantKindFromString(Get<std::string>(*c, "ego_variant", where));
    info.agent_variant =
        VariantKindFromString(Get<std::string>(*c, "agent_variant", where));
    info.index = Get<int>(*c, "index", where);
    o.collision = info;
  }
  return o;
}

json ParseJson(std::string_view text, const std::string& what) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError("malformed " + what + " document: " + e.what());
  }
}

}  // namespace

json ReportToJson(const BatchReport& report) {
  json scenes = json::array();
  for (const SceneReport& s : report.scenes) {
    json objects = json::array();
    for (const ObjectScore& o : s.objects) {
      objects.push_back(ObjectToJson(o, report.method));
    }
    scenes.push_back({{"scene_id", s.scene_id},
                      {"horizon", s.horizon},
                      {"objects", std::move(objects)}});
  }
  return {{"format_version", std::string(kReportFormatVersion)},
          {"method", std::string(ToString(report.method))},
          {"normalization",
           report.normalization == NormalizationScope::kBatch ? "batch"
                                                              : "scene"},
          {"manifest", ManifestToJson(report.manifest)},
          {"scenes", std::move(scenes)}};
}

BatchReport ReportFromJson(const json& doc) {
  if (!doc.is_object()) throw ParseError("report must be an object");
  CheckFormatVersion(doc, 1);
  BatchReport report;
  report.method =
      ScoringMethodFromString(Get<std::string>(doc, "method", "report"));
  const std::string scope = Get<std::string>(doc, "normalization", "report");
  if (scope == "batch") {
    report.normalization = NormalizationScope::kBatch;
  } else if (scope == "scene") {
    report.normalization = NormalizationScope::kScene;
  } else {
    throw ParseError("report.normalization: unknown scope '" + scope + "'");
  }
  if (!doc.contains("manifest")) {
    throw ParseError("report: missing field 'manifest'");
  }
  report.manifest = ManifestFromJson(doc.at("manifest"));
  const json scenes = Get<json>(doc, "scenes", "report");
  if (!scenes.is_array()) throw ParseError("report.scenes: expected an array");
  for (size_t i = 0; i < scenes.size(); ++i) {
    const std::string where = "report.scenes[" + std::to_string(i) + "]";
    SceneReport s;
    s.scene_id = Get<std::string>(scenes[i], "scene_id", where);
    s.horizon = Get<int>(scenes[i], "horizon", where);
    const json objects = Get<json>(scenes[i], "objects", where);
    if (!objects.is_array()) throw ParseError(where + ".objects: expected an array");
    for (size_t k = 0; k < objects.size(); ++k) {
      s.objects.push_back(ObjectFromJson(
          objects[k], report.method,
          where + ".objects[" + std::to_string(k) + "]"));
    }
    report.scenes.push_back(std::move(s));
  }
  return report;
}

std::string SerializeReport(const BatchReport& report) {
  return ReportToJson(report).dump(2) + "\n";
}

BatchReport LoadReport(const std::filesystem::path& path) {
  try {
    return ReportFromJson(ParseJson(ReadFile(path), "report"));
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

AnnotationSet AnnotationsFromJson(const json& doc) {
  if (!doc.is_object()) throw ParseError("annotation document must be an object");
  CheckFormatVersion(doc, 1);
  const json records = Get<json>(doc, "annotations", "annotations");
  if (!records.is_array()) {
    throw ParseError("annotations: expected an array");
  }
  AnnotationSet set;
  for (size_t i = 0; i < records.size(); ++i) {
    const std::string where = "annotations[" + std::to_string(i) + "]";
    ObjectKey key{Get<std::string>(records[i], "scene_id", where),
                  Get<std::string>(records[i], "object_id", where)};
    Annotation a{Get<int>(records[i], "annotator_count", where),
                 Get<int>(records[i], "total_annotators", where)};
    set.Add(std::move(key), a);
  }
  return set;
}

AnnotationSet LoadAnnotations(const std::filesystem::path& path) {
  try {
    return AnnotationsFromJson(ParseJson(ReadFile(path), "annotation"));
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  } catch (const ValidationError& e) {
    throw ValidationError(path.string() + ": " + e.what());
  }
}

json AnnotationsToJson(const AnnotationSet& annotations) {
  json records = json::array();
  for (const auto& [key, a] : annotations.entries()) {
    records.push_back({{"scene_id", key.scene_id},
                       {"object_id", key.object_id},
                       {"annotator_count", a.annotator_count},
                       {"total_annotators", a.total_annotators}});
  }
  return {{"format_version", "1.0"}, {"annotations", std::move(records)}};
}

json EvalResultToJson(const EvalResult& result, const EvalConfig& config,
                      const std::string& report_hash) {
  json trace = json::array();
  for (const ThresholdPoint& p : result.pr_trace) {
    trace.push_back({{"threshold", p.threshold},
                     {"precision", p.precision},
                     {"recall", p.recall},
                     {"f1", p.f1},
                     {"accuracy", p.accuracy}});
  }
  return {{"format_version", std::string(kReportFormatVersion)},
          {"tool_version", std::string(kToolVersion)},
          {"report_hash", report_hash},
          {"config", EvalConfigToJson(config)},
          {"ap", result.ap},
          {"ot_f1", result.ot_f1},
          {"ot_f1_threshold", result.f1_threshold},
          {"ot_accuracy", result.ot_accuracy},
          {"ot_accuracy_threshold", result.accuracy_threshold},
          {"counts",
           {{"positive", result.positives},
            {"negative", result.negatives},
            {"ignored", result.ignored},
            {"unannotated", result.unannotated}}},
          {"pr_trace", std::move(trace)}};
}

std::string PrTableCsv(const EvalResult& result) {
  std::string out = "threshold,precision,recall,f1,accuracy\n";
  char line[160];
  for (const ThresholdPoint& p : result.pr_trace) {
    std::snprintf(line, sizeof(line), "%.17g,%.17g,%.17g,%.17g,%.17g\n",
                  p.threshold, p.precision, p.recall, p.f1, p.accuracy);
    out += line;
  }
  return out;
}

}  // namespace cfi
