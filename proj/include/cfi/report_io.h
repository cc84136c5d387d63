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

// Documents exchanged between the `score`, `eval` and `render` commands.
//
// Report:      {"format_version", "method", "normalization", "manifest",
//               "scenes": [{"scene_id", "horizon", "objects": [...]}]}
// Annotations: {"format_version", "annotations": [{"scene_id", "object_id",
//               "annotator_count", "total_annotators"}, ...]}
// Evaluation:  {"format_version", "ap", "ot_f1", "ot_accuracy", ...,
//               "pr_trace": [{"threshold", "precision", "recall", "f1",
//               "accuracy"}, ...]}

#ifndef CFI_REPORT_IO_H_
#define CFI_REPORT_IO_H_

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "cfi/evaluate.h"
#include "cfi/manifest.h"
#include "cfi/scoring.h"
#include "json.hpp"

namespace cfi {

inline constexpr std::string_view kReportFormatVersion = "1.0";

enum class NormalizationScope { kBatch, kScene };

struct BatchReport {
  ScoringMethod method = ScoringMethod::kCounterfactual;
  NormalizationScope normalization = NormalizationScope::kBatch;
  RunManifest manifest;
  std::vector<SceneReport> scenes;
};

nlohmann::json ReportToJson(const BatchReport& report);
BatchReport ReportFromJson(const nlohmann::json& doc);
std::string SerializeReport(const BatchReport& report);
BatchReport LoadReport(const std::filesystem::path& path);

AnnotationSet AnnotationsFromJson(const nlohmann::json& doc);
AnnotationSet LoadAnnotations(const std::filesystem::path& path);
nlohmann::json AnnotationsToJson(const AnnotationSet& annotations);

nlohmann::json EvalResultToJson(const EvalResult& result,
                                const EvalConfig& config,
                                const std::string& report_hash);
// CSV with a header row: threshold,precision,recall,f1,accuracy.
std::string PrTableCsv(const EvalResult& result);

}  // namespace cfi

#endif  // CFI_REPORT_IO_H_
