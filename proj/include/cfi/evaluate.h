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

#ifndef CFI_EVALUATE_H_
#define CFI_EVALUATE_H_

#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "cfi/scene.h"
#include "cfi/scoring.h"

namespace cfi {

inline constexpr int kMinAnnotators = 5;

struct ObjectKey {
  std::string scene_id;
  std::string object_id;

  auto operator<=>(const ObjectKey&) const = default;
};

struct Annotation {
  int annotator_count = 0;   // annotators marking the object important
  int total_annotators = 0;  // annotators who labeled the scene

  friend bool operator==(const Annotation&, const Annotation&) = default;
};

class AnnotationSet {
 public:
  // Throws ValidationError on negative counts, count > total, total < 5 or
  // a duplicate key.
  void Add(ObjectKey key, Annotation annotation);

  const std::map<ObjectKey, Annotation>& entries() const { return entries_; }
  bool empty() const { return entries_.empty(); }

 private:
  std::map<ObjectKey, Annotation> entries_;
};

enum class GroundTruthLabel { kPositive, kNegative, kIgnored };

struct EvalConfig {
  int theta1 = 3;  // count >= theta1 -> Positive
  int theta2 = 2;  // count < theta2 -> Negative, otherwise Ignored
  std::optional<AgentKind> category_filter;

  friend bool operator==(const EvalConfig&, const EvalConfig&) = default;
};

void ValidateEvalConfig(const EvalConfig& config);

GroundTruthLabel ResolveLabel(const Annotation& annotation,
                              const EvalConfig& config);
std::map<ObjectKey, GroundTruthLabel> ResolveGroundTruth(
    const AnnotationSet& annotations, const EvalConfig& config);

struct ThresholdPoint {
  double threshold = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  double accuracy = 0.0;
};

struct ThresholdMetrics {
  double ot_f1 = 0.0;
  double ot_accuracy = 0.0;
  double f1_threshold = 0.0;
  double accuracy_threshold = 0.0;
  std::vector<ThresholdPoint> pr_trace;  // thresholds descending
};

// Non-interpolated average precision. Ignored entries are dropped first.
// Tied scores form a single operating point, so the result depends only on
// the (score, label) multiset. Throws ValidationError without positives.
double AveragePrecision(std::span<const double> scores,
                        std::span<const GroundTruthLabel> labels);

// Sweeps thresholds over the distinct scores plus one sentinel above the
// maximum (predict Positive iff score >= threshold); F1 and accuracy are
// maximized independently, ties resolved toward the higher threshold. F1 is
// 0 when there are no true positives. Throws ValidationError when nothing
// remains after dropping Ignored entries.
ThresholdMetrics OptimalThresholdMetrics(std::span<const double> scores,
                                         std::span<const GroundTruthLabel> labels);

struct EvalResult {
  double ap = 0.0;
  double ot_f1 = 0.0;
  double ot_accuracy = 0.0;
  double f1_threshold = 0.0;
  double accuracy_threshold = 0.0;
  int positives = 0;
  int negatives = 0;
  int ignored = 0;
  int unannotated = 0;  // scored objects without an annotation
  std::vector<ThresholdPoint> pr_trace;
};

// Pools (score, label) pairs over every scene. Every annotated object must be
// present in `reports`; otherwise ValidationError lists the missing keys.
EvalResult EvaluateDataset(std::span<const SceneReport> reports,
                           const AnnotationSet& annotations,
                           const EvalConfig& config);

}  // namespace cfi

#endif  // CFI_EVALUATE_H_
