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

#include "cfi/evaluate.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "cfi/errors.h"

namespace cfi {
namespace {

struct Scored {
  double score;
  bool positive;
};

// Drops Ignored entries and sorts by descending score.
std::vector<Scored> Prepare(std::span<const double> scores,
                            std::span<const GroundTruthLabel> labels) {
  if (scores.size() != labels.size()) {
    throw ValidationError("scores and labels differ in length");
  }
  std::vector<Scored> out;
  out.reserve(scores.size());
  for (size_t i = 0; i < scores.size(); ++i) {
    if (!std::isfinite(scores[i])) {
      throw ValidationError("non-finite score at index " + std::to_string(i));
    }
    if (labels[i] == GroundTruthLabel::kIgnored) continue;
    out.push_back({scores[i], labels[i] == GroundTruthLabel::kPositive});
  }
  std::stable_sort(out.begin(), out.end(), [](const Scored& a, const Scored& b) {
    return a.score > b.score;
  });
  return out;
}

// Calls visit(threshold, tp, fp) once per distinct score, descending, with
// the cumulative counts of entries scoring >= threshold.
template <typename Visit>
void SweepThresholds(const std::vector<Scored>& sorted, Visit visit) {
  int tp = 0;
  int fp = 0;
  for (size_t i = 0; i < sorted.size();) {
    const double threshold = sorted[i].score;
    while (i < sorted.size() && sorted[i].score == threshold) {
      (sorted[i].positive ? tp : fp) += 1;
      ++i;
    }
    visit(threshold, tp, fp);
  }
}

}  // namespace

void AnnotationSet::Add(ObjectKey key, Annotation annotation) {
  const std::string where = "annotation (" + key.scene_id + ", " +
                            key.object_id + ")";
  if (annotation.total_annotators < kMinAnnotators) {
    throw ValidationError(where + ": total_annotators must be >= " +
                          std::to_string(kMinAnnotators));
  }
  if (annotation.annotator_count < 0 ||
      annotation.annotator_count > annotation.total_annotators) {
    throw ValidationError(where +
                          ": annotator_count must lie in [0, total_annotators]");
  }
  if (!entries_.emplace(std::move(key), annotation).second) {
    throw ValidationError(where + ": duplicate record");
  }
}

void ValidateEvalConfig(const EvalConfig& config) {
  if (config.theta2 < 0 || config.theta1 < config.theta2) {
    throw ValidationError("eval thresholds must satisfy theta1 >= theta2 >= 0");
  }
}

GroundTruthLabel ResolveLabel(const Annotation& annotation,
                              const EvalConfig& config) {
  if (annotation.annotator_count > annotation.total_annotators) {
    throw ValidationError("annotator_count exceeds total_annotators");
  }
  if (annotation.annotator_count >= config.theta1) {
    return GroundTruthLabel::kPositive;
  }
  if (annotation.annotator_count < config.theta2) {
    return GroundTruthLabel::kNegative;
  }
  return GroundTruthLabel::kIgnored;
}

std::map<ObjectKey, GroundTruthLabel> ResolveGroundTruth(
    const AnnotationSet& annotations, const EvalConfig& config) {
  ValidateEvalConfig(config);
  std::map<ObjectKey, GroundTruthLabel> out;
  for (const auto& [key, annotation] : annotations.entries()) {
    out.emplace(key, ResolveLabel(annotation, config));
  }
  return out;
}

double AveragePrecision(std::span<const double> scores,
                        std::span<const GroundTruthLabel> labels) {
  const std::vector<Scored> sorted = Prepare(scores, labels);
  const auto positives = std::count_if(sorted.begin(), sorted.end(),
                                       [](const Scored& s) { return s.positive; });
  if (positives == 0) {
    throw ValidationError("average precision needs at least one positive");
  }
  double ap = 0.0;
  int prev_tp = 0;
  SweepThresholds(sorted, [&](double, int tp, int fp) {
    // One term per positive, so tied positives share their group precision.
    const double precision = static_cast<double>(tp) / (tp + fp);
    for (; prev_tp < tp; ++prev_tp) ap += precision;
  });
  return ap / static_cast<double>(positives);
}

ThresholdMetrics OptimalThresholdMetrics(
    std::span<const double> scores, std::span<const GroundTruthLabel> labels) {
  const std::vector<Scored> sorted = Prepare(scores, labels);
  if (sorted.empty()) {
    throw ValidationError("no labeled entries to evaluate");
  }
  const int n = static_cast<int>(sorted.size());
  const int positives = static_cast<int>(std::count_if(
      sorted.begin(), sorted.end(), [](const Scored& s) { return s.positive; }));
  const int negatives = n - positives;

  ThresholdMetrics out;
  auto add_point = [&](double threshold, int tp, int fp) {
    ThresholdPoint p;
    p.threshold = threshold;
    p.precision = tp + fp > 0 ? static_cast<double>(tp) / (tp + fp) : 1.0;
    p.recall = positives > 0 ? static_cast<double>(tp) / positives : 0.0;
    const int fn = positives - tp;
    p.f1 = tp > 0 ? 2.0 * tp / (2.0 * tp + fp + fn) : 0.0;
    p.accuracy = static_cast<double>(tp + (negatives - fp)) / n;
    out.pr_trace.push_back(p);
  };
  const double sentinel = std::nextafter(
      sorted.front().score, std::numeric_limits<double>::infinity());
  add_point(sentinel, 0, 0);
  SweepThresholds(sorted, add_point);

  out.ot_f1 = -1.0;
  out.ot_accuracy = -1.0;
  for (const ThresholdPoint& p : out.pr_trace) {
    if (p.f1 > out.ot_f1) {
      out.ot_f1 = p.f1;
      out.f1_threshold = p.threshold;
    }
    if (p.accuracy > out.ot_accuracy) {
      out.ot_accuracy = p.accuracy;
      out.accuracy_threshold = p.threshold;
    }
  }
  return out;
}

EvalResult EvaluateDataset(std::span<const SceneReport> reports,
                           const AnnotationSet& annotations,
                           const EvalConfig& config) {
  ValidateEvalConfig(config);
  std::map<ObjectKey, const ObjectScore*> scored;
  for (const SceneReport& r : reports) {
    for (const ObjectScore& o : r.objects) {
      scored.emplace(ObjectKey{r.scene_id, o.id}, &o);
    }
  }

  std::vector<std::string> missing;
  for (const auto& [key, annotation] : annotations.entries()) {
    if (!scored.contains(key)) {
      missing.push_back(key.scene_id + "/" + key.object_id);
    }
  }
  if (!missing.empty()) {
    std::ostringstream msg;
    msg << missing.size() << " annotated object(s) missing from the report:";
    for (const std::string& m : missing) msg << ' ' << m;
    throw ValidationError(msg.str());
  }

  EvalResult result;
  std::vector<double> scores;
  std::vector<GroundTruthLabel> labels;
  for (const auto& [key, object] : scored) {
    if (config.category_filter && object->kind != *config.category_filter) {
      continue;
    }
    const auto it = annotations.entries().find(key);
    if (it == annotations.entries().end()) {
      ++result.unannotated;
      continue;
    }
    const GroundTruthLabel label = ResolveLabel(it->second, config);
    switch (label) {
      case GroundTruthLabel::kPositive:
        ++result.positives;
        break;
      case GroundTruthLabel::kNegative:
        ++result.negatives;
        break;
      case GroundTruthLabel::kIgnored:
        ++result.ignored;
        break;
    }
    scores.push_back(object->score);
    labels.push_back(label);
  }
  if (scores.empty()) {
    throw ValidationError("no objects after filter");
  }
  result.ap = AveragePrecision(scores, labels);
  ThresholdMetrics ot = OptimalThresholdMetrics(scores, labels);
  result.ot_f1 = ot.ot_f1;
  result.ot_accuracy = ot.ot_accuracy;
  result.f1_threshold = ot.f1_threshold;
  result.accuracy_threshold = ot.accuracy_threshold;
  result.pr_trace = std::move(ot.pr_trace);
  return result;
}

}  // namespace cfi
