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

// Brute-force reference metrics: every threshold is tried explicitly and
// every count is recomputed from scratch.

#ifndef CFI_TESTS_METRIC_ORACLE_H_
#define CFI_TESTS_METRIC_ORACLE_H_

#include <algorithm>
#include <limits>
#include <random>
#include <vector>

#include "cfi/evaluate.h"

namespace cfi::testing {

struct OracleMetrics {
  double ap = 0.0;  // meaningful only when has_positive
  bool has_positive = false;
  double ot_f1 = 0.0;
  double ot_accuracy = 0.0;
  bool f1_predicts_none = false;
  double f1_threshold = 0.0;
  bool accuracy_predicts_none = false;
  double accuracy_threshold = 0.0;
};

inline OracleMetrics BruteForceMetrics(const std::vector<double>& scores,
                                       const std::vector<GroundTruthLabel>& labels) {
  std::vector<double> s;
  std::vector<bool> pos;
  for (size_t i = 0; i < scores.size(); ++i) {
    if (labels[i] == GroundTruthLabel::kIgnored) continue;
    s.push_back(scores[i]);
    pos.push_back(labels[i] == GroundTruthLabel::kPositive);
  }
  const int n = static_cast<int>(s.size());
  auto count = [&](double t, bool want_positive) {
    int c = 0;
    for (int i = 0; i < n; ++i) c += (s[i] >= t && pos[i] == want_positive);
    return c;
  };
  OracleMetrics out;
  const int positives = static_cast<int>(std::count(pos.begin(), pos.end(), true));
  out.has_positive = positives > 0;

  // AP: mean over positives of precision at that positive's score,
  // accumulated in descending score order.
  std::vector<double> pos_scores;
  for (int i = 0; i < n; ++i) {
    if (pos[i]) pos_scores.push_back(s[i]);
  }
  std::sort(pos_scores.rbegin(), pos_scores.rend());
  double sum = 0.0;
  for (double t : pos_scores) {
    const int tp = count(t, true);
    const int fp = count(t, false);
    sum += static_cast<double>(tp) / (tp + fp);
  }
  if (positives > 0) out.ap = sum / positives;

  // Thresholds: "predict nothing" first, then every score high to low.
  std::vector<double> thresholds = s;
  std::sort(thresholds.rbegin(), thresholds.rend());
  thresholds.erase(std::unique(thresholds.begin(), thresholds.end()),
                   thresholds.end());
  thresholds.insert(thresholds.begin(), std::numeric_limits<double>::infinity());
  out.ot_f1 = -1.0;
  out.ot_accuracy = -1.0;
  for (double t : thresholds) {
    const int tp = count(t, true);
    const int fp = count(t, false);
    const int fn = positives - tp;
    const int tn = (n - positives) - fp;
    const double f1 = tp > 0 ? 2.0 * tp / (2.0 * tp + fp + fn) : 0.0;
    const double acc = static_cast<double>(tp + tn) / n;
    const bool none = t == std::numeric_limits<double>::infinity();
    if (f1 > out.ot_f1) {
      out.ot_f1 = f1;
      out.f1_predicts_none = none;
      out.f1_threshold = t;
    }
    if (acc > out.ot_accuracy) {
      out.ot_accuracy = acc;
      out.accuracy_predicts_none = none;
      out.accuracy_threshold = t;
    }
  }
  return out;
}

// Random instance with n <= 20, ties on a coarse grid about half the time
// and all three label kinds.
struct MetricInstance {
  std::vector<double> scores;
  std::vector<GroundTruthLabel> labels;
};

inline MetricInstance RandomMetricInstance(std::mt19937_64& rng) {
  MetricInstance m;
  const int n = 1 + static_cast<int>(rng() % 20);
  const bool coarse = rng() % 2 == 0;
  for (int i = 0; i < n; ++i) {
    const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    m.scores.push_back(coarse ? static_cast<double>(rng() % 5) / 4.0 : u);
    const uint64_t l = rng() % 10;
    m.labels.push_back(l < 4   ? GroundTruthLabel::kPositive
                       : l < 8 ? GroundTruthLabel::kNegative
                               : GroundTruthLabel::kIgnored);
  }
  return m;
}

}  // namespace cfi::testing

#endif  // CFI_TESTS_METRIC_ORACLE_H_
