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

#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "cfi/errors.h"
#include "gtest/gtest.h"
#include "metric_oracle.h"

namespace cfi {
namespace {

using testing::BruteForceMetrics;
using testing::RandomMetricInstance;

constexpr GroundTruthLabel P = GroundTruthLabel::kPositive;
constexpr GroundTruthLabel N = GroundTruthLabel::kNegative;
constexpr GroundTruthLabel I = GroundTruthLabel::kIgnored;

Annotation Votes(int count) { return {count, 5}; }

TEST(Defaults, PublishedConstants) {
  EXPECT_EQ(EvalConfig{}.theta1, 3);
  EXPECT_EQ(EvalConfig{}.theta2, 2);
  EXPECT_EQ(kMinAnnotators, 5);
  EXPECT_EQ(kDefaultHorizon, 20);
  EXPECT_EQ(kVelocityAveragingSteps, 5);
}

TEST(ResolveLabel, DefaultThresholds) {
  const EvalConfig config;
  EXPECT_EQ(ResolveLabel(Votes(5), config), P);
  EXPECT_EQ(ResolveLabel(Votes(3), config), P);
  EXPECT_EQ(ResolveLabel(Votes(2), config), I);
  EXPECT_EQ(ResolveLabel(Votes(1), config), N);
  EXPECT_EQ(ResolveLabel(Votes(0), config), N);
}

TEST(ResolveLabel, EqualThresholdsLeaveNothingIgnored) {
  const EvalConfig config{.theta1 = 2, .theta2 = 2, .category_filter = {}};
  EXPECT_EQ(ResolveLabel(Votes(2), config), P);
  EXPECT_EQ(ResolveLabel(Votes(1), config), N);
}

TEST(EvalConfig, RejectsInvertedThresholds) {
  EXPECT_THROW(ValidateEvalConfig({.theta1 = 2, .theta2 = 3, .category_filter = {}}),
               ValidationError);
  EXPECT_THROW(ValidateEvalConfig({.theta1 = 2, .theta2 = -1, .category_filter = {}}),
               ValidationError);
}

TEST(AnnotationSet, Validation) {
  AnnotationSet set;
  set.Add({"s", "a"}, Votes(3));
  EXPECT_THROW(set.Add({"s", "a"}, Votes(1)), ValidationError);
  EXPECT_THROW(set.Add({"s", "b"}, {3, 4}), ValidationError);
  EXPECT_THROW(set.Add({"s", "c"}, {6, 5}), ValidationError);
  EXPECT_THROW(set.Add({"s", "d"}, {-1, 5}), ValidationError);
}

TEST(AveragePrecision, ClosedForms) {
  EXPECT_DOUBLE_EQ(AveragePrecision(std::vector<double>{0.9, 0.8, 0.7},
                                    std::vector{P, N, P}),
                   (1.0 + 2.0 / 3.0) / 2.0);
  EXPECT_EQ(AveragePrecision(std::vector<double>{0.1, 0.5, 0.3},
                             std::vector{P, P, P}),
            1.0);
  EXPECT_THROW(AveragePrecision(std::vector<double>{0.1}, std::vector{N}),
               ValidationError);
}

TEST(AveragePrecision, AllEqualScoresGivePrevalence) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 30);
    std::vector<double> scores(n, 1.0);
    std::vector<GroundTruthLabel> labels;
    int positives = 0;
    for (int i = 0; i < n; ++i) {
      const bool p = rng() % 3 == 0 || (i == n - 1 && positives == 0);
      positives += p;
      labels.push_back(p ? P : N);
    }
    EXPECT_DOUBLE_EQ(AveragePrecision(scores, labels),
                     static_cast<double>(positives) / n);
  }
}

TEST(OptimalThreshold, ClosedForms) {
  const ThresholdMetrics perfect =
      OptimalThresholdMetrics(std::vector<double>{0.9, 0.1}, std::vector{P, N});
  EXPECT_EQ(perfect.ot_f1, 1.0);
  EXPECT_EQ(perfect.ot_accuracy, 1.0);
  EXPECT_EQ(perfect.f1_threshold, 0.9);
  EXPECT_EQ(perfect.pr_trace.size(), 3u);

  const ThresholdMetrics negatives =
      OptimalThresholdMetrics(std::vector<double>{0.3, 0.7}, std::vector{N, N});
  EXPECT_EQ(negatives.ot_f1, 0.0);
  EXPECT_EQ(negatives.ot_accuracy, 1.0);
  EXPECT_GT(negatives.accuracy_threshold, 0.7);

  const ThresholdMetrics inverted =
      OptimalThresholdMetrics(std::vector<double>{0.9, 0.1}, std::vector{N, P});
  EXPECT_DOUBLE_EQ(inverted.ot_f1, 2.0 / 3.0);
  EXPECT_EQ(inverted.f1_threshold, 0.1);

  EXPECT_THROW(OptimalThresholdMetrics(std::vector<double>{0.5}, std::vector{I}),
               ValidationError);
}

TEST(MetricsOracle, MatchBruteForceExactly) {
  std::mt19937_64 rng(20261015);
  int with_positive = 0;
  for (int trial = 0; trial < 2000; ++trial) {
    const auto m = RandomMetricInstance(rng);
    const auto oracle = BruteForceMetrics(m.scores, m.labels);
    bool labeled = false;
    for (GroundTruthLabel l : m.labels) labeled |= l != I;
    if (!labeled) {
      EXPECT_THROW(OptimalThresholdMetrics(m.scores, m.labels), ValidationError);
      continue;
    }
    const ThresholdMetrics ot = OptimalThresholdMetrics(m.scores, m.labels);
    EXPECT_EQ(ot.ot_f1, oracle.ot_f1) << "trial " << trial;
    EXPECT_EQ(ot.ot_accuracy, oracle.ot_accuracy) << "trial " << trial;
    if (!oracle.f1_predicts_none) {
      EXPECT_EQ(ot.f1_threshold, oracle.f1_threshold) << "trial " << trial;
    }
    if (!oracle.accuracy_predicts_none) {
      EXPECT_EQ(ot.accuracy_threshold, oracle.accuracy_threshold);
    }
    if (oracle.has_positive) {
      ++with_positive;
      EXPECT_EQ(AveragePrecision(m.scores, m.labels), oracle.ap)
          << "trial " << trial;
    }
  }
  EXPECT_GT(with_positive, 1000);
}

TEST(MetricsProperty, InvariantUnderIncreasingTransforms) {
  std::mt19937_64 rng(7);
  const auto transforms = {
      +[](double x) { return 3.0 * x + 5.0; },
      +[](double x) { return std::exp(4.0 * x); },
      +[](double x) { return x * x * x - 100.0; },
  };
  for (int trial = 0; trial < 300; ++trial) {
    auto m = RandomMetricInstance(rng);
    m.labels[0] = P;
    const double ap = AveragePrecision(m.scores, m.labels);
    const ThresholdMetrics ot = OptimalThresholdMetrics(m.scores, m.labels);
    for (auto f : transforms) {
      std::vector<double> t;
      for (double s : m.scores) t.push_back(f(s));
      EXPECT_EQ(AveragePrecision(t, m.labels), ap);
      const ThresholdMetrics ot2 = OptimalThresholdMetrics(t, m.labels);
      EXPECT_EQ(ot2.ot_f1, ot.ot_f1);
      EXPECT_EQ(ot2.ot_accuracy, ot.ot_accuracy);
    }
  }
}

TEST(MetricsProperty, AddingIgnoredChangesNothing) {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 300; ++trial) {
    auto m = RandomMetricInstance(rng);
    m.labels[0] = P;
    const double ap = AveragePrecision(m.scores, m.labels);
    const ThresholdMetrics ot = OptimalThresholdMetrics(m.scores, m.labels);
    m.scores.push_back(static_cast<double>(rng() % 7) - 3.0);
    m.labels.push_back(I);
    EXPECT_EQ(AveragePrecision(m.scores, m.labels), ap);
    const ThresholdMetrics ot2 = OptimalThresholdMetrics(m.scores, m.labels);
    EXPECT_EQ(ot2.ot_f1, ot.ot_f1);
    EXPECT_EQ(ot2.ot_accuracy, ot.ot_accuracy);
  }
}

ObjectScore Obj(const std::string& id, double score,
                AgentKind kind = AgentKind::kVehicle) {
  ObjectScore o;
  o.id = id;
  o.kind = kind;
  o.score = score;
  return o;
}

TEST(EvaluateDataset, IndicatorScoresGivePerfectAp) {
  std::vector<SceneReport> reports(1);
  reports[0].scene_id = "s";
  reports[0].objects = {Obj("a", 1), Obj("b", 0), Obj("c", 1)};
  AnnotationSet ann;
  ann.Add({"s", "a"}, Votes(4));
  ann.Add({"s", "b"}, Votes(0));
  ann.Add({"s", "c"}, Votes(5));
  const EvalResult r = EvaluateDataset(reports, ann, EvalConfig{});
  EXPECT_EQ(r.ap, 1.0);
  EXPECT_EQ(r.ot_f1, 1.0);
  EXPECT_EQ(r.positives, 2);
  EXPECT_EQ(r.negatives, 1);
}

TEST(EvaluateDataset, PoolsScenesLikeOneList) {
  std::vector<SceneReport> reports(2);
  reports[0].scene_id = "s1";
  reports[0].objects = {Obj("a", 0.9), Obj("b", 0.2), Obj("p", 0.5, AgentKind::kPedestrian)};
  reports[1].scene_id = "s2";
  reports[1].objects = {Obj("a", 0.4), Obj("c", 0.7), Obj("d", 0.4)};
  AnnotationSet ann;
  ann.Add({"s1", "a"}, Votes(5));
  ann.Add({"s1", "b"}, Votes(1));
  ann.Add({"s1", "p"}, Votes(3));
  ann.Add({"s2", "a"}, Votes(2));
  ann.Add({"s2", "c"}, Votes(0));
  ann.Add({"s2", "d"}, Votes(4));
  const EvalResult r = EvaluateDataset(reports, ann, EvalConfig{});

  const std::vector<double> scores = {0.9, 0.2, 0.5, 0.4, 0.7, 0.4};
  const std::vector<GroundTruthLabel> labels = {P, N, P, I, N, P};
  const auto oracle = BruteForceMetrics(scores, labels);
  EXPECT_EQ(r.ap, oracle.ap);
  EXPECT_EQ(r.ot_f1, oracle.ot_f1);
  EXPECT_EQ(r.ot_accuracy, oracle.ot_accuracy);
  EXPECT_EQ(r.ignored, 1);
  // Ranking P .9, N .7, P .5, P .4 (I dropped), N .2.
  EXPECT_DOUBLE_EQ(r.ap, (1.0 + 2.0 / 3.0 + 3.0 / 4.0) / 3.0);

  EvalConfig peds;
  peds.category_filter = AgentKind::kPedestrian;
  const EvalResult rp = EvaluateDataset(reports, ann, peds);
  EXPECT_EQ(rp.positives, 1);
  EXPECT_EQ(rp.negatives, 0);
}

TEST(EvaluateDataset, Errors) {
  std::vector<SceneReport> reports(1);
  reports[0].scene_id = "s";
  reports[0].objects = {Obj("a", 1), Obj("b", 0)};
  AnnotationSet ann;
  ann.Add({"s", "a"}, Votes(4));
  ann.Add({"s", "b"}, Votes(0));

  EvalConfig peds;
  peds.category_filter = AgentKind::kPedestrian;
  try {
    EvaluateDataset(reports, ann, peds);
    FAIL() << "expected ValidationError";
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("no objects after filter"),
              std::string::npos);
  }

  AnnotationSet extra = ann;
  extra.Add({"s", "ghost"}, Votes(4));
  EXPECT_THROW(EvaluateDataset(reports, extra, EvalConfig{}), ValidationError);
  EXPECT_THROW(EvaluateDataset(reports, ann, {.theta1 = 1, .theta2 = 2,
                                              .category_filter = {}}),
               ValidationError);
}

TEST(EvaluateDataset, UnannotatedObjectsAreCountedAndSkipped) {
  std::vector<SceneReport> reports(1);
  reports[0].scene_id = "s";
  reports[0].objects = {Obj("a", 1), Obj("b", 0), Obj("x", 7)};
  AnnotationSet ann;
  ann.Add({"s", "a"}, Votes(4));
  ann.Add({"s", "b"}, Votes(0));
  const EvalResult r = EvaluateDataset(reports, ann, EvalConfig{});
  EXPECT_EQ(r.unannotated, 1);
  EXPECT_EQ(r.ap, 1.0);
}

}  // namespace
}  // namespace cfi
