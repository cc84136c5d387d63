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

#include <filesystem>
#include <sstream>
#include <string>
#include <vector>

#include "cfi/scene_io.h"
#include "gtest/gtest.h"
#include "json.hpp"
#include "metric_oracle.h"
#include "test_util.h"

namespace cfi {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome Cli(const std::vector<std::string>& args) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = cli::Run(args, out, err);
  return {code, out.str(), err.str()};
}

int CountOf(const std::string& haystack, const std::string& needle) {
  int n = 0;
  for (size_t pos = haystack.find(needle); pos != std::string::npos;
       pos = haystack.find(needle, pos + 1)) {
    ++n;
  }
  return n;
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = cfi::testing::TempDir(
        ::testing::UnitTest::GetInstance()->current_test_info()->name());
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string Path(const std::string& name) const { return (dir_ / name).string(); }

  std::string Gen(const std::string& kind, int seed,
                  std::vector<std::string> extra = {}) {
    const std::string path = Path(kind + "_" + std::to_string(seed) + ".json");
    std::vector<std::string> args = {"gen", "--kind", kind, "--seed",
                                     std::to_string(seed), "-o", path};
    args.insert(args.end(), extra.begin(), extra.end());
    const Outcome o = Cli(args);
    EXPECT_EQ(o.code, 0) << o.err;
    return path;
  }

  fs::path dir_;
};

TEST_F(CliTest, ScoreThreeScenesGivesThreeBlocks) {
  const std::vector<std::string> scenes = {Gen("lead_follow", 1),
                                           Gen("adjacent_lane", 2),
                                           Gen("jaywalker", 3)};
  std::vector<std::string> args = {"score"};
  args.insert(args.end(), scenes.begin(), scenes.end());
  const Outcome o = Cli(args);
  ASSERT_EQ(o.code, 0) << o.err;
  const json report = json::parse(o.out);
  ASSERT_EQ(report["scenes"].size(), 3u);
  EXPECT_EQ(report["scenes"][0]["scene_id"], "lead_follow_1");
  EXPECT_EQ(report["normalization"], "batch");
  EXPECT_EQ(report["method"], "counterfactual");
  EXPECT_EQ(report["manifest"]["inputs"].size(), 3u);
  EXPECT_TRUE(report["manifest"]["content_hash"].get<std::string>().starts_with(
      "fnv1a64:"));
}

TEST_F(CliTest, SingleSceneNormalizesWithinTheScene) {
  const Outcome o = Cli({"score", Gen("lead_follow", 1)});
  ASSERT_EQ(o.code, 0) << o.err;
  EXPECT_EQ(json::parse(o.out)["normalization"], "scene");
}

TEST_F(CliTest, DisableLaneChangeIsRecordedAndDropsTheCollision) {
  const std::string scene =
      Gen("adjacent_lane", 0, {"--gap", "2", "--agent-speed", "8"});
  const Outcome full = Cli({"score", scene});
  const Outcome off = Cli({"score", scene, "--disable", "lane_change"});
  ASSERT_EQ(full.code, 0) << full.err;
  ASSERT_EQ(off.code, 0) << off.err;
  const json a = json::parse(full.out);
  const json b = json::parse(off.out);
  EXPECT_GT(a["scenes"][0]["objects"][0]["raw_vs"].get<int>(), -20);
  EXPECT_EQ(b["scenes"][0]["objects"][0]["raw_vs"].get<int>(), -20);
  EXPECT_EQ(b["manifest"]["config"]["scoring"]["perturbation"]["enabled"],
            json({"hard_stop", "speed_up"}));
}

TEST_F(CliTest, RepeatedAndParallelRunsAreByteIdentical) {
  std::vector<std::string> args = {"score"};
  for (int seed = 0; seed < 6; ++seed) args.push_back(Gen("random", seed, {"--count", "5"}));
  std::vector<std::string> one = args;
  one.insert(one.end(), {"--jobs", "1"});
  std::vector<std::string> four = args;
  four.insert(four.end(), {"--jobs", "4"});
  const Outcome a = Cli(one);
  const Outcome b = Cli(one);
  const Outcome c = Cli(four);
  ASSERT_EQ(a.code, 0) << a.err;
  EXPECT_EQ(a.out, b.out);
  EXPECT_EQ(a.out, c.out);
}

TEST_F(CliTest, ConfigFileAndFlagsCompose) {
  WriteFile(Path("config.json"),
            R"({"scoring": {"tau": 1.5}, "eval": {"theta1": 4},
                "scene_overrides": {"horizon": 12}})");
  const Outcome o = Cli({"score", Gen("lead_follow", 1), "--config",
                         Path("config.json"), "--no-index-weighting"});
  ASSERT_EQ(o.code, 0) << o.err;
  const json r = json::parse(o.out);
  const json& config = r["manifest"]["config"];
  EXPECT_EQ(config["scoring"]["tau"], 1.5);
  EXPECT_EQ(config["scoring"]["index_weighting"], false);
  EXPECT_EQ(config["eval"]["theta1"], 4);
  EXPECT_EQ(r["scenes"][0]["horizon"], 12);

  WriteFile(Path("bad.json"), R"({"scoring": {"tua": 1.5}})");
  EXPECT_EQ(Cli({"score", Gen("lead_follow", 1), "--config", Path("bad.json")}).code,
            cli::kValidation);
}

TEST_F(CliTest, EvalMatchesBruteForceOnGeneratedFixtures) {
  const std::string scene_a = Gen("lead_follow", 4, {"--annotations", Path("a.json")});
  const std::string scene_b = Gen("jaywalker", 5, {"--annotations", Path("b.json")});
  // Merge the two annotation files.
  json a = json::parse(ReadFile(Path("a.json")));
  const json b = json::parse(ReadFile(Path("b.json")));
  for (const json& rec : b["annotations"]) a["annotations"].push_back(rec);
  WriteFile(Path("ann.json"), a.dump());

  ASSERT_EQ(Cli({"score", scene_a, scene_b, "-o", Path("report.json")}).code, 0);
  const Outcome o = Cli({"eval", Path("report.json"), Path("ann.json"), "--pr-table",
                         Path("pr.csv")});
  ASSERT_EQ(o.code, 0) << o.err;
  const json result = json::parse(o.out);

  const json report = json::parse(ReadFile(Path("report.json")));
  std::vector<double> scores;
  std::vector<GroundTruthLabel> labels;
  for (const json& rec : a["annotations"]) {
    for (const json& s : report["scenes"]) {
      if (s["scene_id"] != rec["scene_id"]) continue;
      for (const json& obj : s["objects"]) {
        if (obj["id"] != rec["object_id"]) continue;
        scores.push_back(obj["score"].get<double>());
        labels.push_back(rec["annotator_count"].get<int>() >= 3
                             ? GroundTruthLabel::kPositive
                             : GroundTruthLabel::kNegative);
      }
    }
  }
  ASSERT_EQ(scores.size(), a["annotations"].size());
  const auto oracle = cfi::testing::BruteForceMetrics(scores, labels);
  EXPECT_EQ(result["ap"].get<double>(), oracle.ap);
  EXPECT_EQ(result["ot_f1"].get<double>(), oracle.ot_f1);
  EXPECT_EQ(result["ot_accuracy"].get<double>(), oracle.ot_accuracy);
  EXPECT_TRUE(ReadFile(Path("pr.csv")).starts_with("threshold,"));

  const Outcome peds = Cli({"eval", Path("report.json"), Path("ann.json"), "--only",
                            "pedestrians"});
  ASSERT_EQ(peds.code, 0) << peds.err;
  const json pj = json::parse(peds.out);
  EXPECT_EQ(pj["config"]["category"], "pedestrian");
  EXPECT_EQ(pj["counts"]["positive"].get<int>() + pj["counts"]["negative"].get<int>(),
            static_cast<int>(b["annotations"].size()));
}

TEST_F(CliTest, EvalThresholdValidationAndManifestConflicts) {
  const std::string scene = Gen("lead_follow", 1, {"--annotations", Path("ann.json")});
  ASSERT_EQ(Cli({"score", scene, "-o", Path("report.json")}).code, 0);
  const std::string report = Path("report.json");
  const std::string ann = Path("ann.json");
  EXPECT_EQ(Cli({"eval", report, ann, "--theta1", "2", "--theta2", "3"}).code,
            cli::kValidation);
  EXPECT_EQ(Cli({"eval", report, ann, "--theta1", "4"}).code, cli::kValidation);
  EXPECT_EQ(Cli({"eval", report, ann, "--theta1", "4", "--override-manifest"}).code,
            cli::kOk);
  EXPECT_EQ(Cli({"eval", report, ann, "--only", "pedestrians"}).code,
            cli::kValidation);
}

TEST_F(CliTest, RenderThresholds) {
  const std::string scene = Gen("lead_follow", 1, {"--count", "3"});
  ASSERT_EQ(Cli({"score", scene, "-o", Path("report.json")}).code, 0);
  const Outcome none = Cli({"render", scene, Path("report.json"), "--threshold", "1.1"});
  const Outcome all = Cli({"render", scene, Path("report.json"), "--threshold", "0"});
  const Outcome again = Cli({"render", scene, Path("report.json"), "--threshold", "0"});
  ASSERT_EQ(none.code, 0) << none.err;
  ASSERT_EQ(all.code, 0) << all.err;
  const std::string highlight = "stroke=\"#d62728\"";
  EXPECT_EQ(CountOf(none.out, highlight), 0);
  EXPECT_EQ(CountOf(all.out, highlight), 4);
  EXPECT_TRUE(all.out.starts_with("<?xml") || all.out.starts_with("<svg"));
  EXPECT_EQ(all.out, again.out);

  ASSERT_EQ(Cli({"score", Gen("jaywalker", 1), "-o", Path("other.json")}).code, 0);
  EXPECT_EQ(Cli({"render", scene, Path("other.json")}).code, cli::kValidation);
}

TEST_F(CliTest, ExitCodes) {
  EXPECT_EQ(Cli({}).code, cli::kUsage);
  EXPECT_EQ(Cli({"frobnicate"}).code, cli::kUsage);
  EXPECT_EQ(Cli({"score"}).code, cli::kUsage);
  EXPECT_EQ(Cli({"score", Path("missing.json")}).code, cli::kUsage);
  EXPECT_EQ(Cli({"--help"}).code, cli::kOk);
  EXPECT_EQ(Cli({"score", Gen("lead_follow", 1), "--tau", "-1"}).code,
            cli::kValidation);
  EXPECT_EQ(Cli({"score", Gen("lead_follow", 1), "--method", "magic"}).code,
            cli::kUsage);

  WriteFile(Path("broken.json"), "{\"format_version\": ");
  EXPECT_EQ(Cli({"score", Path("broken.json")}).code, cli::kValidation);

  const Outcome runtime = Cli({"score", Gen("lead_follow", 1),
                               "--external-predictor", "exit 0"});
  EXPECT_EQ(runtime.code, cli::kRuntime) << runtime.err;
}

TEST_F(CliTest, BaselinesAndGenAnnotations) {
  const std::string scene = Gen("lead_follow", 2, {"--annotations", Path("ann.json")});
  const json ann = json::parse(ReadFile(Path("ann.json")));
  for (const json& rec : ann["annotations"]) {
    EXPECT_EQ(rec["annotator_count"], rec["object_id"] == "lead" ? 5 : 0);
  }
  const Outcome o = Cli({"score", scene, "--method", "everything_important"});
  ASSERT_EQ(o.code, 0) << o.err;
  for (const json& obj : json::parse(o.out)["scenes"][0]["objects"]) {
    EXPECT_EQ(obj["score"], 1.0);
    EXPECT_FALSE(obj.contains("raw_rs"));
  }
}

}  // namespace
}  // namespace cfi
