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

#ifndef CFI_MANIFEST_H_
#define CFI_MANIFEST_H_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cfi/evaluate.h"
#include "cfi/scoring.h"
#include "json.hpp"

namespace cfi {

inline constexpr std::string_view kToolVersion = "1.0.0";

// Scene-level overrides applied on top of each scenario file.
struct SceneOverrides {
  std::optional<int> horizon;
  std::optional<double> dt;

  friend bool operator==(const SceneOverrides&, const SceneOverrides&) = default;
};

// Everything needed to reproduce an output file.
struct RunManifest {
  std::vector<std::string> inputs;
  ScoringConfig scoring;
  EvalConfig eval;
  SceneOverrides overrides;
  std::string predictor = "rule_based";
  std::string tool_version = std::string(kToolVersion);
  std::string content_hash;
};

// 64-bit FNV-1a, rendered as 16 lowercase hex digits.
uint64_t Fnv1a64(std::string_view data, uint64_t state = 0xcbf29ce484222325ULL);
std::string HexDigest(uint64_t value);

// Hash over the byte contents of every input, in order. Each file is
// length-prefixed so concatenation boundaries matter.
std::string ContentHash(const std::vector<std::string>& contents);

nlohmann::json ScoringConfigToJson(const ScoringConfig& config);
nlohmann::json EvalConfigToJson(const EvalConfig& config);
// Fields present in `j` override `base`; unknown keys are a ParseError.
ScoringConfig ScoringConfigFromJson(const nlohmann::json& j,
                                    ScoringConfig base = {});
EvalConfig EvalConfigFromJson(const nlohmann::json& j, EvalConfig base = {});

nlohmann::json ManifestToJson(const RunManifest& manifest);
RunManifest ManifestFromJson(const nlohmann::json& j);

}  // namespace cfi

#endif  // CFI_MANIFEST_H_
