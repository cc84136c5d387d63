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

// Scenario documents are JSON objects:
//
//   {
//     "format_version": "1.0",
//     "scene_id": "lead_follow_0001",
//     "dt": 0.25, "horizon": 20, "lane_width": 3.5,
//     "route": [[x, y], ...],
//     "ego": <agent>,
//     "agents": [<agent>, ...]
//   }
//
// where <agent> is
//
//   { "id": "car_1", "kind": "vehicle" | "pedestrian",
//     "position": [x, y], "heading": rad, "speed": m/s,
//     "half_extent": [hx, hy],
//     "history": [{"t": s, "position": [x, y]}, ...] }
//
// Readers accept any "1.x" format version and reject other majors.

#ifndef CFI_SCENE_IO_H_
#define CFI_SCENE_IO_H_

#include <filesystem>
#include <string>
#include <string_view>

#include "cfi/scene.h"
#include "json.hpp"

namespace cfi {

inline constexpr std::string_view kSceneFormatVersion = "1.0";

// Throws ParseError unless `version` is "<supported major>.<minor>".
void CheckFormatVersion(const nlohmann::json& doc, int supported_major);

nlohmann::json ToJson(const Vec2& v);
Vec2 Vec2FromJson(const nlohmann::json& j);

nlohmann::json SceneToJson(const Scene& scene);
// Parses and validates; ParseError on structural problems, ValidationError on
// invariant violations.
Scene SceneFromJson(const nlohmann::json& doc);

Scene ParseScene(std::string_view text);
std::string SerializeScene(const Scene& scene);

// If the document carries no scene_id the file stem is used.
Scene LoadScene(const std::filesystem::path& path);
void SaveScene(const Scene& scene, const std::filesystem::path& path);

// Reads a whole file; RuntimeError if it cannot be opened.
std::string ReadFile(const std::filesystem::path& path);
void WriteFile(const std::filesystem::path& path, std::string_view contents);

}  // namespace cfi

#endif  // CFI_SCENE_IO_H_
