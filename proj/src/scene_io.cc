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

#include "cfi/scene_io.h"

#include <fstream>
#include <sstream>

#include "cfi/errors.h"

namespace cfi {
namespace {

using nlohmann::json;

const json& Field(const json& obj, const char* key, const std::string& where) {
  if (!obj.is_object()) throw ParseError(where + ": expected an object");
  const auto it = obj.find(key);
  if (it == obj.end()) {
    throw ParseError(where + ": missing field '" + key + "'");
  }
  return *it;
}

double Number(const json& obj, const char* key, const std::string& where) {
  const json& v = Field(obj, key, where);
  if (!v.is_number()) {
    throw ParseError(where + "." + key + ": expected a number");
  }
  return v.get<double>();
}

std::string String(const json& obj, const char* key, const std::string& where) {
  const json& v = Field(obj, key, where);
  if (!v.is_string()) {
    throw ParseError(where + "." + key + ": expected a string");
  }
  return v.get<std::string>();
}

Vec2 Point(const json& j, const std::string& where) {
  try {
    return Vec2FromJson(j);
  } catch (const ParseError& e) {
    throw ParseError(where + ": " + e.what());
  }
}

json AgentToJson(const AgentState& a) {
  json history = json::array();
  for (const HistorySample& s : a.history) {
    history.push_back({{"t", s.t}, {"position", ToJson(s.position)}});
  }
  return {{"id", a.id},
          {"kind", std::string(ToString(a.kind))},
          {"position", ToJson(a.position)},
          {"heading", a.heading},
          {"speed", a.speed},
          {"half_extent", ToJson(a.half_extent)},
          {"history", std::move(history)}};
}

AgentState AgentFromJson(const json& j, const std::string& where) {
  AgentState a;
  a.id = String(j, "id", where);
  a.kind = AgentKindFromString(String(j, "kind", where));
  a.position = Point(Field(j, "position", where), where + ".position");
  a.heading = Number(j, "heading", where);
  a.speed = Number(j, "speed", where);
  a.half_extent =
      Point(Field(j, "half_extent", where), where + ".half_extent");
  const json& history = Field(j, "history", where);
  if (!history.is_array()) {
    throw ParseError(where + ".history: expected an array");
  }
  for (size_t i = 0; i < history.size(); ++i) {
    const std::string at = where + ".history[" + std::to_string(i) + "]";
    a.history.push_back({Point(Field(history[i], "position", at), at),
                         Number(history[i], "t", at)});
  }
  return a;
}

}  // namespace

void CheckFormatVersion(const json& doc, int supported_major) {
  const std::string version = String(doc, "format_version", "document");
  const auto dot = version.find('.');
  const std::string major = version.substr(0, dot);
  if (major != std::to_string(supported_major) ||
      (dot != std::string::npos && dot + 1 >= version.size())) {
    throw ParseError("unsupported format_version '" + version +
                     "' (supported major: " + std::to_string(supported_major) +
                     ")");
  }
}

json ToJson(const Vec2& v) { return json::array({v.x, v.y}); }

Vec2 Vec2FromJson(const json& j) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() ||
      !j[1].is_number()) {
    throw ParseError("expected [x, y]");
  }
  return {j[0].get<double>(), j[1].get<double>()};
}

json SceneToJson(const Scene& scene) {
  json route = json::array();
  for (const Vec2& p : scene.route) route.push_back(ToJson(p));
  json agents = json::array();
  for (const AgentState& a : scene.agents) agents.push_back(AgentToJson(a));
  return {{"format_version", std::string(kSceneFormatVersion)},
          {"scene_id", scene.id},
          {"dt", scene.dt},
          {"horizon", scene.horizon},
          {"lane_width", scene.lane_width},
          {"route", std::move(route)},
          {"ego", AgentToJson(scene.ego)},
          {"agents", std::move(agents)}};
}

Scene SceneFromJson(const json& doc) {
  if (!doc.is_object()) throw ParseError("scene document must be an object");
  CheckFormatVersion(doc, 1);
  Scene scene;
  if (doc.contains("scene_id")) scene.id = String(doc, "scene_id", "scene");
  scene.dt = Number(doc, "dt", "scene");
  const json& horizon = Field(doc, "horizon", "scene");
  if (!horizon.is_number_integer()) {
    throw ParseError("scene.horizon: expected an integer");
  }
  scene.horizon = horizon.get<int>();
  scene.lane_width = Number(doc, "lane_width", "scene");
  const json& route = Field(doc, "route", "scene");
  if (!route.is_array()) throw ParseError("scene.route: expected an array");
  for (size_t i = 0; i < route.size(); ++i) {
    scene.route.push_back(
        Point(route[i], "scene.route[" + std::to_string(i) + "]"));
  }
  scene.ego = AgentFromJson(Field(doc, "ego", "scene"), "ego");
  const json& agents = Field(doc, "agents", "scene");
  if (!agents.is_array()) throw ParseError("scene.agents: expected an array");
  for (size_t i = 0; i < agents.size(); ++i) {
    scene.agents.push_back(
        AgentFromJson(agents[i], "agents[" + std::to_string(i) + "]"));
  }
  ValidateScene(scene);
  return scene;
}

Scene ParseScene(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("malformed scene document: ") + e.what());
  }
  return SceneFromJson(doc);
}

std::string SerializeScene(const Scene& scene) {
  return SceneToJson(scene).dump(2) + "\n";
}

Scene LoadScene(const std::filesystem::path& path) {
  Scene scene;
  try {
    scene = ParseScene(ReadFile(path));
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  } catch (const ValidationError& e) {
    throw ValidationError(path.string() + ": " + e.what());
  }
  if (scene.id.empty()) scene.id = path.stem().string();
  return scene;
}

void SaveScene(const Scene& scene, const std::filesystem::path& path) {
  WriteFile(path, SerializeScene(scene));
}

std::string ReadFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw RuntimeError("cannot open '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void WriteFile(const std::filesystem::path& path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw RuntimeError("cannot write '" + path.string() + "'");
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  if (!out) throw RuntimeError("write failed for '" + path.string() + "'");
}

}  // namespace cfi
