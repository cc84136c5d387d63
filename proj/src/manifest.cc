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

#include "cfi/manifest.h"

#include <cstdio>
#include <initializer_list>

#include "cfi/errors.h"

namespace cfi {
namespace {

using nlohmann::json;

void RejectUnknownKeys(const json& j, std::initializer_list<const char*> known,
                       const std::string& where) {
  if (!j.is_object()) throw ParseError(where + ": expected an object");
  for (const auto& [key, value] : j.items()) {
    bool found = false;
    for (const char* k : known) found = found || key == k;
    if (!found) throw ParseError(where + ": unknown key '" + key + "'");
  }
}

template <typename T>
void Read(const json& j, const char* key, T& out, const std::string& where) {
  const auto it = j.find(key);
  if (it == j.end()) return;
  try {
    out = it->get<T>();
  } catch (const json::exception&) {
    throw ParseError(where + "." + key + ": wrong type");
  }
}

}  // namespace

uint64_t Fnv1a64(std::string_view data, uint64_t state) {
  for (unsigned char c : data) {
    state ^= c;
    state *= 0x100000001b3ULL;
  }
  return state;
}

std::string HexDigest(uint64_t value) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(value));
  return buf;
}

std::string ContentHash(const std::vector<std::string>& contents) {
  uint64_t state = Fnv1a64("");
  for (const std::string& c : contents) {
    state = Fnv1a64(std::to_string(c.size()) + ":", state);
    state = Fnv1a64(c, state);
  }
  return "fnv1a64:" + HexDigest(state);
}

json ScoringConfigToJson(const ScoringConfig& config) {
  json enabled = json::array();
  for (PerturbationKind k : config.perturbation.enabled) {
    enabled.push_back(std::string(ToString(k)));
  }
  const PredictorConfig& p = config.predictor;
  return {
      {"tau", config.tau},
      {"index_weighting", config.index_weighting},
      {"perturbation",
       {{"speed_up_factor", config.perturbation.speed_up_factor},
        {"lane_width", config.perturbation.lane_width},
        {"enabled", std::move(enabled)},
        {"perturb_ego", config.perturbation.perturb_ego}}},
      {"predictor",
       {{"desired_speed", p.desired_speed},
        {"max_accel", p.max_accel},
        {"max_decel", p.max_decel},
        {"corridor_halfwidth",
         p.corridor_halfwidth ? json(*p.corridor_halfwidth) : json(nullptr)},
        {"lookahead_gap", p.lookahead_gap}}}};
}

json EvalConfigToJson(const EvalConfig& config) {
  return {{"theta1", config.theta1},
          {"theta2", config.theta2},
          {"category", config.category_filter
                           ? json(std::string(ToString(*config.category_filter)))
                           : json(nullptr)}};
}

ScoringConfig ScoringConfigFromJson(const json& j, ScoringConfig base) {
  RejectUnknownKeys(j, {"tau", "index_weighting", "perturbation", "predictor"},
                    "scoring");
  Read(j, "tau", base.tau, "scoring");
  Read(j, "index_weighting", base.index_weighting, "scoring");
  if (const auto it = j.find("perturbation"); it != j.end()) {
    const json& pj = *it;
    RejectUnknownKeys(
        pj, {"speed_up_factor", "lane_width", "enabled", "perturb_ego"},
        "scoring.perturbation");
    PerturbationConfig& pc = base.perturbation;
    Read(pj, "speed_up_factor", pc.speed_up_factor, "scoring.perturbation");
    Read(pj, "lane_width", pc.lane_width, "scoring.perturbation");
    Read(pj, "perturb_ego", pc.perturb_ego, "scoring.perturbation");
    if (const auto e = pj.find("enabled"); e != pj.end()) {
      std::vector<std::string> names;
      Read(pj, "enabled", names, "scoring.perturbation");
      pc.enabled.clear();
      for (const std::string& n : names) {
        pc.enabled.insert(PerturbationKindFromString(n));
      }
    }
  }
  if (const auto it = j.find("predictor"); it != j.end()) {
    const json& pj = *it;
    RejectUnknownKeys(pj,
                      {"desired_speed", "max_accel", "max_decel",
                       "corridor_halfwidth", "lookahead_gap"},
                      "scoring.predictor");
    PredictorConfig& pc = base.predictor;
    Read(pj, "desired_speed", pc.desired_speed, "scoring.predictor");
    Read(pj, "max_accel", pc.max_accel, "scoring.predictor");
    Read(pj, "max_decel", pc.max_decel, "scoring.predictor");
    Read(pj, "lookahead_gap", pc.lookahead_gap, "scoring.predictor");
    if (const auto c = pj.find("corridor_halfwidth"); c != pj.end()) {
      if (c->is_null()) {
        pc.corridor_halfwidth.reset();
      } else {
        double v = 0.0;
        Read(pj, "corridor_halfwidth", v, "scoring.predictor");
        pc.corridor_halfwidth = v;
      }
    }
  }
  return base;
}

EvalConfig EvalConfigFromJson(const json& j, EvalConfig base) {
  RejectUnknownKeys(j, {"theta1", "theta2", "category"}, "eval");
  Read(j, "theta1", base.theta1, "eval");
  Read(j, "theta2", base.theta2, "eval");
  if (const auto it = j.find("category"); it != j.end()) {
    if (it->is_null()) {
      base.category_filter.reset();
    } else if (it->is_string()) {
      base.category_filter = AgentKindFromString(it->get<std::string>());
    } else {
      throw ParseError("eval.category: wrong type");
    }
  }
  return base;
}

json ManifestToJson(const RunManifest& m) {
  return {{"tool_version", m.tool_version},
          {"inputs", m.inputs},
          {"content_hash", m.content_hash},
          {"predictor", m.predictor},
          {"scene_overrides",
           {{"horizon", m.overrides.horizon ? json(*m.overrides.horizon)
                                            : json(nullptr)},
            {"dt", m.overrides.dt ? json(*m.overrides.dt) : json(nullptr)}}},
          {"config",
           {{"scoring", ScoringConfigToJson(m.scoring)},
            {"eval", EvalConfigToJson(m.eval)}}}};
}

RunManifest ManifestFromJson(const json& j) {
  RejectUnknownKeys(j,
                    {"tool_version", "inputs", "content_hash", "predictor",
                     "scene_overrides", "config"},
                    "manifest");
  RunManifest m;
  Read(j, "tool_version", m.tool_version, "manifest");
  Read(j, "inputs", m.inputs, "manifest");
  Read(j, "content_hash", m.content_hash, "manifest");
  Read(j, "predictor", m.predictor, "manifest");
  if (const auto it = j.find("scene_overrides"); it != j.end()) {
    if (const auto h = it->find("horizon"); h != it->end() && !h->is_null()) {
      m.overrides.horizon = h->get<int>();
    }
    if (const auto d = it->find("dt"); d != it->end() && !d->is_null()) {
      m.overrides.dt = d->get<double>();
    }
  }
  if (const auto it = j.find("config"); it != j.end()) {
    RejectUnknownKeys(*it, {"scoring", "eval"}, "manifest.config");
    if (it->contains("scoring")) {
      m.scoring = ScoringConfigFromJson(it->at("scoring"));
    }
    if (it->contains("eval")) m.eval = EvalConfigFromJson(it->at("eval"));
  }
  return m;
}

}  // namespace cfi
