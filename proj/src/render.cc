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

#include "cfi/render.h"

#include <algorithm>
#include <array>
#include <cstdarg>
#include <cmath>
#include <cstdio>
#include <map>
#include <set>

#include "cfi/errors.h"

namespace cfi {
namespace {

constexpr double kPixelsPerMeter = 8.0;
constexpr double kMarginMeters = 12.0;
constexpr double kLegendRowPx = 16.0;
constexpr const char* kImportantColor = "#d62728";
constexpr const char* kEgoColor = "#1f77b4";
constexpr const char* kOtherColor = "#7f7f7f";

std::string Format(const char* fmt, ...) {
  va_list args;
  va_start(args, fmt);
  va_list copy;
  va_copy(copy, args);
  const int len = std::vsnprintf(nullptr, 0, fmt, copy);
  va_end(copy);
  std::string out(static_cast<size_t>(std::max(len, 0)) + 1, '\0');
  std::vsnprintf(out.data(), out.size(), fmt, args);
  va_end(args);
  out.pop_back();
  return out;
}

std::string EscapeXml(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&':
        out += "&amp;";
        break;
      case '<':
        out += "&lt;";
        break;
      case '>':
        out += "&gt;";
        break;
      case '"':
        out += "&quot;";
        break;
      default:
        out += c;
    }
  }
  return out;
}

struct Canvas {
  double min_x, max_y;
  Vec2 ToPx(const Vec2& p) const {
    return {(p.x - min_x) * kPixelsPerMeter, (max_y - p.y) * kPixelsPerMeter};
  }
};

std::array<Vec2, 4> BoxCorners(const AgentState& a) {
  const Vec2 fwd{std::cos(a.heading), std::sin(a.heading)};
  const Vec2 left{-fwd.y, fwd.x};
  const Vec2 f = a.half_extent.x * fwd;
  const Vec2 l = a.half_extent.y * left;
  return {a.position + f + l, a.position + f - l, a.position - f - l,
          a.position - f + l};
}

std::string Polygon(const Canvas& canvas, const AgentState& a,
                    const char* stroke, double stroke_width, const char* fill) {
  std::string points;
  for (const Vec2& c : BoxCorners(a)) {
    const Vec2 px = canvas.ToPx(c);
    if (!points.empty()) points += ' ';
    points += Format("%.2f,%.2f", px.x, px.y);
  }
  return Format(
      "  <polygon points=\"%s\" fill=\"%s\" stroke=\"%s\" "
      "stroke-width=\"%.1f\"/>\n",
      points.c_str(), fill, stroke, stroke_width);
}

}  // namespace

std::string RenderSvg(const Scene& scene, const SceneReport& report,
                      double threshold) {
  if (!scene.id.empty() && report.scene_id != scene.id) {
    throw ValidationError("report scene '" + report.scene_id +
                          "' does not match scene '" + scene.id + "'");
  }
  std::map<std::string, const ObjectScore*> scores;
  for (const ObjectScore& o : report.objects) scores.emplace(o.id, &o);
  std::set<std::string> agent_ids;
  for (const AgentState& a : scene.agents) agent_ids.insert(a.id);
  for (const AgentState& a : scene.agents) {
    if (!scores.contains(a.id)) {
      throw ValidationError("object '" + a.id + "' missing from the report");
    }
  }
  for (const auto& [id, o] : scores) {
    if (!agent_ids.contains(id)) {
      throw ValidationError("report object '" + id + "' not in the scene");
    }
  }

  double min_x = scene.ego.position.x, max_x = min_x;
  double min_y = scene.ego.position.y, max_y = min_y;
  for (const AgentState& a : scene.agents) {
    min_x = std::min(min_x, a.position.x);
    max_x = std::max(max_x, a.position.x);
    min_y = std::min(min_y, a.position.y);
    max_y = std::max(max_y, a.position.y);
  }
  min_x -= kMarginMeters;
  max_x += kMarginMeters;
  min_y -= kMarginMeters;
  max_y += kMarginMeters;
  const Canvas canvas{min_x, max_y};
  const double map_w = (max_x - min_x) * kPixelsPerMeter;
  const double map_h = (max_y - min_y) * kPixelsPerMeter;
  const double legend_h = kLegendRowPx * (scene.agents.size() + 2);
  const double width = std::max(map_w, 320.0);
  const double height = map_h + legend_h;

  std::string svg;
  svg += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  svg += Format(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"%.0f\" "
      "height=\"%.0f\" viewBox=\"0 0 %.2f %.2f\">\n",
      std::ceil(width), std::ceil(height), width, height);
  svg += Format("  <title>%s</title>\n", EscapeXml(scene.id).c_str());
  svg += Format(
      "  <rect x=\"0\" y=\"0\" width=\"%.2f\" height=\"%.2f\" "
      "fill=\"#ffffff\"/>\n",
      width, height);
  svg += Format("  <svg x=\"0\" y=\"0\" width=\"%.2f\" height=\"%.2f\">\n",
                map_w, map_h);

  std::string route;
  for (const Vec2& p : scene.route) {
    const Vec2 px = canvas.ToPx(p);
    if (!route.empty()) route += ' ';
    route += Format("%.2f,%.2f", px.x, px.y);
  }
  svg += Format(
      "  <polyline points=\"%s\" fill=\"none\" stroke=\"#dddddd\" "
      "stroke-width=\"%.1f\"/>\n",
      route.c_str(), scene.lane_width * kPixelsPerMeter);
  svg += Format(
      "  <polyline points=\"%s\" fill=\"none\" stroke=\"#999999\" "
      "stroke-width=\"1\" stroke-dasharray=\"6,4\"/>\n",
      route.c_str());

  svg += Polygon(canvas, scene.ego, kEgoColor, 2.0, kEgoColor);
  for (const AgentState& a : scene.agents) {
    const bool important = scores.at(a.id)->score >= threshold;
    svg += Polygon(canvas, a, important ? kImportantColor : kOtherColor,
                   important ? 3.0 : 1.0,
                   a.kind == AgentKind::kVehicle ? "#eeeeee" : "#ffe9b3");
    const Vec2 px = canvas.ToPx(a.position);
    svg += Format(
        "  <text x=\"%.2f\" y=\"%.2f\" font-family=\"monospace\" "
        "font-size=\"10\" text-anchor=\"middle\">%s</text>\n",
        px.x, px.y - a.half_extent.y * kPixelsPerMeter - 4.0,
        EscapeXml(a.id).c_str());
  }
  svg += "  </svg>\n";

  double y = map_h + kLegendRowPx;
  svg += Format(
      "  <text x=\"8\" y=\"%.2f\" font-family=\"monospace\" "
      "font-size=\"11\">threshold %.3f  (ego in blue, important in red)"
      "</text>\n",
      y, threshold);
  for (const AgentState& a : scene.agents) {
    y += kLegendRowPx;
    const ObjectScore& o = *scores.at(a.id);
    const bool important = o.score >= threshold;
    svg += Format(
        "  <text x=\"8\" y=\"%.2f\" font-family=\"monospace\" font-size=\"11\" "
        "fill=\"%s\">%s %s score=%.4f</text>\n",
        y, important ? kImportantColor : "#333333", EscapeXml(a.id).c_str(),
        std::string(ToString(a.kind)).c_str(), o.score);
  }
  svg += "</svg>\n";
  return svg;
}

}  // namespace cfi
