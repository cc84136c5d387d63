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

#include "cfi/geometry.h"

#include <algorithm>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace cfi {

double WrapAngle(double angle) {
  constexpr double kTwoPi = 2.0 * std::numbers::pi;
  double wrapped = std::fmod(angle + std::numbers::pi, kTwoPi);
  if (wrapped < 0.0) wrapped += kTwoPi;
  wrapped -= std::numbers::pi;
  // fmod rounding can land exactly on +pi.
  if (wrapped >= std::numbers::pi) wrapped -= kTwoPi;
  return wrapped;
}

Polyline::Polyline(std::span<const Vec2> points)
    : points_(points.begin(), points.end()) {
  if (points_.size() < 2) {
    throw std::invalid_argument("polyline needs at least 2 points");
  }
  cumulative_.reserve(points_.size());
  cumulative_.push_back(0.0);
  for (size_t i = 1; i < points_.size(); ++i) {
    cumulative_.push_back(cumulative_.back() +
                          Distance(points_[i], points_[i - 1]));
  }
  if (!(Length() > 0.0)) {
    throw std::invalid_argument("polyline has zero length");
  }
}

Vec2 Polyline::PointAt(double station) const {
  // Segment index whose [cumulative_[i], cumulative_[i+1]] contains station,
  // skipping zero-length segments.
  size_t seg = 0;
  if (station >= cumulative_.back()) {
    seg = points_.size() - 2;
  } else if (station > 0.0) {
    const auto it =
        std::upper_bound(cumulative_.begin(), cumulative_.end(), station);
    seg = static_cast<size_t>(std::distance(cumulative_.begin(), it)) - 1;
  }
  while (seg + 1 < points_.size() - 1 &&
         cumulative_[seg + 1] - cumulative_[seg] <= 0.0) {
    ++seg;
  }
  while (seg > 0 && cumulative_[seg + 1] - cumulative_[seg] <= 0.0) --seg;
  const Vec2 a = points_[seg];
  const Vec2 d = points_[seg + 1] - a;
  const double len = cumulative_[seg + 1] - cumulative_[seg];
  return a + ((station - cumulative_[seg]) / len) * d;
}

PolylineProjection Polyline::Project(const Vec2& p) const {
  PolylineProjection best;
  double best_dist = std::numeric_limits<double>::infinity();
  const size_t last = points_.size() - 2;
  for (size_t i = 0; i <= last; ++i) {
    const Vec2 a = points_[i];
    const Vec2 d = points_[i + 1] - a;
    const double len = cumulative_[i + 1] - cumulative_[i];
    if (len <= 0.0) continue;
    const Vec2 dir = d / len;
    double t = Dot(p - a, dir);
    if (i > 0) t = std::max(t, 0.0);
    if (i < last) t = std::min(t, len);
    const Vec2 foot = a + t * dir;
    const Vec2 off = p - foot;
    const double dist = Norm(off);
    if (dist < best_dist) {
      best_dist = dist;
      best.station = cumulative_[i] + t;
      const double side = Cross(dir, off);
      best.lateral = side >= 0.0 ? dist : -dist;
    }
  }
  return best;
}

}  // namespace cfi
