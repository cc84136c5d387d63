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

#ifndef CFI_GEOMETRY_H_
#define CFI_GEOMETRY_H_

#include <cmath>
#include <span>
#include <vector>

namespace cfi {

// Planar point / displacement in meters (bird's-eye view, x forward, y left).
struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Vec2&, const Vec2&) = default;

  Vec2& operator+=(const Vec2& o) {
    x += o.x;
    y += o.y;
    return *this;
  }
  Vec2& operator-=(const Vec2& o) {
    x -= o.x;
    y -= o.y;
    return *this;
  }
};

inline Vec2 operator+(Vec2 a, const Vec2& b) { return a += b; }
inline Vec2 operator-(Vec2 a, const Vec2& b) { return a -= b; }
inline Vec2 operator-(const Vec2& a) { return {-a.x, -a.y}; }
inline Vec2 operator*(double s, const Vec2& a) { return {s * a.x, s * a.y}; }
inline Vec2 operator*(const Vec2& a, double s) { return {s * a.x, s * a.y}; }
inline Vec2 operator/(const Vec2& a, double s) { return {a.x / s, a.y / s}; }

inline double Dot(const Vec2& a, const Vec2& b) { return a.x * b.x + a.y * b.y; }
inline double Cross(const Vec2& a, const Vec2& b) {
  return a.x * b.y - a.y * b.x;
}
inline double SquaredNorm(const Vec2& a) { return Dot(a, a); }
inline double Norm(const Vec2& a) { return std::hypot(a.x, a.y); }
inline double Distance(const Vec2& a, const Vec2& b) { return Norm(a - b); }
inline bool IsFinite(const Vec2& a) {
  return std::isfinite(a.x) && std::isfinite(a.y);
}

// Counter-clockwise rotation by `angle` radians.
inline Vec2 Rotate(const Vec2& a, double angle) {
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  return {c * a.x - s * a.y, s * a.x + c * a.y};
}

// Wraps an angle into [-pi, pi).
double WrapAngle(double angle);

// Result of projecting a point onto a polyline.
struct PolylineProjection {
  double station = 0.0;  // arc length of the foot point from the first vertex
  double lateral = 0.0;  // signed offset, positive to the left of travel
};

// Arc-length parameterized view over a polyline with >= 2 vertices and
// non-zero total length. Stations beyond either end extrapolate along the
// first / last segment.
class Polyline {
 public:
  explicit Polyline(std::span<const Vec2> points);

  double Length() const { return cumulative_.back(); }
  Vec2 PointAt(double station) const;
  PolylineProjection Project(const Vec2& p) const;

 private:
  std::vector<Vec2> points_;
  std::vector<double> cumulative_;
};

}  // namespace cfi

#endif  // CFI_GEOMETRY_H_
