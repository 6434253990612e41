// Copyright 2026 The matnav Authors
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

#ifndef MATNAV_GEOM_H_
#define MATNAV_GEOM_H_

#include <array>
#include <cmath>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace matnav {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Tolerance used for chain closure, tangency and boundary membership.
inline constexpr double kGeomEps = 1e-9;

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  constexpr Vec2() = default;
  constexpr Vec2(double x_, double y_) : x(x_), y(y_) {}

  constexpr Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
  constexpr Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
  constexpr Vec2 operator-() const { return {-x, -y}; }
  constexpr Vec2 operator*(double s) const { return {x * s, y * s}; }
  constexpr Vec2 operator/(double s) const { return {x / s, y / s}; }
  constexpr Vec2& operator+=(const Vec2& o) {
    x += o.x;
    y += o.y;
    return *this;
  }
  constexpr Vec2& operator-=(const Vec2& o) {
    x -= o.x;
    y -= o.y;
    return *this;
  }
  constexpr Vec2& operator*=(double s) {
    x *= s;
    y *= s;
    return *this;
  }
  constexpr bool operator==(const Vec2&) const = default;
};

using Point2 = Vec2;

constexpr Vec2 operator*(double s, const Vec2& v) { return v * s; }
constexpr double dot(const Vec2& a, const Vec2& b) { return a.x * b.x + a.y * b.y; }
constexpr double cross(const Vec2& a, const Vec2& b) { return a.x * b.y - a.y * b.x; }
constexpr double norm_sq(const Vec2& v) { return dot(v, v); }
inline double norm(const Vec2& v) { return std::hypot(v.x, v.y); }
inline double distance(const Vec2& a, const Vec2& b) { return norm(a - b); }
constexpr Vec2 perp(const Vec2& v) { return {-v.y, v.x}; }  // CCW quarter turn
inline Vec2 normalized(const Vec2& v) {
  const double n = norm(v);
  return n > 0.0 ? v / n : Vec2{};
}
inline Vec2 unit(double angle) { return {std::cos(angle), std::sin(angle)}; }
inline double angle_of(const Vec2& v) { return std::atan2(v.y, v.x); }
inline Vec2 rotate(const Vec2& v, double angle) {
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  return {c * v.x - s * v.y, s * v.x + c * v.y};
}

/// Maps an angle into [0, 2pi).
double normalize_angle(double a);
/// Maps an angle into (-pi, pi].
double wrap_angle(double a);

/// Rigid transform: rotation about the origin followed by translation.
struct Pose {
  Vec2 position;
  double theta = 0.0;

  Vec2 apply(const Vec2& p) const { return rotate(p, theta) + position; }
  Vec2 apply_inverse(const Vec2& p) const { return rotate(p - position, -theta); }
};

struct Circle {
  Point2 center;
  double radius = 0.0;

  bool operator==(const Circle&) const = default;
};

/// Circular arc. Angles are in [0, 2pi); the arc runs from `start` to `end`
/// counterclockwise when `ccw` is set, clockwise otherwise.
struct Arc {
  Circle circle;
  double start = 0.0;
  double end = 0.0;
  bool ccw = true;

  /// Angular extent in (0, 2pi]; a closed circle has span 2pi.
  double span() const;
  Point2 start_point() const { return circle.center + unit(start) * circle.radius; }
  Point2 end_point() const { return circle.center + unit(end) * circle.radius; }
  Point2 point_at(double fraction) const;
  bool contains_angle(double angle) const;
};

struct Segment {
  Point2 a;
  Point2 b;

  double length() const { return distance(a, b); }
};

using OutlinePiece = std::variant<Arc, Segment>;

/// Closed counterclockwise chain of arcs and segments.
struct Outline {
  std::vector<OutlinePiece> pieces;

  bool closed(double tol = 1e-7) const;
  double perimeter() const;
  /// Evenly spaced boundary samples, every piece's endpoints included.
  std::vector<Point2> sample(std::size_t count) const;
};

Point2 piece_start(const OutlinePiece& p);
Point2 piece_end(const OutlinePiece& p);
double piece_length(const OutlinePiece& p);

class GeometryError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// One circle strictly inside the other; no outer tangents exist.
class ContainmentError : public GeometryError {
 public:
  using GeometryError::GeometryError;
};

/// Collinear or coincident input where a proper configuration is required.
class DegenerateError : public GeometryError {
 public:
  using GeometryError::GeometryError;
};

/// Convex hull of two circles: the basic CTMAT unit.
///
/// T1 and T3 lie on the big circle, T2 and T4 on the small one. T1T2 is the
/// outer tangent on the left of the axis big->small, T3T4 the one on the
/// right, so the counterclockwise boundary is T3 -> T4 -> (small arc) -> T2 ->
/// T1 -> (big arc) -> T3.
struct TupleShape {
  Circle big;
  Circle small;
  std::array<Point2, 4> tangents{};
  /// Direction of the axis big->small; 0 for a single-circle tuple.
  double theta = 0.0;

  bool degenerate() const;
  double axis_length() const { return distance(big.center, small.center); }
  Outline outline() const;
  TupleShape transformed(const Pose& pose) const;
  TupleShape translated(const Vec2& t) const;
};

/// Builds the tuple spanned by two medial circles; the larger radius becomes
/// the big circle regardless of argument order.
TupleShape make_tuple(const Circle& c_big, const Circle& c_small);

bool point_in_tuple(const Point2& p, const TupleShape& t, double eps = kGeomEps);

/// Euclidean distance from p to the tuple region (0 inside).
double distance_to_tuple(const Point2& p, const TupleShape& t);

Circle circumcircle(const Point2& a, const Point2& b, const Point2& c);

struct ClosestPoint {
  Point2 point;
  double distance = 0.0;
  std::size_t piece = 0;
};

ClosestPoint closest_point_on_segment(const Point2& p, const Segment& s);
ClosestPoint closest_point_on_arc(const Point2& p, const Arc& a);
ClosestPoint closest_point_on_outline(const Point2& p, const Outline& o);

/// Larger of the two endpoint distances to the union of `region`.
double segment_outline_distance(const Segment& s, std::span<const TupleShape> region);

/// Distance from p to the union of tuples (0 inside any of them).
double distance_to_union(const Point2& p, std::span<const TupleShape> region);
bool point_in_union(const Point2& p, std::span<const TupleShape> region,
                    double eps = kGeomEps);

/// Smallest circle enclosing all points (Welzl, deterministic order).
Circle min_enclosing_circle(std::span<const Point2> points);

/// Smallest circle enclosing all circles. Computed from boundary samples and
/// inflated by the sampling sagitta, so it always encloses.
Circle min_enclosing_circle_of_circles(std::span<const Circle> circles);

}  // namespace matnav

#endif  // MATNAV_GEOM_H_
