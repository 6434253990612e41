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

#ifndef MATNAV_ARC_HULL_H_
#define MATNAV_ARC_HULL_H_

#include <span>
#include <vector>

#include "matnav/geom.h"

namespace matnav {

/// A circle contributing to a convex hull. A restricted generator only
/// supports the hull for outward normals in [normal_lo, normal_lo + span];
/// callers add the arc endpoints as separate zero-radius generators.
struct HullGenerator {
  Point2 center;
  double radius = 0.0;
  bool restricted = false;
  double normal_lo = 0.0;
  double normal_span = kTwoPi;

  static HullGenerator circle(const Circle& c) { return {c.center, c.radius}; }
  static HullGenerator point(const Point2& p) { return {p, 0.0}; }
  static HullGenerator arc(const Point2& center, double radius, double from, double span) {
    return {center, radius, true, normalize_angle(from), span};
  }
};

/// The boundary part whose outward normals lie in [begin, end): an arc of
/// (center, radius), or a single vertex when radius is zero. Consecutive
/// pieces are joined by a segment with normal `end`.
struct HullPiece {
  Point2 center;
  double radius = 0.0;
  double begin = 0.0;
  double end = 0.0;
};

/// Convex region bounded by circular arcs and line segments, stored by its
/// support function: pieces are ordered by outward normal and cover [0, 2pi)
/// exactly, so Minkowski sums reduce to merging the two normal partitions.
class ArcHull {
 public:
  ArcHull() = default;

  static ArcHull of_generators(std::span<const HullGenerator> gens);
  static ArcHull of_circles(std::span<const Circle> circles);
  static ArcHull of_circle(const Circle& c);
  static ArcHull of_tuple(const TupleShape& t);
  static ArcHull of_segment(const Point2& a, const Point2& b);
  /// Rebuilds a hull from stored pieces (e.g. a cache file). The pieces must
  /// be ordered by normal and cover [0, 2pi) contiguously.
  static ArcHull from_pieces(std::vector<HullPiece> pieces);

  std::span<const HullPiece> pieces() const { return pieces_; }
  bool empty() const { return pieces_.empty(); }

  /// h(n) = max over the region of n . x, for n = unit(normal_angle).
  double support(double normal_angle) const;
  /// Boundary point with the given outward normal (first one on a segment).
  Point2 boundary_point(double normal_angle) const;
  std::size_t piece_index(double normal_angle) const;

  struct SignedDistance {
    double distance = 0.0;  // negative inside
    double normal = 0.0;    // outward normal angle at the nearest boundary point
  };
  /// max over normals n of (n . p - h(n)); equals the signed Euclidean
  /// distance to the boundary for a convex region.
  SignedDistance signed_distance(const Point2& p) const;
  /// Same maximum taken over normals in [lo, lo + span] only.
  SignedDistance signed_distance(const Point2& p, double lo, double span) const;
  bool contains(const Point2& p, double eps = kGeomEps) const {
    return signed_distance(p).distance <= eps;
  }
  Point2 closest_boundary_point(const Point2& p) const;

  double area() const;
  double width(double normal_angle) const {
    return support(normal_angle) + support(normal_angle + kPi);
  }
  Outline outline() const;

  ArcHull translated(const Vec2& t) const;
  ArcHull rotated(double angle) const;  // about the origin
  ArcHull transformed(const Pose& pose) const { return rotated(pose.theta).translated(pose.position); }
  ArcHull scaled(double s) const;       // s > 0
  ArcHull negated() const;              // point reflection through the origin
  /// Grows every piece by r: the region dilated by a disc.
  ArcHull offset(double r) const;

  friend ArcHull minkowski_sum(const ArcHull& a, const ArcHull& b);

 private:
  explicit ArcHull(std::vector<HullPiece> pieces) : pieces_(std::move(pieces)) {}
  static std::vector<HullPiece> canonicalize(std::vector<HullPiece> pieces, double shift);

  std::vector<HullPiece> pieces_;
};

ArcHull minkowski_sum(const ArcHull& a, const ArcHull& b);

/// Signed distance between two convex regions (negative when overlapping).
double separation(const ArcHull& a, const ArcHull& b);

}  // namespace matnav

#endif  // MATNAV_ARC_HULL_H_
