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

// Agent width as a function of direction, and the per-step orientation
// update that rotates agents through gaps narrower than their current width.

#ifndef MATNAV_ORIENTATION_H_
#define MATNAV_ORIENTATION_H_

#include <optional>
#include <span>
#include <vector>

#include "matnav/arc_hull.h"
#include "matnav/ctmat.h"
#include "matnav/matrvo.h"

namespace matnav {

struct AgentHull {
  ArcHull region;
  std::vector<Circle> circles;  // the medial circles it is the hull of

  Outline outline() const { return region.outline(); }
};

AgentHull convex_hull_of_tuples(std::span<const TupleShape> tuples);
inline AgentHull convex_hull_of_tuples(const CTMATShape& shape) { return convex_hull_of_tuples(shape.tuples); }

/// Distance between the two supporting lines parallel to direction theta.
double width(const AgentHull& hull, double theta);

/// w(theta) over one period [0, pi), split where the pair of circles touching
/// the two supporting lines changes. On each interval
///   w = r_i + r_j + (c_i - c_j) . n(theta + pi/2).
class WidthTable {
 public:
  struct Interval {
    double begin = 0.0;
    double end = 0.0;
    Vec2 delta;         // c_i - c_j
    double radii = 0.0;  // r_i + r_j
  };

  WidthTable() = default;
  /// `resolution` is the bucket width of the angle index.
  static WidthTable build(const AgentHull& hull, double resolution = kPi / 180);
  static WidthTable from_intervals(std::vector<Interval> intervals, double resolution);

  double operator()(double theta) const;
  double min_width() const { return min_; }
  double max_width() const { return max_; }
  std::span<const Interval> intervals() const { return intervals_; }
  double resolution() const { return resolution_; }

 private:
  void index();

  std::vector<Interval> intervals_;
  std::vector<int> bucket_start_;
  double resolution_ = kPi / 180;
  double min_ = 0.0;
  double max_ = 0.0;
};

/// Smallest |delta| such that width(theta + delta) <= clearance - margin,
/// positive on ties; none when even the minimal width is too large.
std::optional<double> min_rotation_for_clearance(const WidthTable& table, double theta,
                                                 double clearance, double margin = 0.0);

/// Narrowest gap between static obstacles on both sides of the ray from
/// `position` along `heading`, within `lookahead`; none unless both sides
/// are bounded.
std::optional<double> corridor_width(const Point2& position, double heading, double lookahead,
                                     std::span<const Body* const> neighbors);

struct OrientationAgent {
  Point2 position;
  double orientation = 0.0;
  const AgentHull* hull = nullptr;    // body frame
  const WidthTable* widths = nullptr;
};

struct OrientationParams {
  double dt = 0.1;
  double omega_max = kPi;
  double clearance_margin = 0.0;  // absolute
  int turn_attempts = 4;          // a blocked turn is retried at half size this often
};

/// Turns toward the direction of v_new (or toward the nearest orientation
/// that fits the corridor), at most omega_max * dt. The turn is taken only if
/// the hull swept through it and along the step's motion stays farther from
/// every neighbor tuple than that neighbor can move in one step.
double update_orientation(const OrientationAgent& agent, const Vec2& v_new,
                          std::optional<double> corridor, std::span<const Body* const> neighbors,
                          const OrientationParams& params);

}  // namespace matnav

#endif  // MATNAV_ORIENTATION_H_
