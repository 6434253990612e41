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

// Reciprocal velocity obstacles for tuple-shaped agents: cones built from
// Minkowski sums, half-plane constraints, and the velocity LP.

#ifndef MATNAV_MATRVO_H_
#define MATNAV_MATRVO_H_

#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "matnav/arc_hull.h"
#include "matnav/minkowski.h"

namespace matnav {

/// Relative velocities that bring the two regions into contact within the
/// horizon: the union over t in (0, tau] of M / t. Convex; its boundary is
/// the part of M / tau facing the origin plus two tangent legs.
struct VOCone {
  ArcHull front;           // M / tau, or M / escape_time when overlapping
  double normal_lo = 0.0;  // outward normals of the cone: [lo, lo + span]
  double normal_span = kTwoPi;
  Vec2 left_leg;           // unit leg directions; zero when overlapping
  Vec2 right_leg;
  bool overlap = false;    // origin inside M

  /// Negative inside; outward normal angle of the nearest boundary point.
  ArcHull::SignedDistance signed_distance(const Vec2& v) const {
    return front.signed_distance(v, normal_lo, normal_span);
  }
  bool contains(const Vec2& v, double eps = 0.0) const { return signed_distance(v).distance <= eps; }
};

/// When the regions already overlap there is no cone; the constraint pushes
/// the relative velocity out of M / escape_time instead, the velocity that
/// separates the pair within one escape interval.
VOCone velocity_obstacle(const MinkowskiOutline& m, double tau, double escape_time = 0.1);

/// Permitted side is dot(v - point, normal) >= 0.
struct HalfPlane {
  Point2 point;
  Vec2 normal;

  double slack(const Vec2& v) const { return dot(v - point, normal); }
};

/// The cone's nearest boundary point to v_rel = v_a - v_b gives u; the plane
/// passes through v_a + share * u with the cone's outward normal there.
/// Returns none when v_rel is outside the cone by more than `margin`.
std::optional<HalfPlane> orca_halfplane(const Vec2& v_a, const Vec2& v_b, const VOCone& cone,
                                        double share,
                                        double margin = std::numeric_limits<double>::infinity());

/// What the constraint builder needs to know about one agent: its tuples in
/// world coordinates and, for table lookups, their tuple-type ids.
struct Body {
  int id = 0;
  Point2 position;
  std::vector<TupleShape> tuples;
  std::vector<int> types;
  Vec2 velocity;
  double v_max = 1.0;
  bool is_static = false;
};

struct ConstraintOptions {
  double tau = 2.0;
  double escape_time = 0.1;
  /// Distance outside the cone beyond which a pair contributes nothing. Safe
  /// when it exceeds the largest possible change of relative velocity.
  double prune_margin = std::numeric_limits<double>::infinity();
  const MinkTable* table = nullptr;
  double buffer = 0.0;  // clearance kept between tuples on top of contact
};

struct ConstraintSet {
  std::vector<HalfPlane> planes;
  double v_max = 1.0;
  int candidates = 0;  // tuple pairs examined, before pruning
};

/// One candidate half-plane per (agent tuple, neighbor tuple) pair, ordered
/// by neighbor center distance, then neighbor id, then pair index.
ConstraintSet collect_constraints(const Body& agent, std::span<const Body* const> neighbors,
                                  const ConstraintOptions& options);

struct VelocityResult {
  Vec2 velocity;
  bool feasible = true;
  double max_violation = 0.0;
};

/// Point of the feasible region (half-planes and speed disc) closest to
/// v_pref, by the incremental 2D LP; feasible=false when the region is empty
/// (the velocity is then meaningless, see fallback_velocity).
VelocityResult solve_velocity(const ConstraintSet& cs, const Vec2& v_pref, double v_max);

/// Velocity in the speed disc minimizing the largest violation over all
/// planes; among the minimizers, the one closest to v_current.
VelocityResult fallback_velocity(const ConstraintSet& cs, const Vec2& v_current, double v_max);

/// solve_velocity, then fallback_velocity if that fails.
VelocityResult select_velocity(const ConstraintSet& cs, const Vec2& v_pref, const Vec2& v_current,
                               double v_max);

}  // namespace matnav

#endif  // MATNAV_MATRVO_H_
