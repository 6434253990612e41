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

#include "matnav/matrvo.h"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace matnav {

namespace {

// First normal after `from`, turning in direction `dir` (+1 or -1) by at
// most a half turn, where the support function becomes positive; it must be
// non-positive at `from` and positive a half turn away. Walks the pieces and
// solves c . n(phi) + r = 0 in closed form on the one where the sign flips.
double support_root(const ArcHull& m, double from, int dir) {
  const auto pieces = m.pieces();
  const std::size_t n = pieces.size();
  const double limit = from + dir * kPi;
  double shift = from - normalize_angle(from);
  std::size_t k = m.piece_index(from);
  double a = from;
  for (std::size_t step = 0; step <= n; ++step) {
    const HullPiece& p = pieces[k];
    double b = (dir > 0 ? p.end : p.begin) + shift;
    const bool last = dir > 0 ? b >= limit : b <= limit;
    if (last) b = limit;
    auto g = [&](double phi) { return dot(p.center, unit(phi)) + p.radius; };
    if (g(b) > 0.0) {
      const double c = norm(p.center);
      const double lo = std::min(a, b), hi = std::max(a, b);
      double best = b;
      if (c > 0.0) {
        const double alpha = angle_of(p.center);
        const double delta = std::acos(std::clamp(-p.radius / c, -1.0, 1.0));
        for (double root : {alpha + delta, alpha - delta}) {
          root += kTwoPi * std::round((0.5 * (lo + hi) - root) / kTwoPi);
          if (root < lo - 1e-12 || root > hi + 1e-12) continue;
          root = std::clamp(root, lo, hi);
          if (dir * (root - best) < 0.0) best = root;
        }
      }
      // Rounding can push the closed-form root off the piece; bisect then.
      if (best == b) {
        double neg = a, pos = b;
        for (int i = 0; i < 64; ++i) {
          const double mid = 0.5 * (neg + pos);
          (g(mid) <= 0.0 ? neg : pos) = mid;
        }
        best = neg;
      }
      return best;
    }
    if (last) return b;
    a = b;
    if (dir > 0) {
      if (++k == n) k = 0, shift += kTwoPi;
    } else {
      if (k == 0) k = n, shift -= kTwoPi;
      --k;
    }
  }
  return limit;
}

}  // namespace

VOCone velocity_obstacle(const MinkowskiOutline& m, double tau, double escape_time) {
  if (!(tau > 0.0)) throw std::invalid_argument("velocity_obstacle: tau must be positive");
  VOCone cone;
  const auto at_origin = m.region.signed_distance({0, 0});
  if (at_origin.distance <= kGeomEps) {
    cone.overlap = true;
    cone.front = m.region.scaled(1.0 / escape_time);
    return cone;
  }
  cone.front = m.region.scaled(1.0 / tau);
  // Normals whose support is non-positive are exactly the outward normals of
  // the cone; they form one interval around the direction back to the origin.
  const double n0 = at_origin.normal;
  const double hi = support_root(cone.front, n0, +1);
  const double lo = support_root(cone.front, n0, -1);
  cone.normal_lo = normalize_angle(lo);
  cone.normal_span = hi - lo;
  cone.right_leg = normalized(cone.front.boundary_point(lo));
  cone.left_leg = normalized(cone.front.boundary_point(hi));
  if (cross(cone.right_leg, cone.left_leg) < 0) std::swap(cone.left_leg, cone.right_leg);
  return cone;
}

std::optional<HalfPlane> orca_halfplane(const Vec2& v_a, const Vec2& v_b, const VOCone& cone,
                                        double share, double margin) {
  const Vec2 v_rel = v_a - v_b;
  const auto sd = cone.signed_distance(v_rel);
  if (sd.distance > margin) return std::nullopt;
  const Vec2 n = unit(sd.normal);
  const Vec2 u = n * -sd.distance;
  return HalfPlane{v_a + u * share, n};
}

ConstraintSet collect_constraints(const Body& agent, std::span<const Body* const> neighbors,
                                  const ConstraintOptions& options) {
  ConstraintSet cs;
  cs.v_max = agent.v_max;
  std::vector<const Body*> order(neighbors.begin(), neighbors.end());
  std::stable_sort(order.begin(), order.end(), [&](const Body* x, const Body* y) {
    const double dx = distance(x->position, agent.position);
    const double dy = distance(y->position, agent.position);
    return dx != dy ? dx < dy : x->id < y->id;
  });
  for (const Body* nb : order) {
    const double share = nb->is_static ? 1.0 : 0.5;
    for (std::size_t i = 0; i < agent.tuples.size(); ++i) {
      // Table entries come in the tuple's axis frame; the cone and plane are
      // built there and rotated back.
      const double frame = options.table != nullptr ? agent.tuples[i].theta : 0.0;
      const Vec2 v_a = rotate(agent.velocity, -frame);
      for (std::size_t j = 0; j < nb->tuples.size(); ++j) {
        ++cs.candidates;
        MinkowskiOutline m =
            options.table != nullptr
                ? options.table->lookup_local(agent.types[i], agent.tuples[i], nb->types[j], nb->tuples[j])
                : minkowski_two_tuples(agent.tuples[i], nb->tuples[j]);
        if (options.buffer > 0.0) m.region = m.region.offset(options.buffer);
        const VOCone cone = velocity_obstacle(m, options.tau, options.escape_time);
        if (auto hp = orca_halfplane(v_a, rotate(nb->velocity, -frame), cone, share, options.prune_margin)) {
          if (frame != 0.0) *hp = {rotate(hp->point, frame), rotate(hp->normal, frame)};
          cs.planes.push_back(*hp);
        }
      }
    }
  }
  return cs;
}

namespace {

// Slack below which a plane counts as violated; absorbs rounding when
// several tuple pairs yield the same plane.
constexpr double kSlackEps = 1e-12;

// Direction of a plane's boundary line with the permitted side on its left.
Vec2 line_dir(const HalfPlane& h) { return {h.normal.y, -h.normal.x}; }

// Closest point to `opt` on the boundary of plane i, subject to planes
// [0, i) and the speed disc.
bool solve_on_line(std::span<const HalfPlane> planes, std::size_t i, double radius, const Vec2& opt,
                   Vec2& result) {
  const HalfPlane& h = planes[i];
  const Vec2 d = line_dir(h);
  const double pd = dot(h.point, d);
  const double disc = pd * pd + radius * radius - norm_sq(h.point);
  if (disc < 0.0) return false;
  const double root = std::sqrt(disc);
  double t_lo = -pd - root;
  double t_hi = -pd + root;
  for (std::size_t j = 0; j < i; ++j) {
    const double denom = dot(planes[j].normal, d);
    const double num = planes[j].slack(h.point);
    if (std::abs(denom) <= 1e-12) {
      if (num < -kSlackEps) return false;
      continue;
    }
    const double t = -num / denom;
    if (denom > 0.0) {
      t_lo = std::max(t_lo, t);
    } else {
      t_hi = std::min(t_hi, t);
    }
    if (t_lo > t_hi) return false;
  }
  const double t = std::clamp(dot(d, opt - h.point), t_lo, t_hi);
  result = h.point + d * t;
  return true;
}

// Incremental pass; returns the index of the first plane that could not be
// satisfied, or planes.size() on success.
std::size_t solve_incremental(std::span<const HalfPlane> planes, double radius, const Vec2& opt,
                              Vec2& result) {
  result = norm_sq(opt) > radius * radius ? normalized(opt) * radius : opt;
  for (std::size_t i = 0; i < planes.size(); ++i) {
    if (planes[i].slack(result) < -kSlackEps) {
      const Vec2 keep = result;
      if (!solve_on_line(planes, i, radius, opt, result)) {
        result = keep;
        return i;
      }
    }
  }
  return planes.size();
}

double max_violation(std::span<const HalfPlane> planes, const Vec2& v) {
  double worst = 0.0;
  for (const auto& h : planes) worst = std::max(worst, -h.slack(v));
  return worst;
}

std::vector<HalfPlane> relaxed(std::span<const HalfPlane> planes, double t) {
  std::vector<HalfPlane> out(planes.begin(), planes.end());
  for (auto& h : out) h.point = h.point - h.normal * t;
  return out;
}

}  // namespace

VelocityResult solve_velocity(const ConstraintSet& cs, const Vec2& v_pref, double v_max) {
  if (!(v_max > 0.0)) throw std::invalid_argument("solve_velocity: v_max must be positive");
  VelocityResult r;
  r.feasible = solve_incremental(cs.planes, v_max, v_pref, r.velocity) == cs.planes.size();
  r.max_violation = max_violation(cs.planes, r.velocity);
  return r;
}

VelocityResult fallback_velocity(const ConstraintSet& cs, const Vec2& v_current, double v_max) {
  if (!(v_max > 0.0)) throw std::invalid_argument("fallback_velocity: v_max must be positive");
  Vec2 scratch;
  const auto feasible = [&](double t) {
    const auto planes = relaxed(cs.planes, t);
    return solve_incremental(planes, v_max, {0, 0}, scratch) == planes.size();
  };
  // The origin is in the disc, so its worst violation is an upper bound.
  double lo = 0.0;
  double hi = max_violation(cs.planes, {0, 0});
  if (!feasible(lo)) {
    const double tol = 1e-12 * std::max(1.0, hi);
    while (hi - lo > tol) {
      const double mid = 0.5 * (lo + hi);
      (feasible(mid) ? hi : lo) = mid;
    }
  } else {
    hi = 0.0;
  }
  VelocityResult r;
  const auto planes = relaxed(cs.planes, hi);
  if (solve_incremental(planes, v_max, v_current, r.velocity) != planes.size()) {
    // Rounding at the bisection limit; the minimax point itself is still fine.
    solve_incremental(relaxed(cs.planes, hi * (1 + 1e-9) + 1e-12), v_max, v_current, r.velocity);
  }
  r.feasible = false;
  r.max_violation = max_violation(cs.planes, r.velocity);
  return r;
}

VelocityResult select_velocity(const ConstraintSet& cs, const Vec2& v_pref, const Vec2& v_current,
                               double v_max) {
  VelocityResult r = solve_velocity(cs, v_pref, v_max);
  if (r.feasible) return r;
  return fallback_velocity(cs, v_current, v_max);
}

}  // namespace matnav
