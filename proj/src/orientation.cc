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

#include "matnav/orientation.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "matnav/minkowski.h"

namespace matnav {

AgentHull convex_hull_of_tuples(std::span<const TupleShape> tuples) {
  if (tuples.empty()) throw GeometryError("convex_hull_of_tuples: no tuples");
  AgentHull hull;
  for (const auto& t : tuples) {
    hull.circles.push_back(t.big);
    if (!t.degenerate()) hull.circles.push_back(t.small);
  }
  hull.region = ArcHull::of_circles(hull.circles);
  return hull;
}

double width(const AgentHull& hull, double theta) { return hull.region.width(theta + 0.5 * kPi); }

namespace {

double eval(const WidthTable::Interval& iv, double theta) {
  return iv.radii + dot(iv.delta, unit(theta + 0.5 * kPi));
}

// theta reduced to [0, pi).
double reduce(double theta) {
  double t = std::fmod(theta, kPi);
  if (t < 0) t += kPi;
  return t >= kPi ? 0.0 : t;
}

}  // namespace

WidthTable WidthTable::build(const AgentHull& hull, double resolution) {
  std::vector<double> cuts{0.0, kPi};
  for (const auto& p : hull.region.pieces()) cuts.push_back(reduce(p.begin - 0.5 * kPi));
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end(), [](double a, double b) { return b - a < 1e-14; }),
             cuts.end());
  cuts.back() = kPi;
  std::vector<Interval> intervals;
  const auto pieces = hull.region.pieces();
  for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
    const double mid = 0.5 * (cuts[k] + cuts[k + 1]);
    const HullPiece& pi = pieces[hull.region.piece_index(mid + 0.5 * kPi)];
    const HullPiece& pj = pieces[hull.region.piece_index(mid + 1.5 * kPi)];
    const Interval iv{cuts[k], cuts[k + 1], pi.center - pj.center, pi.radius + pj.radius};
    if (!intervals.empty() && intervals.back().delta == iv.delta && intervals.back().radii == iv.radii) {
      intervals.back().end = iv.end;
    } else {
      intervals.push_back(iv);
    }
  }
  return from_intervals(std::move(intervals), resolution);
}

WidthTable WidthTable::from_intervals(std::vector<Interval> intervals, double resolution) {
  if (!(resolution > 0.0)) throw std::invalid_argument("width table resolution must be positive");
  if (intervals.empty() || intervals.front().begin != 0.0 || intervals.back().end != kPi) {
    throw std::invalid_argument("width table intervals must cover [0, pi)");
  }
  WidthTable t;
  t.intervals_ = std::move(intervals);
  t.resolution_ = resolution;
  t.index();
  return t;
}

void WidthTable::index() {
  const int buckets = std::max(1, static_cast<int>(std::ceil(kPi / resolution_)));
  bucket_start_.assign(buckets, 0);
  std::size_t k = 0;
  for (int b = 0; b < buckets; ++b) {
    const double start = b * resolution_;
    while (k + 1 < intervals_.size() && intervals_[k].end <= start) ++k;
    bucket_start_[b] = static_cast<int>(k);
  }
  min_ = std::numeric_limits<double>::infinity();
  max_ = -min_;
  for (const auto& iv : intervals_) {
    std::vector<double> probes{iv.begin, iv.end};
    // Extremes of r + |delta| cos(theta + pi/2 - alpha).
    const double crit = angle_of(iv.delta) - 0.5 * kPi;
    for (int s = -2; s <= 2; ++s) {
      const double x = crit + s * kPi;
      if (x > iv.begin && x < iv.end) probes.push_back(x);
    }
    for (double x : probes) {
      min_ = std::min(min_, eval(iv, x));
      max_ = std::max(max_, eval(iv, x));
    }
  }
}

double WidthTable::operator()(double theta) const {
  const double t = reduce(theta);
  const int b = std::min(static_cast<int>(t / resolution_), static_cast<int>(bucket_start_.size()) - 1);
  std::size_t k = bucket_start_[b];
  while (k + 1 < intervals_.size() && t >= intervals_[k].end) ++k;
  return eval(intervals_[k], t);
}

namespace {

// First (forward) or last (backward) x in [lo, hi] with f(x) <= target, where
// f = r + A cos(x - gamma) on this interval.
std::optional<double> crossing(const WidthTable::Interval& iv, double shift, double lo, double hi,
                               double target, bool forward) {
  const auto f = [&](double x) { return eval(iv, x - shift); };
  const double start = forward ? lo : hi;
  if (f(start) <= target) return start;
  const double a = norm(iv.delta);
  if (a == 0.0) return std::nullopt;
  const double q = (target - iv.radii) / a;
  if (q < -1.0) return std::nullopt;
  const double gamma = angle_of(iv.delta) - 0.5 * kPi + shift;
  const double acq = std::acos(std::min(q, 1.0));
  std::optional<double> best;
  for (int k = -3; k <= 3; ++k) {
    for (double x : {gamma + acq + k * kTwoPi, gamma - acq + k * kTwoPi}) {
      if (x < lo || x > hi) continue;
      if (!best || (forward ? x < *best : x > *best)) best = x;
    }
  }
  return best;
}

}  // namespace

std::optional<double> min_rotation_for_clearance(const WidthTable& table, double theta,
                                                 double clearance, double margin) {
  if (!(clearance > 0.0)) throw std::invalid_argument("clearance must be positive");
  const double target = clearance - margin;
  if (table(theta) <= target) return 0.0;
  if (table.min_width() > target + 1e-12) return std::nullopt;
  const auto ivs = table.intervals();
  const double t0 = reduce(theta);
  const double base = theta - t0;
  std::size_t k0 = 0;
  while (k0 + 1 < ivs.size() && t0 >= ivs[k0].end) ++k0;

  std::optional<double> fwd;
  {
    double shift = base;
    std::size_t k = k0;
    for (std::size_t n = 0; n <= ivs.size() && !fwd; ++n) {
      const double lo = std::max(ivs[k].begin + shift, theta);
      fwd = crossing(ivs[k], shift, lo, ivs[k].end + shift, target, true);
      if (++k == ivs.size()) {
        k = 0;
        shift += kPi;
      }
    }
  }
  std::optional<double> bwd;
  {
    double shift = base;
    std::size_t k = k0;
    for (std::size_t n = 0; n <= ivs.size() && !bwd; ++n) {
      const double hi = std::min(ivs[k].end + shift, theta);
      bwd = crossing(ivs[k], shift, ivs[k].begin + shift, hi, target, false);
      if (k-- == 0) {
        k = ivs.size() - 1;
        shift -= kPi;
      }
    }
  }
  if (!fwd && !bwd) return std::nullopt;
  const double df = fwd ? *fwd - theta : std::numeric_limits<double>::infinity();
  const double db = bwd ? theta - *bwd : std::numeric_limits<double>::infinity();
  return df <= db ? df : -db;
}

std::optional<double> corridor_width(const Point2& position, double heading, double lookahead,
                                     std::span<const Body* const> neighbors) {
  const Vec2 e = unit(heading);
  const Vec2 l = perp(e);
  double left = std::numeric_limits<double>::infinity();
  double right = left;
  for (const Body* nb : neighbors) {
    if (!nb->is_static) continue;
    for (const auto& t : nb->tuples) {
      double tl = left, tr = right;
      bool on_left = false, on_right = false;
      for (const auto& p : t.outline().sample(64)) {
        const double s = dot(p - position, e);
        if (s < 0.0 || s > lookahead) continue;
        const double y = dot(p - position, l);
        if (y >= 0) {
          on_left = true;
          tl = std::min(tl, y);
        } else {
          on_right = true;
          tr = std::min(tr, -y);
        }
      }
      if (on_left && on_right) continue;  // straddles the path: not a side wall
      left = tl;
      right = tr;
    }
  }
  if (std::isinf(left) || std::isinf(right)) return std::nullopt;
  return left + right;
}

double update_orientation(const OrientationAgent& agent, const Vec2& v_new,
                          std::optional<double> corridor, std::span<const Body* const> neighbors,
                          const OrientationParams& params) {
  if (!(params.omega_max > 0.0)) throw std::invalid_argument("omega_max must be positive");
  const double o = agent.orientation;
  if (norm(v_new) <= 1e-9) return o;
  const double heading = angle_of(v_new);
  double target = heading;
  if (corridor && agent.widths != nullptr) {
    const WidthTable& w = *agent.widths;
    const double fit = *corridor - params.clearance_margin;
    if (w(heading - o) > fit) {
      const auto d = min_rotation_for_clearance(w, heading - o, *corridor, params.clearance_margin);
      target = d ? o - *d : o;
    }
  }
  const double limit = params.omega_max * params.dt;
  const double full = std::clamp(wrap_angle(target - o), -limit, limit);
  if (std::abs(full) < 1e-12) return o;

  std::vector<Circle> world;
  world.reserve(agent.hull->circles.size());
  const Pose pose{agent.position, o};
  double sweep_radius = norm(v_new) * params.dt;  // bounds the swept hull about the position
  for (const auto& c : agent.hull->circles) {
    world.push_back({pose.apply(c.center), c.radius});
    sweep_radius = std::max(sweep_radius, norm(c.center) + c.radius + norm(v_new) * params.dt);
  }
  std::vector<ArcHull> obstacles;
  std::vector<double> reach;
  for (const Body* nb : neighbors) {
    const double r = nb->is_static ? 0.0 : nb->v_max * params.dt;
    for (const auto& t : nb->tuples) {
      // Tuples are inside their axis grown by the larger radius; skip those
      // that cannot come within reach of the swept hull.
      const double lower = closest_point_on_segment(agent.position, {t.big.center, t.small.center}).distance -
                           std::max(t.big.radius, t.small.radius);
      if (lower - sweep_radius > r + 1e-9) continue;
      obstacles.push_back(ArcHull::of_tuple(t));
      reach.push_back(r);
    }
  }
  if (obstacles.empty()) return wrap_angle(o + full);
  const ArcHull motion = ArcHull::of_segment({0, 0}, v_new * params.dt);
  // Swept hull over the step: rotation about the position, then the motion.
  // A turn that is blocked may still fit when halved.
  double delta = full;
  for (int attempt = 0; attempt < std::max(1, params.turn_attempts); ++attempt, delta *= 0.5) {
    const ArcHull swept = minkowski_sum(
        swept_circles(world, agent.position, std::min(0.0, delta), std::max(0.0, delta)), motion);
    bool clear = true;
    for (std::size_t k = 0; k < obstacles.size() && clear; ++k) {
      clear = separation(swept, obstacles[k]) > reach[k];
    }
    if (clear) return wrap_angle(o + delta);
  }
  return o;
}

}  // namespace matnav
