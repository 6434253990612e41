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

#include "matnav/geom.h"

#include <algorithm>
#include <limits>
#include <random>

namespace matnav {

double normalize_angle(double a) {
  a = std::fmod(a, kTwoPi);
  if (a < 0.0) a += kTwoPi;
  if (a >= kTwoPi) a = 0.0;
  return a;
}

double wrap_angle(double a) {
  a = normalize_angle(a);
  return a > kPi ? a - kTwoPi : a;
}

double Arc::span() const {
  const double s = ccw ? normalize_angle(end - start) : normalize_angle(start - end);
  return s <= 0.0 ? kTwoPi : s;
}

Point2 Arc::point_at(double fraction) const {
  const double a = ccw ? start + fraction * span() : start - fraction * span();
  return circle.center + unit(a) * circle.radius;
}

bool Arc::contains_angle(double angle) const {
  const double from_start =
      ccw ? normalize_angle(angle - start) : normalize_angle(start - angle);
  return from_start <= span() + 1e-12;
}

Point2 piece_start(const OutlinePiece& p) {
  return std::visit(
      [](const auto& x) -> Point2 {
        if constexpr (std::is_same_v<std::decay_t<decltype(x)>, Arc>) {
          return x.start_point();
        } else {
          return x.a;
        }
      },
      p);
}

Point2 piece_end(const OutlinePiece& p) {
  return std::visit(
      [](const auto& x) -> Point2 {
        if constexpr (std::is_same_v<std::decay_t<decltype(x)>, Arc>) {
          return x.end_point();
        } else {
          return x.b;
        }
      },
      p);
}

double piece_length(const OutlinePiece& p) {
  return std::visit(
      [](const auto& x) -> double {
        if constexpr (std::is_same_v<std::decay_t<decltype(x)>, Arc>) {
          return x.span() * x.circle.radius;
        } else {
          return x.length();
        }
      },
      p);
}

bool Outline::closed(double tol) const {
  if (pieces.empty()) return false;
  for (std::size_t i = 0; i < pieces.size(); ++i) {
    const auto& next = pieces[(i + 1) % pieces.size()];
    if (distance(piece_end(pieces[i]), piece_start(next)) > tol) return false;
  }
  return true;
}

double Outline::perimeter() const {
  double total = 0.0;
  for (const auto& p : pieces) total += piece_length(p);
  return total;
}

std::vector<Point2> Outline::sample(std::size_t count) const {
  std::vector<Point2> out;
  const double total = perimeter();
  if (pieces.empty()) return out;
  out.reserve(count + pieces.size());
  for (const auto& p : pieces) {
    const double len = piece_length(p);
    const auto n = std::max<std::size_t>(
        1, total > 0.0 ? static_cast<std::size_t>(
                             std::llround(static_cast<double>(count) * len / total))
                       : 1);
    for (std::size_t i = 0; i < n; ++i) {
      const double f = static_cast<double>(i) / static_cast<double>(n);
      if (const auto* arc = std::get_if<Arc>(&p)) {
        out.push_back(arc->point_at(f));
      } else {
        const auto& s = std::get<Segment>(p);
        out.push_back(s.a + (s.b - s.a) * f);
      }
    }
  }
  return out;
}

bool TupleShape::degenerate() const {
  return distance(big.center, small.center) <= kGeomEps &&
         std::abs(big.radius - small.radius) <= kGeomEps;
}

Outline TupleShape::outline() const {
  Outline o;
  if (degenerate()) {
    o.pieces.emplace_back(Arc{big, 0.0, 0.0, true});
    return o;
  }
  const auto& [t1, t2, t3, t4] = tangents;
  o.pieces.emplace_back(Segment{t3, t4});
  if (small.radius > kGeomEps) {
    o.pieces.emplace_back(Arc{small, normalize_angle(angle_of(t4 - small.center)),
                              normalize_angle(angle_of(t2 - small.center)), true});
  }
  o.pieces.emplace_back(Segment{t2, t1});
  if (big.radius > kGeomEps) {
    o.pieces.emplace_back(Arc{big, normalize_angle(angle_of(t1 - big.center)),
                              normalize_angle(angle_of(t3 - big.center)), true});
  }
  return o;
}

TupleShape TupleShape::transformed(const Pose& pose) const {
  TupleShape out = *this;
  out.big.center = pose.apply(big.center);
  out.small.center = pose.apply(small.center);
  for (auto& t : out.tangents) t = pose.apply(t);
  out.theta = degenerate() ? 0.0 : normalize_angle(theta + pose.theta);
  return out;
}

TupleShape TupleShape::translated(const Vec2& t) const {
  TupleShape out = *this;
  out.big.center += t;
  out.small.center += t;
  for (auto& p : out.tangents) p += t;
  return out;
}

TupleShape make_tuple(const Circle& c_big, const Circle& c_small) {
  if (c_big.radius < 0.0 || c_small.radius < 0.0) {
    throw GeometryError("make_tuple: negative radius");
  }
  Circle big = c_big;
  Circle small = c_small;
  if (small.radius > big.radius) std::swap(big, small);

  TupleShape t;
  t.big = big;
  t.small = small;
  const Vec2 axis = small.center - big.center;
  const double d = norm(axis);
  if (d <= kGeomEps) {
    if (big.radius - small.radius <= kGeomEps) {
      t.small = t.big;
      const Vec2 up{0.0, big.radius};
      t.tangents = {big.center + up, big.center + up, big.center - up, big.center - up};
      t.theta = 0.0;
      return t;
    }
    throw ContainmentError("make_tuple: concentric circles of different radii");
  }
  if (d + small.radius <= big.radius + kGeomEps) {
    throw ContainmentError("make_tuple: small circle lies inside the big circle");
  }
  const Vec2 u = axis / d;
  const double cos_phi = std::clamp((big.radius - small.radius) / d, -1.0, 1.0);
  const double sin_phi = std::sqrt(std::max(0.0, 1.0 - cos_phi * cos_phi));
  const Vec2 n_left = u * cos_phi + perp(u) * sin_phi;
  const Vec2 n_right = u * cos_phi - perp(u) * sin_phi;
  t.tangents = {big.center + n_left * big.radius, small.center + n_left * small.radius,
                big.center + n_right * big.radius, small.center + n_right * small.radius};
  t.theta = normalize_angle(angle_of(u));
  return t;
}

namespace {

bool in_circle(const Point2& p, const Circle& c, double eps) {
  return distance(p, c.center) <= c.radius + eps;
}

}  // namespace

bool point_in_tuple(const Point2& p, const TupleShape& t, double eps) {
  if (in_circle(p, t.big, eps) || in_circle(p, t.small, eps)) return true;
  if (t.degenerate()) return false;
  const auto& [t1, t2, t3, t4] = t.tangents;
  // Quadrilateral T3 -> T4 -> T2 -> T1 is counterclockwise.
  const std::array<Point2, 4> quad{t3, t4, t2, t1};
  for (std::size_t i = 0; i < 4; ++i) {
    const Point2& a = quad[i];
    const Point2& b = quad[(i + 1) % 4];
    const Vec2 e = b - a;
    const double len = norm(e);
    if (len <= kGeomEps) continue;
    if (cross(e, p - a) / len < -eps) return false;
  }
  return true;
}

ClosestPoint closest_point_on_segment(const Point2& p, const Segment& s) {
  const Vec2 e = s.b - s.a;
  const double l2 = norm_sq(e);
  double f = l2 > 0.0 ? dot(p - s.a, e) / l2 : 0.0;
  f = std::clamp(f, 0.0, 1.0);
  const Point2 q = s.a + e * f;
  return {q, distance(p, q), 0};
}

ClosestPoint closest_point_on_arc(const Point2& p, const Arc& a) {
  const Vec2 rel = p - a.circle.center;
  if (norm(rel) > 0.0) {
    const double ang = normalize_angle(angle_of(rel));
    if (a.contains_angle(ang)) {
      const Point2 q = a.circle.center + unit(ang) * a.circle.radius;
      return {q, distance(p, q), 0};
    }
  }
  const Point2 s = a.start_point();
  const Point2 e = a.end_point();
  const double ds = distance(p, s);
  const double de = distance(p, e);
  return ds <= de ? ClosestPoint{s, ds, 0} : ClosestPoint{e, de, 0};
}

ClosestPoint closest_point_on_outline(const Point2& p, const Outline& o) {
  ClosestPoint best{p, std::numeric_limits<double>::infinity(), 0};
  for (std::size_t i = 0; i < o.pieces.size(); ++i) {
    ClosestPoint c = std::visit(
        [&](const auto& x) {
          if constexpr (std::is_same_v<std::decay_t<decltype(x)>, Arc>) {
            return closest_point_on_arc(p, x);
          } else {
            return closest_point_on_segment(p, x);
          }
        },
        o.pieces[i]);
    if (c.distance < best.distance) {
      best = c;
      best.piece = i;
    }
  }
  return best;
}

double distance_to_tuple(const Point2& p, const TupleShape& t) {
  if (point_in_tuple(p, t, 0.0)) return 0.0;
  double d = std::max(0.0, distance(p, t.big.center) - t.big.radius);
  d = std::min(d, std::max(0.0, distance(p, t.small.center) - t.small.radius));
  if (!t.degenerate()) {
    const auto& [t1, t2, t3, t4] = t.tangents;
    d = std::min(d, closest_point_on_segment(p, {t1, t2}).distance);
    d = std::min(d, closest_point_on_segment(p, {t3, t4}).distance);
  }
  return d;
}

double distance_to_union(const Point2& p, std::span<const TupleShape> region) {
  double d = std::numeric_limits<double>::infinity();
  for (const auto& t : region) {
    d = std::min(d, distance_to_tuple(p, t));
    if (d == 0.0) break;
  }
  return d;
}

bool point_in_union(const Point2& p, std::span<const TupleShape> region, double eps) {
  return std::any_of(region.begin(), region.end(),
                     [&](const TupleShape& t) { return point_in_tuple(p, t, eps); });
}

double segment_outline_distance(const Segment& s, std::span<const TupleShape> region) {
  return std::max(distance_to_union(s.a, region), distance_to_union(s.b, region));
}

Circle circumcircle(const Point2& a, const Point2& b, const Point2& c) {
  const Vec2 ab = b - a;
  const Vec2 ac = c - a;
  const double d = 2.0 * cross(ab, ac);
  const double scale = std::max({norm_sq(ab), norm_sq(ac), 1e-300});
  if (std::abs(d) <= 1e-12 * scale) {
    throw DegenerateError("circumcircle: collinear points");
  }
  const double ab2 = norm_sq(ab);
  const double ac2 = norm_sq(ac);
  const Vec2 rel{(ac.y * ab2 - ab.y * ac2) / d, (ab.x * ac2 - ac.x * ab2) / d};
  return {a + rel, norm(rel)};
}

namespace {

Circle circle_from_two(const Point2& a, const Point2& b) {
  return {(a + b) * 0.5, distance(a, b) * 0.5};
}

Circle circle_from_three(const Point2& a, const Point2& b, const Point2& c) {
  try {
    return circumcircle(a, b, c);
  } catch (const DegenerateError&) {
    Circle best = circle_from_two(a, b);
    for (const Circle& cand : {circle_from_two(a, c), circle_from_two(b, c)}) {
      if (cand.radius > best.radius) best = cand;
    }
    return best;
  }
}

bool covers(const Circle& c, const Point2& p) {
  return distance(c.center, p) <= c.radius * (1.0 + 1e-12) + 1e-12;
}

}  // namespace

Circle min_enclosing_circle(std::span<const Point2> points) {
  if (points.empty()) return {};
  std::vector<Point2> pts(points.begin(), points.end());
  std::mt19937 rng(0x5eed);
  std::shuffle(pts.begin(), pts.end(), rng);
  Circle c{pts[0], 0.0};
  for (std::size_t i = 1; i < pts.size(); ++i) {
    if (covers(c, pts[i])) continue;
    c = {pts[i], 0.0};
    for (std::size_t j = 0; j < i; ++j) {
      if (covers(c, pts[j])) continue;
      c = circle_from_two(pts[i], pts[j]);
      for (std::size_t k = 0; k < j; ++k) {
        if (covers(c, pts[k])) continue;
        c = circle_from_three(pts[i], pts[j], pts[k]);
      }
    }
  }
  return c;
}

Circle min_enclosing_circle_of_circles(std::span<const Circle> circles) {
  constexpr int kSamples = 512;
  std::vector<Point2> pts;
  pts.reserve(circles.size() * kSamples);
  double r_max = 0.0;
  for (const auto& c : circles) {
    r_max = std::max(r_max, c.radius);
    if (c.radius <= 0.0) {
      pts.push_back(c.center);
      continue;
    }
    for (int k = 0; k < kSamples; ++k) {
      pts.push_back(c.center + unit(kTwoPi * k / kSamples) * c.radius);
    }
  }
  Circle mec = min_enclosing_circle(pts);
  // Arcs between samples bulge at most one sagitta past their chords.
  mec.radius += r_max * (1.0 - std::cos(kPi / kSamples));
  return mec;
}

}  // namespace matnav
