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

#include "matnav/arc_hull.h"

#include <algorithm>
#include <limits>

namespace matnav {

namespace {

constexpr double kAngleEps = 1e-13;

bool in_range(double angle, double lo, double span) {
  return normalize_angle(angle - lo) <= span + kAngleEps ||
         span >= kTwoPi - kAngleEps;
}

// max over normals in [b, e] (0 <= b <= e <= 2pi) of v . n - r.
ArcHull::SignedDistance piece_max(const Vec2& v, double r, double b, double e) {
  const double rho = norm(v);
  if (rho > 0.0) {
    const double ang = normalize_angle(angle_of(v));
    if ((ang >= b && ang <= e) || (ang + kTwoPi >= b && ang + kTwoPi <= e)) {
      return {rho - r, ang};
    }
  }
  const double vb = dot(v, unit(b));
  const double ve = dot(v, unit(e));
  return vb >= ve ? ArcHull::SignedDistance{vb - r, b} : ArcHull::SignedDistance{ve - r, e};
}

bool same_generator(const HullPiece& a, const HullPiece& b) {
  return a.center == b.center && a.radius == b.radius;
}

}  // namespace

std::vector<HullPiece> ArcHull::canonicalize(std::vector<HullPiece> pieces, double shift) {
  std::vector<HullPiece> out;
  if (pieces.empty()) return out;
  const double base = std::floor((pieces.front().begin + shift) / kTwoPi) * kTwoPi;
  out.reserve(pieces.size() + 1);
  for (HullPiece p : pieces) {
    p.begin += shift - base;
    p.end += shift - base;
    if (p.end <= kTwoPi) {
      out.push_back(p);
    } else if (p.begin >= kTwoPi) {
      p.begin -= kTwoPi;
      p.end -= kTwoPi;
      out.push_back(p);
    } else {
      HullPiece head = p;
      head.end = kTwoPi;
      HullPiece tail = p;
      tail.begin = 0.0;
      tail.end = p.end - kTwoPi;
      out.push_back(head);
      out.push_back(tail);
    }
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const HullPiece& a, const HullPiece& b) { return a.begin < b.begin; });
  std::erase_if(out, [](const HullPiece& p) { return p.end - p.begin <= 0.0; });
  if (out.empty()) return out;
  out.front().begin = 0.0;
  for (std::size_t i = 1; i < out.size(); ++i) out[i].begin = out[i - 1].end;
  out.back().end = kTwoPi;
  return out;
}

ArcHull ArcHull::of_generators(std::span<const HullGenerator> gens) {
  if (gens.empty()) return {};
  std::vector<double> breaks{0.0};
  breaks.reserve(gens.size() * gens.size() * 2 + 2 * gens.size() + 1);
  for (std::size_t i = 0; i < gens.size(); ++i) {
    const auto& a = gens[i];
    if (a.restricted) {
      breaks.push_back(a.normal_lo);
      breaks.push_back(normalize_angle(a.normal_lo + a.normal_span));
    }
    for (std::size_t j = i + 1; j < gens.size(); ++j) {
      const auto& b = gens[j];
      const Vec2 diff = a.center - b.center;
      const double d = norm(diff);
      if (d <= 1e-14) continue;
      const double k = (b.radius - a.radius) / d;
      if (std::abs(k) > 1.0) continue;
      const double psi = angle_of(diff);
      const double alpha = std::acos(k);
      breaks.push_back(normalize_angle(psi + alpha));
      breaks.push_back(normalize_angle(psi - alpha));
    }
  }
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end(),
                           [](double x, double y) { return y - x <= kAngleEps; }),
               breaks.end());

  std::vector<HullPiece> pieces;
  pieces.reserve(breaks.size());
  std::size_t last_gen = gens.size();
  for (std::size_t k = 0; k < breaks.size(); ++k) {
    const double lo = breaks[k];
    const double hi = k + 1 < breaks.size() ? breaks[k + 1] : kTwoPi;
    if (hi - lo <= 0.0) continue;
    const double mid = 0.5 * (lo + hi);
    const Vec2 n = unit(mid);
    std::size_t best = gens.size();
    double best_val = -std::numeric_limits<double>::infinity();
    for (std::size_t g = 0; g < gens.size(); ++g) {
      const auto& gen = gens[g];
      if (gen.restricted && !in_range(mid, gen.normal_lo, gen.normal_span)) continue;
      const double val = dot(gen.center, n) + gen.radius;
      if (val > best_val) {
        best_val = val;
        best = g;
      }
    }
    if (best == gens.size()) continue;
    if (best == last_gen && !pieces.empty()) {
      pieces.back().end = hi;
    } else {
      pieces.push_back({gens[best].center, gens[best].radius, lo, hi});
      last_gen = best;
    }
  }
  return ArcHull(canonicalize(std::move(pieces), 0.0));
}

ArcHull ArcHull::of_circles(std::span<const Circle> circles) {
  std::vector<HullGenerator> gens;
  gens.reserve(circles.size());
  for (const auto& c : circles) gens.push_back(HullGenerator::circle(c));
  return of_generators(gens);
}

ArcHull ArcHull::of_circle(const Circle& c) {
  return ArcHull({HullPiece{c.center, c.radius, 0.0, kTwoPi}});
}

ArcHull ArcHull::of_tuple(const TupleShape& t) {
  if (t.degenerate()) return of_circle(t.big);
  const std::array<Circle, 2> cs{t.big, t.small};
  return of_circles(cs);
}

ArcHull ArcHull::from_pieces(std::vector<HullPiece> pieces) {
  if (pieces.empty()) return {};
  if (pieces.front().begin != 0.0 || pieces.back().end != kTwoPi) {
    throw GeometryError("hull pieces must cover [0, 2pi)");
  }
  for (std::size_t i = 0; i < pieces.size(); ++i) {
    if (!(pieces[i].end > pieces[i].begin) || (i > 0 && pieces[i].begin != pieces[i - 1].end)) {
      throw GeometryError("hull pieces must be contiguous and increasing");
    }
  }
  return ArcHull(std::move(pieces));
}

ArcHull ArcHull::of_segment(const Point2& a, const Point2& b) {
  const std::array<HullGenerator, 2> gens{HullGenerator::point(a), HullGenerator::point(b)};
  return of_generators(gens);
}

std::size_t ArcHull::piece_index(double normal_angle) const {
  const double a = normalize_angle(normal_angle);
  auto it = std::upper_bound(pieces_.begin(), pieces_.end(), a,
                             [](double v, const HullPiece& p) { return v < p.end; });
  if (it == pieces_.end()) return pieces_.size() - 1;
  return static_cast<std::size_t>(it - pieces_.begin());
}

double ArcHull::support(double normal_angle) const {
  const auto& p = pieces_[piece_index(normal_angle)];
  return dot(p.center, unit(normal_angle)) + p.radius;
}

Point2 ArcHull::boundary_point(double normal_angle) const {
  const auto& p = pieces_[piece_index(normal_angle)];
  return p.center + unit(normal_angle) * p.radius;
}

ArcHull::SignedDistance ArcHull::signed_distance(const Point2& p) const {
  SignedDistance best{-std::numeric_limits<double>::infinity(), 0.0};
  for (const auto& piece : pieces_) {
    // |v| - r bounds the piece from above; skip pieces that cannot win.
    const Vec2 v = p - piece.center;
    if (std::sqrt(norm_sq(v)) - piece.radius < best.distance - 1e-9) continue;
    const auto cand = piece_max(v, piece.radius, piece.begin, piece.end);
    if (cand.distance > best.distance) best = cand;
  }
  return best;
}

ArcHull::SignedDistance ArcHull::signed_distance(const Point2& p, double lo,
                                                 double span) const {
  SignedDistance best{-std::numeric_limits<double>::infinity(), 0.0};
  lo = normalize_angle(lo);
  span = std::clamp(span, 0.0, kTwoPi);
  const double hi = lo + span;
  const std::array<std::pair<double, double>, 2> ranges{
      std::pair{lo, std::min(hi, kTwoPi)},
      hi > kTwoPi ? std::pair{0.0, hi - kTwoPi} : std::pair{1.0, 0.0}};
  for (const auto& piece : pieces_) {
    if (std::sqrt(norm_sq(p - piece.center)) - piece.radius < best.distance - 1e-9) continue;
    for (const auto& [r0, r1] : ranges) {
      const double b = std::max(piece.begin, r0);
      const double e = std::min(piece.end, r1);
      if (e < b) continue;
      const auto cand = piece_max(p - piece.center, piece.radius, b, e);
      if (cand.distance > best.distance) best = cand;
    }
  }
  return best;
}

Point2 ArcHull::closest_boundary_point(const Point2& p) const {
  const auto sd = signed_distance(p);
  return p - unit(sd.normal) * sd.distance;
}

namespace {

struct MergedArc {
  Point2 center;
  double radius;
  double begin;
  double end;
};

std::vector<MergedArc> merged_arcs(std::span<const HullPiece> pieces) {
  std::vector<MergedArc> arcs;
  for (const auto& p : pieces) {
    if (!arcs.empty() && arcs.back().center == p.center && arcs.back().radius == p.radius) {
      arcs.back().end = p.end;
    } else {
      arcs.push_back({p.center, p.radius, p.begin, p.end});
    }
  }
  if (arcs.size() > 1 && arcs.front().center == arcs.back().center &&
      arcs.front().radius == arcs.back().radius) {
    arcs.front().begin = arcs.back().begin - kTwoPi;
    arcs.pop_back();
  }
  return arcs;
}

}  // namespace

Outline ArcHull::outline() const {
  Outline o;
  if (pieces_.empty()) return o;
  const auto arcs = merged_arcs(pieces_);
  if (arcs.size() == 1) {
    if (arcs[0].radius > 0.0) {
      o.pieces.emplace_back(Arc{{arcs[0].center, arcs[0].radius}, 0.0, 0.0, true});
    } else {
      o.pieces.emplace_back(Segment{arcs[0].center, arcs[0].center});
    }
    return o;
  }
  for (std::size_t k = 0; k < arcs.size(); ++k) {
    const auto& a = arcs[k];
    const auto& next = arcs[(k + 1) % arcs.size()];
    if (a.radius > 0.0 && a.end - a.begin > 1e-12) {
      o.pieces.emplace_back(Arc{{a.center, a.radius},
                                normalize_angle(a.begin), normalize_angle(a.end), true});
    }
    const Point2 from = a.center + unit(a.end) * a.radius;
    const Point2 to = next.center + unit(a.end) * next.radius;
    if (distance(from, to) > 1e-12) o.pieces.emplace_back(Segment{from, to});
  }
  return o;
}

double ArcHull::area() const {
  if (pieces_.empty()) return 0.0;
  double twice = 0.0;
  for (std::size_t k = 0; k < pieces_.size(); ++k) {
    const auto& p = pieces_[k];
    const double r = p.radius;
    const double a = p.begin;
    const double b = p.end;
    twice += r * r * (b - a) + r * p.center.x * (std::sin(b) - std::sin(a)) -
             r * p.center.y * (std::cos(b) - std::cos(a));
    const auto& next = pieces_[(k + 1) % pieces_.size()];
    const Point2 from = p.center + unit(b) * r;
    const Point2 to = next.center + unit(b) * next.radius;
    twice += cross(from, to);
  }
  return 0.5 * twice;
}

ArcHull ArcHull::translated(const Vec2& t) const {
  ArcHull out = *this;
  for (auto& p : out.pieces_) p.center += t;
  return out;
}

ArcHull ArcHull::rotated(double angle) const {
  std::vector<HullPiece> ps = pieces_;
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  for (auto& p : ps) p.center = {c * p.center.x - s * p.center.y, s * p.center.x + c * p.center.y};
  return ArcHull(canonicalize(std::move(ps), angle));
}

ArcHull ArcHull::scaled(double s) const {
  ArcHull out = *this;
  for (auto& p : out.pieces_) {
    p.center *= s;
    p.radius *= s;
  }
  return out;
}

ArcHull ArcHull::negated() const {
  std::vector<HullPiece> ps = pieces_;
  for (auto& p : ps) p.center = -p.center;
  return ArcHull(canonicalize(std::move(ps), kPi));
}

ArcHull ArcHull::offset(double r) const {
  ArcHull out = *this;
  for (auto& p : out.pieces_) p.radius += r;
  return out;
}

ArcHull minkowski_sum(const ArcHull& a, const ArcHull& b) {
  std::vector<HullPiece> out;
  if (a.empty() || b.empty()) return {};
  out.reserve(a.pieces_.size() + b.pieces_.size());
  std::size_t i = 0;
  std::size_t j = 0;
  double cur = 0.0;
  while (i < a.pieces_.size() && j < b.pieces_.size()) {
    const auto& pa = a.pieces_[i];
    const auto& pb = b.pieces_[j];
    const double end = std::min(pa.end, pb.end);
    if (end > cur) {
      HullPiece p{pa.center + pb.center, pa.radius + pb.radius, cur, end};
      if (!out.empty() && same_generator(out.back(), p)) {
        out.back().end = end;
      } else {
        out.push_back(p);
      }
      cur = end;
    }
    if (pa.end <= end) ++i;
    if (pb.end <= end) ++j;
  }
  out.back().end = kTwoPi;
  return ArcHull(std::move(out));
}

double separation(const ArcHull& a, const ArcHull& b) {
  return minkowski_sum(a, b.negated()).signed_distance({0.0, 0.0}).distance;
}

}  // namespace matnav
