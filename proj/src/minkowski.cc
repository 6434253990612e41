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

#include "matnav/minkowski.h"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

namespace matnav {

TupleShape offset_tuple(const TupleShape& t, double r) {
  if (r < 0) throw GeometryError("offset_tuple: negative radius");
  const Circle big{t.big.center, t.big.radius + r};
  if (t.degenerate()) return make_tuple(big, big);
  return make_tuple(big, {t.small.center, t.small.radius + r});
}

MinkowskiOutline minkowski_two_tuples(const TupleShape& a, const TupleShape& b) {
  std::vector<Circle> as{a.big};
  if (!a.degenerate()) as.push_back(a.small);
  std::vector<Circle> bs{b.big};
  if (!b.degenerate()) bs.push_back(b.small);
  // B grown by each radius of A and moved by minus that circle's center.
  std::vector<Circle> placed;
  for (const auto& ca : as) {
    for (const auto& cb : bs) placed.push_back({cb.center - ca.center, cb.radius + ca.radius});
  }
  return {ArcHull::of_circles(placed), Provenance::kExact};
}

ArcHull swept_circles(std::span<const Circle> circles, const Point2& pivot, double from, double to) {
  const double span = to - from;
  std::vector<HullGenerator> gens;
  for (const auto& c : circles) {
    const Vec2 rel = c.center - pivot;
    const double rho = norm(rel);
    if (span <= 0.0 || rho <= 1e-12) {
      gens.push_back(HullGenerator::circle({pivot + rotate(rel, from), c.radius}));
      continue;
    }
    if (span >= kTwoPi) {
      gens.push_back(HullGenerator::circle({pivot, rho + c.radius}));
      continue;
    }
    gens.push_back(HullGenerator::circle({pivot + rotate(rel, from), c.radius}));
    gens.push_back(HullGenerator::circle({pivot + rotate(rel, to), c.radius}));
    // The far point of the circle traces an arc of radius rho + r about the
    // pivot; it supports the hull exactly for normals inside the sweep.
    const double psi = angle_of(rel);
    gens.push_back(HullGenerator::arc(pivot, rho + c.radius, psi + from, span));
    gens.push_back(HullGenerator::point(pivot + unit(psi + from) * (rho + c.radius)));
    gens.push_back(HullGenerator::point(pivot + unit(psi + to) * (rho + c.radius)));
  }
  return ArcHull::of_generators(gens);
}

ArcHull swept_tuple(const TupleShape& t, double from, double to) {
  if (t.degenerate()) return ArcHull::of_circle(t.big);
  const std::array<Circle, 2> cs{t.big, t.small};
  return swept_circles(cs, t.big.center, from, to);
}

int bucket_count_for(double theta_e) {
  if (!(theta_e > 0.0 && theta_e < kTwoPi)) {
    throw std::invalid_argument(fmt::format("bucket width {} outside (0, 2pi)", theta_e));
  }
  const double q = kTwoPi / theta_e;
  const int whole = static_cast<int>(std::floor(q + 1e-9));
  return std::abs(q - whole) <= 1e-9 ? whole : whole + 1;
}

namespace {

// Big center at the origin, axis along +x.
TupleShape canonical(const TupleShape& t) {
  return t.translated(-t.big.center).transformed(Pose{{0, 0}, -t.theta});
}

}  // namespace

MinkTable MinkTable::build(const ShapeLibrary& library, double theta_e) {
  MinkTable table;
  table.theta_e_ = theta_e;
  table.buckets_ = bucket_count_for(theta_e);
  table.offsets_.push_back(0);
  std::vector<TupleShape> types;
  for (const auto& s : library) {
    for (const auto& t : s.shape.tuples) types.push_back(canonical(t));
    table.offsets_.push_back(static_cast<int>(types.size()));
  }
  const int n = static_cast<int>(types.size());
  table.entries_.reserve(static_cast<std::size_t>(n) * n * table.buckets_);
  for (int ta = 0; ta < n; ++ta) {
    const ArcHull neg_a = ArcHull::of_tuple(types[ta]).negated();
    for (int tb = 0; tb < n; ++tb) {
      for (int k = 0; k < table.buckets_; ++k) {
        const double from = k * theta_e;
        const double to = std::min((k + 1) * theta_e, kTwoPi);
        table.entries_.push_back(minkowski_sum(swept_tuple(types[tb], from, to), neg_a));
      }
    }
  }
  return table;
}

MinkTable MinkTable::from_parts(double theta_e, std::vector<int> offsets, std::vector<ArcHull> entries) {
  MinkTable table;
  table.theta_e_ = theta_e;
  table.buckets_ = bucket_count_for(theta_e);
  table.offsets_ = std::move(offsets);
  table.entries_ = std::move(entries);
  const std::size_t n = table.offsets_.empty() ? 0 : table.offsets_.back();
  if (table.entries_.size() != n * n * table.buckets_) {
    throw std::invalid_argument("table entry count does not match its type count");
  }
  return table;
}

int MinkTable::type_id(int shape, int tuple) const {
  if (shape < 0 || shape + 1 >= static_cast<int>(offsets_.size()) || tuple < 0 ||
      offsets_[shape] + tuple >= offsets_[shape + 1]) {
    throw UnknownShapeType(fmt::format("no tuple type ({}, {}) in table", shape, tuple));
  }
  return offsets_[shape] + tuple;
}

int MinkTable::bucket(double relative_angle) const {
  const int k = static_cast<int>(std::floor(normalize_angle(relative_angle) / theta_e_));
  return std::clamp(k, 0, buckets_ - 1);
}

const ArcHull& MinkTable::entry(int type_a, int type_b, int bucket) const {
  const int n = type_count();
  if (type_a < 0 || type_a >= n || type_b < 0 || type_b >= n) {
    throw UnknownShapeType(fmt::format("tuple type pair ({}, {}) not in table", type_a, type_b));
  }
  return entries_[(static_cast<std::size_t>(type_a) * n + type_b) * buckets_ + bucket];
}

MinkowskiOutline MinkTable::lookup_local(int type_a, const TupleShape& a, int type_b, const TupleShape& b) const {
  const ArcHull& e = entry(type_a, type_b, bucket(b.theta - a.theta));
  const Vec2 offset = rotate(b.big.center - a.big.center, -a.theta);
  return {e.translated(offset), Provenance::kTable};
}

MinkowskiOutline MinkTable::lookup(int type_a, const TupleShape& a, int type_b, const TupleShape& b) const {
  MinkowskiOutline m = lookup_local(type_a, a, type_b, b);
  m.region = m.region.rotated(a.theta);
  return m;
}

}  // namespace matnav
