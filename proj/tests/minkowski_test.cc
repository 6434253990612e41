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

#include <random>

#include "gtest/gtest.h"
#include "test_util.h"

namespace matnav {
namespace {

using testing::uniform;

// Support of a tuple straight from its two circles.
double tuple_support(const TupleShape& t, double phi) {
  const Vec2 n = unit(phi);
  return std::max(dot(n, t.big.center) + t.big.radius, dot(n, t.small.center) + t.small.radius);
}

using testing::random_point_in_tuple;

ShapeLibrary library_of(std::vector<std::vector<TupleShape>> shapes) {
  ShapeLibrary lib;
  for (std::size_t i = 0; i < shapes.size(); ++i) {
    CTMATShape s;
    s.tuples = std::move(shapes[i]);
    lib.push_back({"s" + std::to_string(i), s});
  }
  return lib;
}

// ---- offset_tuple -------------------------------------------------------------

TEST(OffsetTuple, ZeroIsIdentity) {
  const TupleShape t = make_tuple({{0, 0}, 1.5}, {{2, 1}, 0.5});
  const TupleShape o = offset_tuple(t, 0.0);
  EXPECT_EQ(o.big, t.big);
  EXPECT_EQ(o.small, t.small);
  for (int i = 0; i < 4; ++i) EXPECT_NEAR(distance(o.tangents[i], t.tangents[i]), 0.0, 1e-12);
}

TEST(OffsetTuple, DiscGrows) {
  const TupleShape t = make_tuple({{1, 1}, 1}, {{1, 1}, 1});
  const TupleShape o = offset_tuple(t, 2.0);
  EXPECT_TRUE(o.degenerate());
  EXPECT_NEAR(o.big.radius, 3.0, 1e-12);
}

TEST(OffsetTuple, CapsuleDilationArea) {
  const TupleShape t = make_tuple({{0, 0}, 1}, {{2, 0}, 1});
  const TupleShape o = offset_tuple(t, 1.0);
  EXPECT_EQ(o.big.center, t.big.center);
  EXPECT_EQ(o.small.center, t.small.center);
  EXPECT_NEAR(o.big.radius, 2.0, 1e-12);
  // Closed form: pi R^2 + 2 R d with R = 2, d = 2.
  const double closed = 4 * kPi + 8;
  EXPECT_NEAR(ArcHull::of_tuple(o).area(), closed, 1e-6);
  // Monte Carlo over the dilation definition: within distance 1 of the capsule.
  std::mt19937_64 rng(3);
  int in = 0;
  constexpr int n = 200000;
  for (int i = 0; i < n; ++i) {
    const Point2 p{uniform(rng, -2, 4), uniform(rng, -2, 2)};
    in += testing::interpolated_disc_gap(p, t.big, t.small, 200) <= 1.0;
  }
  const double frac = static_cast<double>(in) / n;
  EXPECT_NEAR(24 * frac, closed, 4 * 24 * std::sqrt(frac * (1 - frac) / n));
}

TEST(OffsetTupleProperty, SupportGrowsByRadius) {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 200; ++i) {
    const TupleShape t = testing::random_tuple(rng);
    const double r = uniform(rng, 0, 2);
    const TupleShape o = offset_tuple(t, r);
    for (int k = 0; k < 36; ++k) {
      EXPECT_NEAR(tuple_support(o, k * kPi / 18), tuple_support(t, k * kPi / 18) + r, 1e-9);
    }
  }
}

// ---- minkowski_two_tuples -----------------------------------------------------

TEST(MinkowskiTwoTuples, PointOperandTranslates) {
  const TupleShape a = make_tuple({{1.5, -2}, 0}, {{1.5, -2}, 0});
  const TupleShape b = make_tuple({{0, 0}, 1}, {{3, 1}, 0.5});
  const auto m = minkowski_two_tuples(a, b);
  const TupleShape shifted = b.translated({-1.5, 2});
  for (int k = 0; k < 72; ++k) {
    EXPECT_NEAR(m.region.support(k * kPi / 36), tuple_support(shifted, k * kPi / 36), 1e-12);
  }
  EXPECT_EQ(m.provenance, Provenance::kExact);
}

TEST(MinkowskiTwoTuples, TwoDiscs) {
  const TupleShape a = make_tuple({{0, 0}, 1}, {{0, 0}, 1});
  const TupleShape b = make_tuple({{5, 0}, 1}, {{5, 0}, 1});
  const auto m = minkowski_two_tuples(a, b);
  const Outline o = m.outline();
  ASSERT_EQ(o.pieces.size(), 1u);
  const Arc& arc = std::get<Arc>(o.pieces[0]);
  EXPECT_NEAR(arc.circle.center.x, 5.0, 1e-12);
  EXPECT_NEAR(arc.circle.center.y, 0.0, 1e-12);
  EXPECT_NEAR(arc.circle.radius, 2.0, 1e-12);
}

TEST(MinkowskiTwoTuplesProperty, SamplingBothDirections) {
  std::mt19937_64 rng(7);
  for (int iter = 0; iter < 10; ++iter) {
    const TupleShape a = testing::random_tuple(rng);
    const TupleShape b = testing::random_tuple(rng);
    const auto m = minkowski_two_tuples(a, b);
    // Every difference b - a is inside.
    for (int i = 0; i < 10000; ++i) {
      const Point2 d = random_point_in_tuple(b, rng) - random_point_in_tuple(a, rng);
      ASSERT_LE(m.region.signed_distance(d).distance, 1e-9);
    }
    // Every boundary point is realized by some pair: take the outward normal
    // from neighboring boundary samples and the extreme sampled points of A
    // and B in that direction.
    const auto sa = a.outline().sample(20000);
    const auto sb = b.outline().sample(20000);
    const auto boundary = m.outline().sample(3000);
    for (std::size_t i = 0; i < boundary.size(); i += 3) {
      const Point2 q = boundary[i];
      const Vec2 chord = boundary[(i + 1) % boundary.size()] - boundary[(i + boundary.size() - 1) % boundary.size()];
      const Vec2 n = normalized(Vec2{chord.y, -chord.x});
      // On flat stretches several pairs are extreme; search all of them.
      double hb = -1e300, ha = 1e300;
      for (const auto& p : sb) hb = std::max(hb, dot(p, n));
      for (const auto& p : sa) ha = std::min(ha, dot(p, n));
      std::vector<Point2> fb, fa;
      for (const auto& p : sb) {
        if (dot(p, n) >= hb - 1e-5) fb.push_back(p);
      }
      for (const auto& p : sa) {
        if (dot(p, n) <= ha + 1e-5) fa.push_back(p);
      }
      double best = 1e300;
      for (const auto& pb : fb) {
        for (const auto& pa : fa) best = std::min(best, distance(pb - pa, q));
      }
      EXPECT_LE(best, 1e-3);
    }
  }
}

TEST(MinkowskiTwoTuplesProperty, AreaMatchesSampledHullOfDifferences) {
  std::mt19937_64 rng(11);
  for (int iter = 0; iter < 10; ++iter) {
    const TupleShape a = testing::random_tuple(rng);
    const TupleShape b = testing::random_tuple(rng);
    const auto m = minkowski_two_tuples(a, b);
    const auto sa = a.outline().sample(400);
    const auto sb = b.outline().sample(400);
    std::vector<Point2> diffs;
    diffs.reserve(sa.size() * sb.size());
    for (const auto& pb : sb) {
      for (const auto& pa : sa) diffs.push_back(pb - pa);
    }
    const auto hull = testing::convex_hull_points(diffs);
    // The sampled hull is inscribed, so the symmetric difference is the area
    // gap, bounded by perimeter times the sampling sagitta.
    const double poly = testing::polygon_area(hull);
    const double exact = m.region.area();
    const double perim = m.outline().perimeter();
    const double step = (a.outline().perimeter() + b.outline().perimeter()) / 400;
    EXPECT_GE(exact, poly - 1e-9);
    EXPECT_LE(exact - poly, perim * step * step);
    for (const auto& v : hull) EXPECT_LE(m.region.signed_distance(v).distance, 1e-9);
  }
}

TEST(MinkowskiTwoTuplesProperty, TranslationEquivariance) {
  std::mt19937_64 rng(13);
  for (int iter = 0; iter < 100; ++iter) {
    const TupleShape a = testing::random_tuple(rng);
    const TupleShape b = testing::random_tuple(rng);
    const Vec2 v{uniform(rng, -5, 5), uniform(rng, -5, 5)};
    const auto m = minkowski_two_tuples(a, b);
    const auto mb = minkowski_two_tuples(a, b.translated(v));
    const auto ma = minkowski_two_tuples(a.translated(v), b);
    for (int k = 0; k < 72; ++k) {
      const double phi = k * kPi / 36 + 0.01;
      EXPECT_NEAR(mb.region.support(phi), m.region.support(phi) + dot(unit(phi), v), 1e-9);
      EXPECT_NEAR(ma.region.support(phi), m.region.support(phi) - dot(unit(phi), v), 1e-9);
    }
  }
}

// ---- swept_tuple --------------------------------------------------------------

TEST(SweptTuple, ZeroSweepIsTuple) {
  const TupleShape t = make_tuple({{1, 2}, 1}, {{3, 1}, 0.4});
  const ArcHull s = swept_tuple(t, 0.0, 0.0);
  for (int k = 0; k < 72; ++k) EXPECT_NEAR(s.support(k * kPi / 36), tuple_support(t, k * kPi / 36), 1e-12);
  // A zero sweep at a nonzero angle is the rotated tuple.
  const ArcHull r = swept_tuple(t, 0.3, 0.3);
  const TupleShape tr = t.translated(-t.big.center).transformed({t.big.center, 0.3});
  for (int k = 0; k < 72; ++k) EXPECT_NEAR(r.support(k * kPi / 36), tuple_support(tr, k * kPi / 36), 1e-12);
}

TEST(SweptTuple, DiscIsInvariant) {
  const TupleShape t = make_tuple({{1, 2}, 1}, {{1, 2}, 1});
  const ArcHull s = swept_tuple(t, 0.0, 1.0);
  EXPECT_NEAR(s.area(), kPi, 1e-12);
}

TEST(SweptTuple, CapsuleSweepArcAndContainment) {
  const TupleShape t = make_tuple({{0, 0}, 1}, {{2, 0}, 1});
  const double sweep = kPi / 36;
  const ArcHull s = swept_tuple(t, 0.0, sweep);
  bool found = false;
  for (const auto& p : s.pieces()) {
    if (p.center == Point2{0, 0} && std::abs(p.radius - 3.0) < 1e-12) found = true;
  }
  EXPECT_TRUE(found) << "no sweep arc of radius d + r_s = 3";
  for (int i = 0; i <= 100; ++i) {
    const double alpha = sweep * i / 100;
    const TupleShape r = t.transformed({{0, 0}, alpha});
    for (const auto& p : r.outline().sample(200)) EXPECT_LE(s.signed_distance(p).distance, 1e-9);
  }
}

TEST(SweptTupleProperty, ContainsEveryIntermediateRotation) {
  std::mt19937_64 rng(17);
  for (int iter = 0; iter < 100; ++iter) {
    const TupleShape t = testing::random_tuple(rng);
    const double from = uniform(rng, -1, 1);
    const double to = from + uniform(rng, 0, kPi / 4);
    const ArcHull s = swept_tuple(t, from, to);
    for (int i = 0; i <= 20; ++i) {
      const double alpha = from + (to - from) * i / 20;
      // Rotation about the big center.
      const TupleShape r = t.translated(-t.big.center).transformed({t.big.center, alpha});
      for (int k = 0; k < 180; ++k) {
        EXPECT_LE(tuple_support(r, k * kPi / 90), s.support(k * kPi / 90) + 1e-9);
      }
    }
  }
}

// ---- tables -----------------------------------------------------------------

TEST(MinkTable, BucketCounts) {
  EXPECT_EQ(bucket_count_for(kPi / 36), 72);
  EXPECT_EQ(bucket_count_for(0.1), 63);  // 62 whole buckets plus the remainder
  const auto lib = library_of({{make_tuple({{0, 0}, 1}, {{2, 0}, 0.5})},
                               {make_tuple({{0, 0}, 1}, {{0, 0}, 1})},
                               {make_tuple({{0, 0}, 0.5}, {{1, 0}, 0.5})}});
  const MinkTable table = MinkTable::build(lib, kPi / 36);
  EXPECT_EQ(table.bucket_count(), 72);
  EXPECT_EQ(table.type_count(), 3);
  EXPECT_EQ(table.entries().size(), 9u * 72u);
  EXPECT_EQ(table.bucket(0.1), 1);
  EXPECT_EQ(table.bucket(-0.01), 71);
  EXPECT_THROW(table.type_id(3, 0), UnknownShapeType);
  EXPECT_THROW(table.type_id(0, 1), UnknownShapeType);
}

TEST(MinkTable, EntriesContainExactSumsInsideBucket) {
  std::mt19937_64 rng(19);
  const TupleShape ta = make_tuple({{0, 0}, 1}, {{2.5, 0}, 0.6});
  const TupleShape tb = make_tuple({{0, 0}, 0.8}, {{1.5, 0}, 0.8});
  const MinkTable table = MinkTable::build(library_of({{ta}, {tb}}), kPi / 36);
  for (int k = 0; k < table.bucket_count(); k += 7) {
    const ArcHull& e = table.entry(0, 1, k);
    for (int i = 0; i < 20; ++i) {
      const double rel = (k + uniform(rng, 0, 1)) * table.theta_e();
      const auto exact = minkowski_two_tuples(ta, tb.transformed({{0, 0}, rel}));
      for (const auto& p : exact.outline().sample(300)) EXPECT_LE(e.signed_distance(p).distance, 1e-9);
    }
  }
}

TEST(MinkTable, DiscLookupIsExact) {
  const TupleShape disc = make_tuple({{0, 0}, 1}, {{0, 0}, 1});
  const MinkTable table = MinkTable::build(library_of({{disc}}), kPi / 36);
  const TupleShape a = disc.transformed({{2, 3}, 1.2});
  const TupleShape b = disc.transformed({{-1, 5}, -0.4});
  const auto t = table.lookup(0, a, 0, b);
  const auto x = minkowski_two_tuples(a, b);
  EXPECT_EQ(t.provenance, Provenance::kTable);
  for (int k = 0; k < 72; ++k) EXPECT_NEAR(t.region.support(k * kPi / 36), x.region.support(k * kPi / 36), 1e-9);
}

TEST(MinkTableProperty, LookupContainsExactWithBoundedInflation) {
  std::mt19937_64 rng(23);
  const std::vector<TupleShape> types{make_tuple({{0, 0}, 1}, {{2, 0}, 1}),
                                      make_tuple({{0, 0}, 0.9}, {{1.6, 0}, 0.4}),
                                      make_tuple({{0, 0}, 0.5}, {{0, 0}, 0.5})};
  const MinkTable table = MinkTable::build(library_of({{types[0], types[1]}, {types[2]}}), kPi / 36);
  for (int iter = 0; iter < 30; ++iter) {
    const int ia = static_cast<int>(uniform(rng, 0, 3));
    const int ib = static_cast<int>(uniform(rng, 0, 3));
    const TupleShape a = types[ia].transformed({{uniform(rng, -5, 5), uniform(rng, -5, 5)}, uniform(rng, -4, 4)});
    const TupleShape b = types[ib].transformed({{uniform(rng, -5, 5), uniform(rng, -5, 5)}, uniform(rng, -4, 4)});
    const auto id = [&](int i) { return i < 2 ? table.type_id(0, i) : table.type_id(1, 0); };
    const auto t = table.lookup(id(ia), a, id(ib), b);
    const auto x = minkowski_two_tuples(a, b);
    for (int i = 0; i < 10000; ++i) {
      const Point2 d = random_point_in_tuple(b, rng) - random_point_in_tuple(a, rng);
      ASSERT_LE(t.region.signed_distance(d).distance, 1e-6);
    }
    for (const auto& p : x.outline().sample(500)) EXPECT_LE(t.region.signed_distance(p).distance, 1e-9);
    EXPECT_LE(t.region.area(), 1.15 * x.region.area());
  }
}

}  // namespace
}  // namespace matnav
