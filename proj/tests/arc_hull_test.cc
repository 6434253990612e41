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

#include <random>

#include "gtest/gtest.h"
#include "test_util.h"

namespace matnav {
namespace {

using testing::uniform;

std::vector<Circle> random_circles(std::mt19937_64& rng, int n) {
  std::vector<Circle> cs;
  for (int i = 0; i < n; ++i) {
    cs.push_back({{uniform(rng, -3, 3), uniform(rng, -3, 3)}, uniform(rng, 0.0, 1.2)});
  }
  return cs;
}

double circles_support(const std::vector<Circle>& cs, double phi) {
  const Vec2 n = unit(phi);
  double best = -std::numeric_limits<double>::infinity();
  for (const auto& c : cs) best = std::max(best, dot(n, c.center) + c.radius);
  return best;
}

TEST(ArcHull, CapsuleHasFourPieces) {
  const std::vector<Circle> cs{{{0, 0}, 1}, {{2, 0}, 1}};
  const ArcHull h = ArcHull::of_circles(cs);
  EXPECT_EQ(h.outline().pieces.size(), 4u);
  EXPECT_NEAR(h.area(), kPi + 4.0, 1e-12);
  EXPECT_NEAR(h.width(kPi / 2), 2.0, 1e-12);
  EXPECT_NEAR(h.width(0.0), 4.0, 1e-12);
  EXPECT_TRUE(h.outline().closed(1e-12));
}

TEST(ArcHull, ContainedCircleIsDropped) {
  const std::vector<Circle> cs{{{0, 0}, 2}, {{0.5, 0}, 1}};
  const ArcHull h = ArcHull::of_circles(cs);
  EXPECT_NEAR(h.area(), 4 * kPi, 1e-12);
  EXPECT_EQ(h.outline().pieces.size(), 1u);
}

TEST(ArcHull, TupleHullMatchesTupleOutline) {
  std::mt19937_64 rng(41);
  for (int i = 0; i < 200; ++i) {
    const TupleShape t = testing::random_tuple(rng);
    const ArcHull h = ArcHull::of_tuple(t);
    const auto samples = t.outline().sample(400);
    for (const auto& p : samples) EXPECT_NEAR(h.signed_distance(p).distance, 0.0, 1e-9);
  }
}

TEST(ArcHull, MinkowskiOfDiscsIsDisc) {
  const ArcHull a = ArcHull::of_circle({{1, 2}, 0.5});
  const ArcHull b = ArcHull::of_circle({{-3, 1}, 1.5});
  const ArcHull s = minkowski_sum(a, b);
  ASSERT_EQ(s.outline().pieces.size(), 1u);
  EXPECT_NEAR(s.area(), kPi * 4.0, 1e-12);
  EXPECT_NEAR(s.support(0.0), -2.0 + 2.0, 1e-12);
  EXPECT_NEAR(s.support(kPi / 2), 3.0 + 2.0, 1e-12);
}

TEST(ArcHullProperty, SupportMatchesGenerators) {
  std::mt19937_64 rng(43);
  for (int iter = 0; iter < 300; ++iter) {
    const auto cs = random_circles(rng, 1 + iter % 7);
    const ArcHull h = ArcHull::of_circles(cs);
    for (int k = 0; k < 180; ++k) {
      const double phi = kTwoPi * k / 180 + 0.001;
      EXPECT_NEAR(h.support(phi), circles_support(cs, phi), 1e-9);
    }
    EXPECT_TRUE(h.outline().closed(1e-9));
  }
}

TEST(ArcHullProperty, AreaMatchesSampledPolygonHull) {
  std::mt19937_64 rng(47);
  for (int iter = 0; iter < 40; ++iter) {
    const auto cs = random_circles(rng, 4);
    std::vector<Point2> pts;
    for (const auto& c : cs) {
      const auto s = testing::sample_circle(c, 4000);
      pts.insert(pts.end(), s.begin(), s.end());
    }
    const double poly = testing::polygon_area(testing::convex_hull_points(pts));
    // Inscribed polygons undershoot by at most the sagitta times the perimeter.
    const double perim = ArcHull::of_circles(cs).outline().perimeter();
    const double sag = 1.2 * (1 - std::cos(kPi / 4000));
    const double area = ArcHull::of_circles(cs).area();
    EXPECT_GE(area, poly - 1e-9);
    EXPECT_LE(area, poly + sag * perim + 1e-9);
  }
}

TEST(ArcHullProperty, AreaMatchesMonteCarlo) {
  std::mt19937_64 rng(53);
  const auto cs = random_circles(rng, 5);
  const ArcHull h = ArcHull::of_circles(cs);
  int inside = 0;
  constexpr int n = 400000;
  for (int i = 0; i < n; ++i) {
    const Point2 p{uniform(rng, -5, 5), uniform(rng, -5, 5)};
    // Oracle membership via the generator support functions.
    bool in = true;
    for (int k = 0; k < 256 && in; ++k) {
      const double phi = kTwoPi * k / 256;
      if (dot(unit(phi), p) > circles_support(cs, phi)) in = false;
    }
    inside += in;
  }
  const double frac = static_cast<double>(inside) / n;
  const double sigma = 100.0 * std::sqrt(frac * (1 - frac) / n);
  EXPECT_NEAR(h.area(), 100.0 * frac, 4 * sigma);
}

TEST(ArcHullProperty, SignedDistanceMatchesSampling) {
  std::mt19937_64 rng(59);
  for (int iter = 0; iter < 25; ++iter) {
    const auto cs = random_circles(rng, 4);
    const ArcHull h = ArcHull::of_circles(cs);
    const auto boundary = h.outline().sample(60000);
    for (int q = 0; q < 40; ++q) {
      const Point2 p{uniform(rng, -6, 6), uniform(rng, -6, 6)};
      double best = std::numeric_limits<double>::infinity();
      for (const auto& b : boundary) best = std::min(best, distance(p, b));
      if (best < 0.1) continue;
      bool inside = true;
      for (int k = 0; k < 720 && inside; ++k) {
        const double phi = kTwoPi * k / 720;
        if (dot(unit(phi), p) > circles_support(cs, phi)) inside = false;
      }
      const auto sd = h.signed_distance(p);
      EXPECT_NEAR(sd.distance, inside ? -best : best, 2e-5);
      // The reported normal points from the nearest boundary point to p.
      const Point2 cp = h.closest_boundary_point(p);
      EXPECT_NEAR(distance(cp, p), best, 2e-5);
    }
  }
}

TEST(ArcHullProperty, MinkowskiMatchesPointwiseSums) {
  std::mt19937_64 rng(61);
  for (int iter = 0; iter < 50; ++iter) {
    const auto ca = random_circles(rng, 3);
    const auto cb = random_circles(rng, 2);
    const ArcHull a = ArcHull::of_circles(ca);
    const ArcHull b = ArcHull::of_circles(cb);
    const ArcHull s = minkowski_sum(a, b);
    // Support functions of a Minkowski sum add.
    for (int k = 0; k < 360; ++k) {
      const double phi = kTwoPi * k / 360 + 0.0003;
      EXPECT_NEAR(s.support(phi), circles_support(ca, phi) + circles_support(cb, phi), 1e-9);
    }
    // Sum of sampled boundaries lies inside the sum.
    const auto pa = a.outline().sample(60);
    const auto pb = b.outline().sample(60);
    for (const auto& x : pa) {
      for (const auto& y : pb) EXPECT_TRUE(s.contains(x + y, 1e-9));
    }
    EXPECT_TRUE(s.outline().closed(1e-9));
  }
}

TEST(ArcHullProperty, RotationAndNegationPreserveShape) {
  std::mt19937_64 rng(67);
  for (int iter = 0; iter < 100; ++iter) {
    const auto cs = random_circles(rng, 4);
    const ArcHull h = ArcHull::of_circles(cs);
    const double a = uniform(rng, -7, 7);
    const ArcHull r = h.rotated(a);
    const ArcHull n = h.negated();
    EXPECT_NEAR(r.area(), h.area(), 1e-9);
    EXPECT_NEAR(n.area(), h.area(), 1e-9);
    for (int k = 0; k < 72; ++k) {
      const double phi = kTwoPi * k / 72 + 0.01;
      EXPECT_NEAR(r.support(phi + a), h.support(phi), 1e-9);
      EXPECT_NEAR(n.support(phi + kPi), h.support(phi), 1e-9);
    }
    const Pose pose{{1.5, -2.0}, a};
    const ArcHull t = h.transformed(pose);
    const Point2 p{uniform(rng, -4, 4), uniform(rng, -4, 4)};
    EXPECT_NEAR(t.signed_distance(pose.apply(p)).distance, h.signed_distance(p).distance, 1e-9);
  }
}

TEST(ArcHullProperty, OffsetEqualsMinkowskiWithDisc) {
  std::mt19937_64 rng(71);
  for (int iter = 0; iter < 50; ++iter) {
    const ArcHull h = ArcHull::of_circles(random_circles(rng, 3));
    const double r = uniform(rng, 0.1, 1.0);
    const ArcHull o = h.offset(r);
    const ArcHull m = minkowski_sum(h, ArcHull::of_circle({{0, 0}, r}));
    for (int k = 0; k < 90; ++k) {
      const double phi = kTwoPi * k / 90;
      EXPECT_NEAR(o.support(phi), m.support(phi), 1e-9);
    }
  }
}

TEST(ArcHull, RestrictedArcGenerator) {
  // Quarter arc of the unit circle plus its endpoints and the center: a pie slice.
  const std::vector<HullGenerator> gens{HullGenerator::arc({0, 0}, 1.0, 0.0, kPi / 2),
                                        HullGenerator::point({1, 0}),
                                        HullGenerator::point({0, 1}),
                                        HullGenerator::point({0, 0})};
  const ArcHull h = ArcHull::of_generators(gens);
  EXPECT_NEAR(h.area(), kPi / 4, 1e-12);
  EXPECT_NEAR(h.support(kPi / 4), 1.0, 1e-12);
  EXPECT_NEAR(h.support(kPi), 0.0, 1e-12);
}

TEST(Separation, TwoDiscs) {
  const ArcHull a = ArcHull::of_circle({{0, 0}, 1});
  const ArcHull b = ArcHull::of_circle({{5, 0}, 2});
  EXPECT_NEAR(separation(a, b), 2.0, 1e-12);
  EXPECT_NEAR(separation(a, ArcHull::of_circle({{1, 0}, 1})), -1.0, 1e-12);
}

TEST(ArcHull, SegmentHull) {
  const ArcHull s = ArcHull::of_segment({0, 0}, {2, 0});
  EXPECT_NEAR(s.area(), 0.0, 1e-12);
  EXPECT_NEAR(s.signed_distance({1, 1}).distance, 1.0, 1e-12);
  EXPECT_NEAR(s.signed_distance({3, 0}).distance, 1.0, 1e-12);
}

}  // namespace
}  // namespace matnav
