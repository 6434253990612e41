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

#include <random>

#include "gtest/gtest.h"
#include "test_util.h"

namespace matnav {
namespace {

using testing::uniform;

const TupleShape kCapsule = make_tuple({{0, 0}, 1}, {{2, 0}, 1});

// Width from the medial circles sampled densely: max minus min projection
// onto the normal of theta.
double projection_width(std::span<const TupleShape> tuples, double theta, int samples) {
  std::vector<Circle> cs;
  for (const auto& t : tuples) {
    cs.push_back(t.big);
    cs.push_back(t.small);
  }
  const Vec2 n = unit(theta + 0.5 * kPi);
  double hi = -1e300, lo = 1e300;
  for (const auto& c : cs) {
    for (const auto& p : testing::sample_circle(c, samples / static_cast<int>(cs.size()))) {
      hi = std::max(hi, dot(p, n));
      lo = std::min(lo, dot(p, n));
    }
  }
  return hi - lo;
}

std::vector<TupleShape> random_agent(std::mt19937_64& rng) {
  // Two tuples sharing the big circle, like a bent body.
  const double rb = uniform(rng, 0.5, 1.2);
  const Circle hub{{uniform(rng, -1, 1), uniform(rng, -1, 1)}, rb};
  std::vector<TupleShape> out;
  for (int k = 0; k < 2; ++k) {
    const double rs = uniform(rng, 0.2, rb);
    const double d = uniform(rng, rb - rs + 0.1, 3.0);
    out.push_back(make_tuple(hub, {hub.center + unit(uniform(rng, 0, kTwoPi)) * d, rs}));
  }
  return out;
}

// ---- hull ---------------------------------------------------------------------

TEST(AgentHull, SingleCircle) {
  const TupleShape d = make_tuple({{1, 1}, 2}, {{1, 1}, 2});
  const AgentHull h = convex_hull_of_tuples(std::span(&d, 1));
  EXPECT_NEAR(h.region.area(), 4 * kPi, 1e-9);
  EXPECT_EQ(h.circles.size(), 1u);
}

TEST(AgentHull, CapsuleIsItself) {
  const AgentHull h = convex_hull_of_tuples(std::span(&kCapsule, 1));
  EXPECT_NEAR(h.region.area(), kPi + 4, 1e-9);
}

TEST(AgentHull, LShapeContainsTuples) {
  const std::vector<TupleShape> l{make_tuple({{0, 0}, 0.5}, {{2, 0}, 0.5}),
                                  make_tuple({{0, 0}, 0.5}, {{0, 2}, 0.5})};
  const AgentHull h = convex_hull_of_tuples(l);
  std::mt19937_64 rng(3);
  int in_union = 0, in_hull = 0;
  constexpr int n = 100000;
  for (int i = 0; i < n; ++i) {
    const Point2 p{uniform(rng, -1, 3), uniform(rng, -1, 3)};
    const bool u = point_in_union(p, l);
    const bool hh = h.region.contains(p, 1e-12);
    if (u) EXPECT_TRUE(hh) << p.x << "," << p.y;
    in_union += u;
    in_hull += hh;
  }
  EXPECT_GE(in_hull, in_union);
  EXPECT_NEAR(h.region.area(), 16.0 * in_hull / n, 0.1);
}

// ---- width ----------------------------------------------------------------------

TEST(Width, Circle) {
  const TupleShape d = make_tuple({{1, 1}, 1.5}, {{1, 1}, 1.5});
  const AgentHull h = convex_hull_of_tuples(std::span(&d, 1));
  for (double th : {0.0, 0.7, 2.0, 4.0}) EXPECT_NEAR(width(h, th), 3.0, 1e-12);
}

TEST(Width, Capsule) {
  const AgentHull h = convex_hull_of_tuples(std::span(&kCapsule, 1));
  EXPECT_NEAR(width(h, 0.0), 2.0, 1e-12);
  EXPECT_NEAR(width(h, 0.5 * kPi), 4.0, 1e-12);
}

TEST(WidthProperty, MatchesProjectionOracle) {
  std::mt19937_64 rng(5);
  for (int iter = 0; iter < 20; ++iter) {
    const auto tuples = random_agent(rng);
    const AgentHull h = convex_hull_of_tuples(tuples);
    for (int i = 0; i < 100; ++i) {
      const double th = uniform(rng, -kPi, kPi);
      EXPECT_NEAR(width(h, th), projection_width(tuples, th, 10000), 1e-5);
    }
  }
}

// ---- table ----------------------------------------------------------------------

TEST(WidthTable, SingleCircleOneInterval) {
  const TupleShape d = make_tuple({{1, 1}, 1.5}, {{1, 1}, 1.5});
  const WidthTable t = WidthTable::build(convex_hull_of_tuples(std::span(&d, 1)));
  EXPECT_EQ(t.intervals().size(), 1u);
  EXPECT_NEAR(t.min_width(), 3.0, 1e-12);
  EXPECT_NEAR(t.max_width(), 3.0, 1e-12);
}

TEST(WidthTable, CapsuleRegimes) {
  const WidthTable t = WidthTable::build(convex_hull_of_tuples(std::span(&kCapsule, 1)));
  // One closed form per half turn; the two regimes meet at the kink on the axis.
  EXPECT_EQ(t.intervals().size(), 1u);
  EXPECT_GT(t(1e-3), t(0.0));
  EXPECT_GT(t(-1e-3), t(0.0));
  EXPECT_NEAR(t.min_width(), 2.0, 1e-12);
  EXPECT_NEAR(t.max_width(), 4.0, 1e-12);
  for (int k = 0; k < 100; ++k) {
    const double th = k * 0.0731;
    EXPECT_NEAR(t(th), 2 + 2 * std::abs(std::sin(th)), 1e-12);
  }
}

TEST(WidthTableProperty, AgreesWithDirectWidthAndIsPeriodic) {
  std::mt19937_64 rng(7);
  for (int iter = 0; iter < 20; ++iter) {
    const auto tuples = random_agent(rng);
    const AgentHull h = convex_hull_of_tuples(tuples);
    const WidthTable t = WidthTable::build(h, uniform(rng, 0.001, 0.5));
    double lo = 1e300, hi = -1e300;
    for (int i = 0; i < 1000; ++i) {
      const double th = uniform(rng, -10, 10);
      EXPECT_NEAR(t(th), width(h, th), 1e-9);
      EXPECT_NEAR(t(th), t(th + kPi), 1e-12);
      lo = std::min(lo, t(th));
      hi = std::max(hi, t(th));
    }
    EXPECT_LE(t.min_width(), lo + 1e-12);
    EXPECT_GE(t.max_width(), hi - 1e-12);
  }
}

// ---- min_rotation_for_clearance ------------------------------------------------

TEST(MinRotation, Examples) {
  const WidthTable t = WidthTable::build(convex_hull_of_tuples(std::span(&kCapsule, 1)));
  EXPECT_EQ(*min_rotation_for_clearance(t, 0.3, 4.5), 0.0);
  EXPECT_FALSE(min_rotation_for_clearance(t, 0.3, 1.5).has_value());
  const auto d = min_rotation_for_clearance(t, 0.5 * kPi, 2.5);
  ASSERT_TRUE(d.has_value());
  EXPECT_NEAR(std::abs(*d), std::acos(0.25), 1e-9);
  EXPECT_GT(*d, 0.0);  // symmetric tie goes positive
  EXPECT_NEAR(t(0.5 * kPi + *d), 2.5, 1e-9);
  // Dense scan agrees.
  double best = 1e300;
  for (int i = -200000; i <= 200000; ++i) {
    const double dd = i * kPi / 400000;
    if (t(0.5 * kPi + dd) <= 2.5) best = std::min(best, std::abs(dd));
  }
  EXPECT_NEAR(best, std::acos(0.25), 1e-5);
}

TEST(MinRotationProperty, SmallestFeasibleRotation) {
  std::mt19937_64 rng(11);
  for (int iter = 0; iter < 50; ++iter) {
    const auto tuples = random_agent(rng);
    const WidthTable t = WidthTable::build(convex_hull_of_tuples(tuples));
    const double th = uniform(rng, -4, 4);
    const double c = uniform(rng, t.min_width(), t.max_width());
    const auto d = min_rotation_for_clearance(t, th, c, 0.0);
    ASSERT_TRUE(d.has_value());
    EXPECT_LE(t(th + *d), c + 1e-9);
    constexpr int n = 20000;
    for (int i = 0; i < n; ++i) {
      const double dd = std::abs(*d) * i / n;
      if (dd >= std::abs(*d) - 1e-9) break;
      EXPECT_GT(t(th + dd), c - 1e-9);
      EXPECT_GT(t(th - dd), c - 1e-9);
    }
  }
}

// ---- corridor and update ----------------------------------------------------------

Body wall(int id, double y) {
  Body b;
  b.id = id;
  b.tuples = {make_tuple({{-20, y}, 0.3}, {{20, y}, 0.3})};
  b.position = {0, y};
  b.is_static = true;
  return b;
}

TEST(CorridorWidth, TwoWalls) {
  const Body top = wall(1, 2.7), bottom = wall(2, -2.7);
  const std::vector<const Body*> nbs{&top, &bottom};
  const auto w = corridor_width({0, 0}, 0.0, 5.0, nbs);
  ASSERT_TRUE(w.has_value());
  EXPECT_NEAR(*w, 4.8, 1e-9);
  const std::vector<const Body*> one{&top};
  EXPECT_FALSE(corridor_width({0, 0}, 0.0, 5.0, one).has_value());
}

struct Fixture {
  AgentHull hull = convex_hull_of_tuples(std::span(&kCapsule, 1));
  WidthTable widths = WidthTable::build(hull);
  // Capsule with its body origin at the big center.
  OrientationAgent at(Point2 p, double o) const { return {p, o, &hull, &widths}; }
};

TEST(UpdateOrientation, AlignedStays) {
  const Fixture f;
  EXPECT_EQ(update_orientation(f.at({0, 0}, 0.4), unit(0.4), std::nullopt, {}, {}), 0.4);
}

TEST(UpdateOrientation, ClampedToRateLimit) {
  const Fixture f;
  OrientationParams p;
  p.dt = 0.1;
  p.omega_max = 1.0;
  EXPECT_NEAR(update_orientation(f.at({0, 0}, 0.0), unit(0.5), std::nullopt, {}, p), 0.1, 1e-15);
  EXPECT_NEAR(update_orientation(f.at({0, 0}, 0.0), unit(-0.5), std::nullopt, {}, p), -0.1, 1e-15);
}

TEST(UpdateOrientation, BlockedByNearbyObstacle) {
  const Fixture f;
  Body b;
  b.id = 1;
  b.is_static = true;
  b.tuples = {make_tuple({{1.0, 1.2}, 0.15}, {{1.0, 1.2}, 0.15})};
  const std::vector<const Body*> nbs{&b};
  // Turning left would swing the far end into the post.
  EXPECT_EQ(update_orientation(f.at({0, 0}, 0.0), unit(1.0), std::nullopt, nbs, {}), 0.0);
  // Turning right is clear.
  EXPECT_NEAR(update_orientation(f.at({0, 0}, 0.0), unit(-1.0), std::nullopt, nbs, {}), -0.1 * kPi, 1e-12);
}

TEST(UpdateOrientation, BlockedTurnRetriedAtHalfSize) {
  const Fixture f;
  Body b;
  b.id = 1;
  b.is_static = true;
  const Point2 post = unit(0.5) * 2.9;
  b.tuples = {make_tuple({post, 0.01}, {post, 0.01})};
  const std::vector<const Body*> nbs{&b};
  // The full turn sweeps the far end over the post; half of it stops short.
  EXPECT_NEAR(update_orientation(f.at({0, 0}, 0.0), unit(1.0), std::nullopt, nbs, {}), 0.05 * kPi, 1e-12);
  OrientationParams once;
  once.turn_attempts = 1;
  EXPECT_EQ(update_orientation(f.at({0, 0}, 0.0), unit(1.0), std::nullopt, nbs, once), 0.0);
}

TEST(UpdateOrientation, CorridorOverridesHeading) {
  const Fixture f;
  OrientationParams p;
  p.omega_max = 100;
  // Moving along +x with the capsule across the motion (width 4); a 2.5 gap
  // needs at most the minimal rotation, not full alignment.
  const double o = 0.5 * kPi;
  const double r = update_orientation(f.at({0, 0}, o), {1, 0}, 2.5, {}, p);
  EXPECT_NEAR(std::abs(r - o), std::acos(0.25), 1e-9);
  EXPECT_LE(f.widths(0.0 - r), 2.5 + 1e-9);
}

TEST(UpdateOrientationProperty, AppliedTurnsKeepClear) {
  std::mt19937_64 rng(13);
  const Fixture f;
  int applied = 0;
  for (int iter = 0; iter < 500; ++iter) {
    const double o = uniform(rng, -kPi, kPi);
    const Vec2 v = unit(uniform(rng, -kPi, kPi)) * uniform(rng, 0.1, 2);
    std::vector<Body> bodies(3);
    std::vector<const Body*> nbs;
    for (int k = 0; k < 3; ++k) {
      bodies[k].id = k + 1;
      bodies[k].v_max = 1.0;
      bodies[k].tuples = {testing::random_tuple(rng, 1.0).translated(unit(uniform(rng, 0, kTwoPi)) * 3.5)};
      nbs.push_back(&bodies[k]);
    }
    bool clear = true;
    for (const auto& b : bodies) {
      const TupleShape mine = kCapsule.transformed({{0, 0}, o});
      clear &= separation(ArcHull::of_tuple(mine), ArcHull::of_tuple(b.tuples[0])) > 0;
    }
    if (!clear) continue;
    OrientationParams p;
    const double r = update_orientation(f.at({0, 0}, o), v, std::nullopt, nbs, p);
    if (r == o) continue;
    ++applied;
    EXPECT_LE(std::abs(wrap_angle(r - o)), p.omega_max * p.dt + 1e-12);
    // At every intermediate angle and position of the step, the capsule
    // keeps clear of every neighbor grown by its reach.
    for (int s = 0; s <= 20; ++s) {
      const double frac = s / 20.0;
      const TupleShape mine = kCapsule.transformed({v * (p.dt * frac), o + wrap_angle(r - o) * frac});
      for (const auto& b : bodies) {
        EXPECT_GT(separation(ArcHull::of_tuple(mine), ArcHull::of_tuple(b.tuples[0])), b.v_max * p.dt);
      }
    }
  }
  EXPECT_GT(applied, 100);
}

}  // namespace
}  // namespace matnav
