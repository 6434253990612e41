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

#include <random>

#include "gtest/gtest.h"
#include "lp_oracle.h"
#include "test_util.h"

namespace matnav {
namespace {

using testing::uniform;

TupleShape disc(Point2 c, double r) { return make_tuple({c, r}, {c, r}); }

// Collides within the horizon iff some sampled time puts t * v inside M.
// Returns the deepest penetration found (negative = inside).
double time_sampled_depth(const ArcHull& m, const Vec2& v, double tau, int steps) {
  double best = std::numeric_limits<double>::infinity();
  for (int i = 0; i <= steps; ++i) {
    best = std::min(best, m.signed_distance(v * (tau * i / steps)).distance);
  }
  return best;
}

// A pair of random tuples that do not overlap.
std::pair<TupleShape, TupleShape> separated_pair(std::mt19937_64& rng) {
  for (;;) {
    const TupleShape a = testing::random_tuple(rng, 1.0);
    const TupleShape b = testing::random_tuple(rng, 1.0).translated(unit(uniform(rng, 0, kTwoPi)) * 6.0);
    if (!minkowski_two_tuples(a, b).region.contains({0, 0}, 1e-3)) return {a, b};
  }
}

// ---- velocity_obstacle --------------------------------------------------------

TEST(VelocityObstacle, DiscExamples) {
  const auto m = minkowski_two_tuples(disc({0, 0}, 1), disc({5, 0}, 1));
  const VOCone cone = velocity_obstacle(m, 1.0);
  EXPECT_FALSE(cone.overlap);
  EXPECT_TRUE(cone.contains({5, 0}));
  EXPECT_FALSE(cone.contains({1, 0}));
  EXPECT_TRUE(cone.contains({3.01, 0}));
  EXPECT_FALSE(cone.contains({2.99, 0}));
  // Far along the legs the cone keeps widening.
  EXPECT_TRUE(cone.contains({100, 42}));
  EXPECT_FALSE(cone.contains({100, 45}));
  // Legs are tangent: sin(half angle) = 2 / 5.
  EXPECT_NEAR(std::abs(cross(cone.left_leg, cone.right_leg)), std::sin(2 * std::asin(0.4)), 1e-9);
}

TEST(VelocityObstacle, OverlapIsFlagged) {
  const auto m = minkowski_two_tuples(disc({0, 0}, 1), disc({1, 0}, 1));
  const VOCone cone = velocity_obstacle(m, 2.0, 0.1);
  EXPECT_TRUE(cone.overlap);
  // Escape velocity: leave M within one escape interval.
  EXPECT_TRUE(cone.contains({0, 0}));
  EXPECT_FALSE(cone.contains({-11, 0}));
}

TEST(VelocityObstacleProperty, MembershipMatchesTimeSampling) {
  std::mt19937_64 rng(31);
  int checked = 0;
  for (int iter = 0; iter < 20; ++iter) {
    const auto [a, b] = separated_pair(rng);
    const auto m = minkowski_two_tuples(a, b);
    const double tau = uniform(rng, 0.5, 3);
    const VOCone cone = velocity_obstacle(m, tau);
    for (int i = 0; i < 1000 / 20; ++i) {
      const Vec2 v{uniform(rng, -8, 8), uniform(rng, -8, 8)};
      const double sd = cone.signed_distance(v).distance;
      if (std::abs(sd) < 1e-2) continue;  // the oracle's time grid is too coarse there
      const bool oracle = time_sampled_depth(m.region, v, tau, 10000) <= 0.0;
      EXPECT_EQ(sd <= 0.0, oracle) << "v=" << v.x << "," << v.y << " sd=" << sd;
      ++checked;
    }
  }
  EXPECT_GT(checked, 800);
}

// ---- orca_halfplane ----------------------------------------------------------

TEST(OrcaHalfplane, HeadOnDiscs) {
  const auto m = minkowski_two_tuples(disc({0, 0}, 1), disc({5, 0}, 1));
  const VOCone cone = velocity_obstacle(m, 1.0);
  const auto hp = orca_halfplane({1, 0}, {-1, 0}, cone, 0.5);
  ASSERT_TRUE(hp.has_value());
  // u = (1, 0) toward the cone; A takes half, so it may not exceed v_x = 1.5.
  EXPECT_NEAR(hp->point.x, 1.5, 1e-9);
  EXPECT_NEAR(hp->point.y, 0.0, 1e-9);
  EXPECT_NEAR(hp->normal.x, -1.0, 1e-9);
  EXPECT_NEAR(hp->normal.y, 0.0, 1e-9);
  EXPECT_TRUE(hp->slack({1.5, 3}) >= -1e-12);
  EXPECT_LT(hp->slack({1.6, 0}), 0.0);
}

TEST(OrcaHalfplane, FarOutsideIsPruned) {
  const auto m = minkowski_two_tuples(disc({0, 0}, 1), disc({5, 0}, 1));
  const VOCone cone = velocity_obstacle(m, 1.0);
  EXPECT_FALSE(orca_halfplane({-3, 0}, {0, 0}, cone, 0.5, 0.0).has_value());
  EXPECT_TRUE(orca_halfplane({-3, 0}, {0, 0}, cone, 0.5).has_value());
  EXPECT_TRUE(orca_halfplane({4, 0}, {0, 0}, cone, 0.5, 0.0).has_value());
}

TEST(OrcaHalfplaneProperty, PermittedVelocitiesAvoidCollision) {
  std::mt19937_64 rng(37);
  for (int iter = 0; iter < 40; ++iter) {
    const auto [a, b] = separated_pair(rng);
    const auto m = minkowski_two_tuples(a, b);
    const double tau = 2.0;
    const VOCone cone = velocity_obstacle(m, tau);
    const VOCone cone_b = velocity_obstacle(minkowski_two_tuples(b, a), tau);
    const Vec2 va{uniform(rng, -3, 3), uniform(rng, -3, 3)};
    const Vec2 vb{uniform(rng, -3, 3), uniform(rng, -3, 3)};
    // Static obstacle: A alone must leave the cone.
    const auto hs = orca_halfplane(va, {0, 0}, cone, 1.0);
    ASSERT_TRUE(hs.has_value());
    // Mutual: each takes half.
    const auto ha = orca_halfplane(va, vb, cone, 0.5);
    const auto hb = orca_halfplane(vb, va, cone_b, 0.5);
    ASSERT_TRUE(ha && hb);
    for (int i = 0; i < 50; ++i) {
      Vec2 v{uniform(rng, -6, 6), uniform(rng, -6, 6)};
      if (hs->slack(v) >= 0) {
        EXPECT_GT(time_sampled_depth(m.region, v, tau, 2000), -1e-3);
      }
      Vec2 w{uniform(rng, -6, 6), uniform(rng, -6, 6)};
      if (ha->slack(v) >= 0 && hb->slack(w) >= 0) {
        EXPECT_GT(time_sampled_depth(m.region, v - w, tau, 2000), -1e-3);
      }
    }
  }
}

TEST(OrcaHalfplaneProperty, ReciprocalCorrectionsCancel) {
  std::mt19937_64 rng(41);
  for (int iter = 0; iter < 200; ++iter) {
    const auto [a, b] = separated_pair(rng);
    const Vec2 va{uniform(rng, -3, 3), uniform(rng, -3, 3)};
    const Vec2 vb{uniform(rng, -3, 3), uniform(rng, -3, 3)};
    const auto ha = orca_halfplane(va, vb, velocity_obstacle(minkowski_two_tuples(a, b), 2.0), 0.5);
    const auto hb = orca_halfplane(vb, va, velocity_obstacle(minkowski_two_tuples(b, a), 2.0), 0.5);
    ASSERT_TRUE(ha && hb);
    const Vec2 ua = (ha->point - va) * 2.0;
    const Vec2 ub = (hb->point - vb) * 2.0;
    EXPECT_NEAR(ua.x, -ub.x, 1e-6);
    EXPECT_NEAR(ua.y, -ub.y, 1e-6);
    EXPECT_NEAR(ha->normal.x, -hb->normal.x, 1e-6);
  }
}

// ---- collect_constraints -----------------------------------------------------

Body body_of(int id, std::vector<TupleShape> tuples, Vec2 v = {0, 0}, bool is_static = false) {
  Body b;
  b.id = id;
  b.tuples = std::move(tuples);
  b.position = b.tuples[0].big.center;
  b.types.assign(b.tuples.size(), 0);
  b.velocity = v;
  b.is_static = is_static;
  return b;
}

TEST(CollectConstraints, PairCounting) {
  const Body a = body_of(0, {make_tuple({{0, 0}, 1}, {{1.5, 0}, 0.6}), make_tuple({{0, 0}, 1}, {{-1.5, 0}, 0.6})});
  const Body n1 = body_of(1, {disc({6, 0}, 1)});
  const Body n3 = body_of(2, {disc({0, 6}, 1), disc({1, 6}, 1), disc({2, 6}, 0.5)});
  const std::vector<const Body*> nbs{&n1, &n3};
  const ConstraintSet cs = collect_constraints(a, nbs, {});
  EXPECT_EQ(cs.candidates, 8);
  EXPECT_EQ(cs.planes.size(), 8u);
  ConstraintOptions pruned;
  pruned.prune_margin = 0.0;
  const ConstraintSet ps = collect_constraints(a, nbs, pruned);
  EXPECT_EQ(ps.candidates, 8);
  EXPECT_LE(ps.planes.size(), 8u);
  EXPECT_TRUE(collect_constraints(a, {}, {}).planes.empty());
}

TEST(CollectConstraints, OrderIsByDistanceThenId) {
  const Body a = body_of(0, {disc({0, 0}, 1)}, {1, 0});
  const Body far = body_of(1, {disc({8, 0}, 1)});
  const Body near = body_of(5, {disc({0, 4}, 1)});
  const Body tie = body_of(3, {disc({0, -4}, 1)});
  const std::vector<const Body*> nbs{&far, &near, &tie};
  const ConstraintSet cs = collect_constraints(a, nbs, {});
  ASSERT_EQ(cs.planes.size(), 3u);
  // tie (id 3, below) first, then near (id 5, above), then far.
  EXPECT_GT(cs.planes[0].normal.y, 0.0);
  EXPECT_LT(cs.planes[1].normal.y, 0.0);
  EXPECT_LT(cs.planes[2].normal.x, 0.0);
}

TEST(CollectConstraintsProperty, TablePlanesAreSound) {
  std::mt19937_64 rng(43);
  const TupleShape ta = make_tuple({{0, 0}, 1}, {{2, 0}, 0.7});
  const TupleShape tb = make_tuple({{0, 0}, 0.8}, {{1.2, 0}, 0.8});
  ShapeLibrary lib;
  lib.push_back({"a", CTMATShape{{ta}, {}, {}, {}, 0.0}});
  lib.push_back({"b", CTMATShape{{tb}, {}, {}, {}, 0.0}});
  const MinkTable table = MinkTable::build(lib, kPi / 36);
  for (int iter = 0; iter < 50; ++iter) {
    Body a = body_of(0, {ta.transformed({{0, 0}, uniform(rng, 0, kTwoPi)})}, {uniform(rng, -2, 2), uniform(rng, -2, 2)});
    a.types = {table.type_id(0, 0)};
    const Pose pb{unit(uniform(rng, 0, kTwoPi)) * uniform(rng, 5, 8), uniform(rng, 0, kTwoPi)};
    Body b = body_of(1, {tb.transformed(pb)}, {0, 0}, true);
    b.types = {table.type_id(1, 0)};
    const std::vector<const Body*> nbs{&b};
    ConstraintOptions with;
    with.table = &table;
    const ConstraintSet ct = collect_constraints(a, nbs, with);
    const ConstraintSet ce = collect_constraints(a, nbs, {});
    ASSERT_EQ(ct.planes.size(), 1u);
    ASSERT_EQ(ce.planes.size(), 1u);
    const auto exact = minkowski_two_tuples(a.tuples[0], b.tuples[0]);
    const VOCone cone = velocity_obstacle(exact, 2.0);
    // Anything the table plane permits is outside the exact cone.
    for (int i = 0; i < 200; ++i) {
      const Vec2 v{uniform(rng, -5, 5), uniform(rng, -5, 5)};
      if (ct.planes[0].slack(v) >= 0) EXPECT_GE(cone.signed_distance(v).distance, -1e-9);
    }
    // Along the exact plane's normal the table plane is at least as far out.
    const Vec2 n = ce.planes[0].normal;
    const Vec2 tn = ct.planes[0].normal;
    if (dot(n, tn) > 1 - 1e-9) EXPECT_GE(dot(ct.planes[0].point, n), dot(ce.planes[0].point, n) - 1e-9);
  }
}

// ---- solve_velocity ----------------------------------------------------------

TEST(SolveVelocity, ProjectsOntoSinglePlane) {
  ConstraintSet cs;
  cs.planes.push_back({{1.5, 0}, {1, 0}});
  const auto r = solve_velocity(cs, {1, 0}, 2.0);
  EXPECT_TRUE(r.feasible);
  EXPECT_NEAR(r.velocity.x, 1.5, 1e-12);
  EXPECT_NEAR(r.velocity.y, 0.0, 1e-12);
}

TEST(SolveVelocity, InteriorOptimumUnchanged) {
  ConstraintSet cs;
  cs.planes.push_back({{-1, 0}, {1, 0}});
  cs.planes.push_back({{0, 1}, {0, -1}});
  const auto r = solve_velocity(cs, {0.3, -0.2}, 2.0);
  EXPECT_TRUE(r.feasible);
  EXPECT_EQ(r.velocity.x, 0.3);
  EXPECT_EQ(r.velocity.y, -0.2);
}

TEST(SolveVelocity, SpeedCap) {
  const auto r = solve_velocity({}, {3, 4}, 1.0);
  EXPECT_NEAR(r.velocity.x, 0.6, 1e-12);
  EXPECT_NEAR(r.velocity.y, 0.8, 1e-12);
}

TEST(SolveVelocity, InfeasibleIsReported) {
  ConstraintSet cs;
  cs.planes.push_back({{1, 0}, {1, 0}});
  cs.planes.push_back({{-1, 0}, {-1, 0}});
  EXPECT_FALSE(solve_velocity(cs, {0, 0}, 2.0).feasible);
}

TEST(SolveVelocity, DuplicatePlanesStayFeasible) {
  // Identical constraints from different tuple pairs must not read as
  // contradictory through rounding.
  ConstraintSet cs;
  const Vec2 n = unit(0.7);
  const HalfPlane h{Point2{0.3, -0.1} + n * 0.45, n};
  for (int k = 0; k < 4; ++k) cs.planes.push_back(h);
  cs.planes.push_back({{0.3, -0.1}, unit(0.7 + 0.5 * kPi)});
  const auto r = solve_velocity(cs, {-1, -1}, 2.0);
  EXPECT_TRUE(r.feasible);
  for (const auto& p : cs.planes) EXPECT_GE(p.slack(r.velocity), -1e-9);
}

TEST(SolveVelocityProperty, MatchesCandidateOracle) {
  std::mt19937_64 rng(47);
  for (int iter = 0; iter < 500; ++iter) {
    const double vmax = uniform(rng, 0.5, 3);
    ConstraintSet cs;
    cs.planes = testing::random_feasible_planes(rng, vmax, 20);
    const Vec2 pref{uniform(rng, -2 * vmax, 2 * vmax), uniform(rng, -2 * vmax, 2 * vmax)};
    const auto r = solve_velocity(cs, pref, vmax);
    const auto o = testing::lp_oracle(cs.planes, vmax, pref);
    ASSERT_TRUE(o.has_value());
    ASSERT_TRUE(r.feasible);
    EXPECT_LE(norm(r.velocity), vmax + 1e-9);
    for (const auto& h : cs.planes) EXPECT_GE(h.slack(r.velocity), -1e-9);
    EXPECT_NEAR(distance(r.velocity, pref), distance(*o, pref), 1e-6);
    EXPECT_LE(distance(r.velocity, *o), 1e-6);
  }
}

// ---- fallback_velocity -------------------------------------------------------

TEST(FallbackVelocity, OpposingPlanes) {
  ConstraintSet cs;
  cs.planes.push_back({{1, 0}, {1, 0}});
  cs.planes.push_back({{-1, 0}, {-1, 0}});
  const auto r = fallback_velocity(cs, {0, 0}, 2.0);
  EXPECT_FALSE(r.feasible);
  EXPECT_NEAR(r.velocity.x, 0.0, 1e-9);
  EXPECT_NEAR(r.velocity.y, 0.0, 1e-9);
  EXPECT_NEAR(r.max_violation, 1.0, 1e-9);
}

TEST(FallbackVelocity, SingleViolatedPlaneProjects) {
  ConstraintSet cs;
  cs.planes.push_back({{1, 0}, {1, 0}});
  const auto r = fallback_velocity(cs, {0, 0.5}, 2.0);
  EXPECT_NEAR(r.velocity.x, 1.0, 1e-9);
  EXPECT_NEAR(r.velocity.y, 0.5, 1e-9);
  EXPECT_NEAR(r.max_violation, 0.0, 1e-9);
}

TEST(FallbackVelocityProperty, MatchesMinimaxOracle) {
  std::mt19937_64 rng(53);
  int infeasible = 0;
  for (int iter = 0; iter < 300; ++iter) {
    const double vmax = uniform(rng, 0.5, 3);
    ConstraintSet cs;
    cs.planes = testing::random_planes(rng, 2 * vmax, 20);
    const Vec2 cur{uniform(rng, -vmax, vmax), uniform(rng, -vmax, vmax)};
    const auto r = select_velocity(cs, cur, cur, vmax);
    if (r.feasible) continue;
    ++infeasible;
    EXPECT_LE(norm(r.velocity), vmax + 1e-9);
    EXPECT_NEAR(r.max_violation, testing::minimax_oracle(cs.planes, vmax), 1e-4);
  }
  EXPECT_GT(infeasible, 100);
}

}  // namespace
}  // namespace matnav
