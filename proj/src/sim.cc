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

#include "matnav/sim.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>

#include <fmt/format.h>
#include <tbb/parallel_for.h>

namespace matnav {

// ---- shapes per mode ------------------------------------------------------------

namespace {

std::vector<Circle> circles_of(std::span<const TupleShape> tuples) {
  std::vector<Circle> cs;
  for (const auto& t : tuples) {
    cs.push_back(t.big);
    if (!t.degenerate()) cs.push_back(t.small);
  }
  return cs;
}

Circle enclosing_disc(const CTMATShape& s) { return min_enclosing_circle_of_circles(circles_of(s.tuples)); }

}  // namespace

ShapeLibrary runtime_library(const ShapeLibrary& library, Mode mode) {
  if (mode == Mode::kCtmat) return library;
  ShapeLibrary out;
  for (const auto& named : library) {
    const Circle d = enclosing_disc(named.shape);
    CTMATShape s = named.shape;
    s.tuples = {make_tuple(d, d)};
    out.push_back({named.name, std::move(s)});
  }
  return out;
}

std::vector<ShapeRuntime> make_runtime(const ShapeLibrary& library, Mode mode) {
  std::vector<ShapeRuntime> out;
  int next_type = 0;
  const ShapeLibrary lib = runtime_library(library, mode);
  for (std::size_t k = 0; k < lib.size(); ++k) {
    ShapeRuntime r;
    r.tuples = lib[k].shape.tuples;
    for (std::size_t t = 0; t < r.tuples.size(); ++t) r.types.push_back(next_type++);
    r.polygon = library[k].shape.polygon;
    r.disc = enclosing_disc(library[k].shape);
    r.hull = convex_hull_of_tuples(r.tuples);
    r.widths = WidthTable::build(r.hull);
    for (const auto& c : circles_of(r.tuples)) {
      r.bounding_radius = std::max(r.bounding_radius, norm(c.center) + c.radius);
    }
    r.max_width = r.widths.max_width();
    out.push_back(std::move(r));
  }
  return out;
}

// ---- metrics ---------------------------------------------------------------------

FalsePositiveReport false_positive_report(std::span<const StepMetrics> run, Mode mode) {
  if (run.empty()) throw EmptyRun("false_positive_report: no steps recorded");
  FalsePositiveReport r;
  for (const auto& m : run) {
    r.bounding_positive += mode == Mode::kCtmat ? m.predicted_ctmat : m.predicted_disc;
    r.exact_positive += m.predicted_exact;
  }
  if (r.bounding_positive == 0) {
    r.empty_denominator = true;
    return r;
  }
  r.ratio = static_cast<double>(r.bounding_positive - r.exact_positive) / r.bounding_positive;
  return r;
}

// ---- exact polygons --------------------------------------------------------------

namespace {

int orient(const Point2& a, const Point2& b, const Point2& c) {
  const double v = cross(b - a, c - a);
  return (v > 0) - (v < 0);
}

bool on_segment(const Point2& a, const Point2& b, const Point2& p) {
  return std::min(a.x, b.x) <= p.x && p.x <= std::max(a.x, b.x) && std::min(a.y, b.y) <= p.y &&
         p.y <= std::max(a.y, b.y);
}

bool segments_touch(const Point2& p1, const Point2& p2, const Point2& q1, const Point2& q2) {
  const int o1 = orient(p1, p2, q1), o2 = orient(p1, p2, q2);
  const int o3 = orient(q1, q2, p1), o4 = orient(q1, q2, p2);
  if (o1 != o2 && o3 != o4) return true;
  return (o1 == 0 && on_segment(p1, p2, q1)) || (o2 == 0 && on_segment(p1, p2, q2)) ||
         (o3 == 0 && on_segment(q1, q2, p1)) || (o4 == 0 && on_segment(q1, q2, p2));
}

struct Box {
  double x0 = std::numeric_limits<double>::infinity(), y0 = x0;
  double x1 = -x0, y1 = -x0;
  explicit Box(std::span<const Point2> ps) {
    for (const auto& p : ps) {
      x0 = std::min(x0, p.x), x1 = std::max(x1, p.x);
      y0 = std::min(y0, p.y), y1 = std::max(y1, p.y);
    }
  }
  bool overlaps(const Box& o) const { return x0 <= o.x1 && o.x0 <= x1 && y0 <= o.y1 && o.y0 <= y1; }
};

}  // namespace

bool exact_collision(std::span<const Point2> a, std::span<const Point2> b) {
  if (a.empty() || b.empty() || !Box(a).overlaps(Box(b))) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const Point2& p1 = a[i];
    const Point2& p2 = a[(i + 1) % a.size()];
    for (std::size_t j = 0; j < b.size(); ++j) {
      if (segments_touch(p1, p2, b[j], b[(j + 1) % b.size()])) return true;
    }
  }
  return (a.size() >= 3 && point_in_polygon(b[0], a)) || (b.size() >= 3 && point_in_polygon(a[0], b));
}

bool exact_sweep_collision(std::span<const Point2> a, const Vec2& v, std::span<const Point2> b) {
  if (exact_collision(a, b)) return true;
  std::vector<Point2> moved(a.begin(), a.end());
  for (auto& p : moved) p = p + v;
  if (exact_collision(moved, b)) return true;
  // The swept region is A, A + v, and every edge dragged along v.
  for (std::size_t i = 0; i < a.size(); ++i) {
    const Point2& p = a[i];
    const Point2& q = a[(i + 1) % a.size()];
    const std::array<Point2, 4> quad{p, q, q + v, p + v};
    if (exact_collision(quad, b)) return true;
  }
  return false;
}

// ---- kd-tree ----------------------------------------------------------------------

int KdTree::build_node(std::span<const AgentState> agents, int begin, int end, int depth) {
  const int id = static_cast<int>(nodes_.size());
  nodes_.push_back({begin, end});
  Node& n = nodes_.back();
  n.min_x = n.min_y = std::numeric_limits<double>::infinity();
  n.max_x = n.max_y = -n.min_x;
  for (int k = begin; k < end; ++k) {
    const Point2& p = agents[order_[k]].position;
    n.min_x = std::min(n.min_x, p.x), n.max_x = std::max(n.max_x, p.x);
    n.min_y = std::min(n.min_y, p.y), n.max_y = std::max(n.max_y, p.y);
  }
  constexpr int kLeaf = 8;
  if (end - begin <= kLeaf) return id;
  const bool by_x = (n.max_x - n.min_x) >= (n.max_y - n.min_y);
  const int mid = (begin + end) / 2;
  std::nth_element(order_.begin() + begin, order_.begin() + mid, order_.begin() + end, [&](int i, int j) {
    const Point2& a = agents[i].position;
    const Point2& b = agents[j].position;
    const double ka = by_x ? a.x : a.y, kb = by_x ? b.x : b.y;
    return ka != kb ? ka < kb : i < j;
  });
  const int left = build_node(agents, begin, mid, depth + 1);
  const int right = build_node(agents, mid, end, depth + 1);
  nodes_[id].left = left;
  nodes_[id].right = right;
  return id;
}

void KdTree::build(std::span<const AgentState> agents) {
  order_.resize(agents.size());
  for (std::size_t i = 0; i < agents.size(); ++i) order_[i] = static_cast<int>(i);
  nodes_.clear();
  max_radius_ = 0.0;
  for (const auto& a : agents) max_radius_ = std::max(max_radius_, a.bounding_radius);
  if (!agents.empty()) build_node(agents, 0, static_cast<int>(agents.size()), 0);
}

std::vector<int> KdTree::query(std::span<const AgentState> agents, int self, double max_dist,
                               int max_count) const {
  std::vector<std::pair<double, int>> found;
  if (nodes_.empty() || max_count <= 0) return {};
  const AgentState& me = agents[self];
  const double reach = max_dist + me.bounding_radius + max_radius_;
  std::vector<int> stack{0};
  while (!stack.empty()) {
    const Node& n = nodes_[stack.back()];
    stack.pop_back();
    const double dx = std::max({n.min_x - me.position.x, 0.0, me.position.x - n.max_x});
    const double dy = std::max({n.min_y - me.position.y, 0.0, me.position.y - n.max_y});
    if (dx * dx + dy * dy > reach * reach) continue;
    if (n.left >= 0) {
      stack.push_back(n.left);
      stack.push_back(n.right);
      continue;
    }
    for (int k = n.begin; k < n.end; ++k) {
      const int j = order_[k];
      if (j == self) continue;
      const double gap = distance(agents[j].position, me.position) - me.bounding_radius -
                         agents[j].bounding_radius;
      if (gap <= max_dist) found.emplace_back(gap, agents[j].id);
    }
  }
  std::sort(found.begin(), found.end());
  if (static_cast<int>(found.size()) > max_count) found.resize(max_count);
  std::vector<int> out;
  out.reserve(found.size());
  for (const auto& [gap, id] : found) out.push_back(id);
  return out;
}

// ---- world ------------------------------------------------------------------------

Vec2 preferred_velocity(const AgentState& agent, double dt) {
  if (agent.is_static) return {0, 0};
  const Vec2 g = agent.goal - agent.position;
  const double d = norm(g);
  if (d <= 1e-12) return {0, 0};
  if (d > agent.v_max * dt) return g * (agent.v_max / d);
  return g / dt;
}

World::World(const Scenario& scenario, Mode mode, std::shared_ptr<const MinkTable> table)
    : params_(scenario.params), mode_(mode), table_(std::move(table)) {
  shapes_ = make_runtime(scenario.library, mode);
  ctmat_shapes_ = mode == Mode::kCtmat ? shapes_ : make_runtime(scenario.library, Mode::kCtmat);
  if (table_) {
    std::size_t types = 0;
    for (const auto& s : shapes_) types += s.tuples.size();
    if (static_cast<std::size_t>(table_->type_count()) != types) {
      throw std::invalid_argument(fmt::format("table has {} tuple types, the {} library has {}",
                                              table_->type_count(),
                                              mode == Mode::kCtmat ? "ctmat" : "disc", types));
    }
  }
  double max_radius = 0.0;
  for (std::size_t i = 0; i < scenario.agents.size(); ++i) {
    const AgentSpec& s = scenario.agents[i];
    if (s.shape < 0 || s.shape >= static_cast<int>(shapes_.size())) {
      throw std::invalid_argument(fmt::format("agent {} uses unknown shape index {}", i, s.shape));
    }
    AgentState a;
    a.id = static_cast<int>(i);
    a.shape = s.shape;
    a.position = s.position;
    a.orientation = s.orientation;
    a.preferred_orientation = s.orientation;
    a.goal = s.is_static ? s.position : s.goal;
    a.v_max = s.v_max;
    a.is_static = s.is_static;
    a.bounding_radius = shapes_[s.shape].bounding_radius;
    max_radius = std::max(max_radius, ctmat_shapes_[s.shape].bounding_radius);
    agents_.push_back(a);
  }
  if (params_.neighbor_dist <= 0.0) params_.neighbor_dist = 10.0 * max_radius;
  if (params_.buffer < 0.0) {
    double fastest = 0.0;
    for (const auto& a : agents_) fastest = std::max(fastest, a.v_max);
    params_.buffer = 2.0 * fastest * params_.dt;
  }
}

std::vector<TupleShape> World::world_tuples(int agent) const {
  const AgentState& a = agents_[agent];
  const Pose pose{a.position, a.orientation};
  std::vector<TupleShape> out;
  for (const auto& t : shapes_[a.shape].tuples) out.push_back(t.transformed(pose));
  return out;
}

Polygon World::world_polygon(int agent) const {
  const AgentState& a = agents_[agent];
  const Pose pose{a.position, a.orientation};
  Polygon out;
  for (const auto& p : shapes_[a.shape].polygon) out.push_back(pose.apply(p));
  return out;
}

bool World::reached_goal(int agent) const {
  const AgentState& a = agents_[agent];
  return a.is_static ||
         distance(a.position, a.goal) <= params_.goal_tolerance * ctmat_shapes_[a.shape].bounding_radius;
}

bool World::done() const {
  for (std::size_t i = 0; i < agents_.size(); ++i) {
    if (!reached_goal(static_cast<int>(i))) return false;
  }
  return true;
}

std::vector<int> World::neighbors_of(int agent) const {
  KdTree tree;
  tree.build(agents_);
  return tree.query(agents_, agent, params_.neighbor_dist, params_.max_neighbors);
}

namespace {

std::uint64_t splitmix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

Vec2 World::nudged_preference(const AgentState& a) const {
  const Vec2 pref = preferred_velocity(a, params_.dt);
  if (params_.perturbation <= 0.0 || norm_sq(pref) == 0.0) return pref;
  // Keyed on (seed, step, agent) so the result does not depend on scheduling.
  const std::uint64_t h = splitmix(splitmix(splitmix(params_.seed) ^ static_cast<std::uint64_t>(step_)) ^
                                   static_cast<std::uint64_t>(a.id));
  const double u = static_cast<double>(h >> 11) * 0x1.0p-53;
  const double r = static_cast<double>(splitmix(h) >> 11) * 0x1.0p-53;
  return pref + unit(kTwoPi * u) * (params_.perturbation * r);
}

World::Decision World::decide(int i, std::span<const Body> bodies) const {
  const AgentState& a = agents_[i];
  Decision d;
  d.orientation = a.orientation;
  if (a.is_static) return d;
  const auto ids = tree_.query(agents_, i, params_.neighbor_dist, params_.max_neighbors);
  std::vector<const Body*> nbs;
  double nb_vmax = 0.0;
  long nb_tuples = 0;
  for (int j : ids) {
    nbs.push_back(&bodies[j]);
    if (!bodies[j].is_static) nb_vmax = std::max(nb_vmax, bodies[j].v_max);
    nb_tuples += static_cast<long>(bodies[j].tuples.size());
  }
  ConstraintOptions opt;
  opt.tau = params_.tau;
  opt.escape_time = params_.dt;
  opt.prune_margin = 2.0 * (a.v_max + nb_vmax);
  opt.table = table_.get();
  opt.buffer = params_.buffer;
  const ConstraintSet cs = collect_constraints(bodies[i], nbs, opt);
  d.pairs = cs.candidates;
  d.predicted = static_cast<long>(bodies[i].tuples.size()) * nb_tuples;
  d.planes = static_cast<long>(cs.planes.size());

  // Only constrained agents can deadlock, so free ones follow v0 exactly.
  const Vec2 pref = cs.planes.empty() ? preferred_velocity(a, params_.dt) : nudged_preference(a);
  const VelocityResult r = select_velocity(cs, pref, a.velocity, a.v_max);
  d.velocity = r.velocity;
  d.feasible = r.feasible;

  const ShapeRuntime& s = shapes_[a.shape];
  std::optional<double> corridor;
  if (norm(r.velocity) > 1e-9) {
    corridor = corridor_width(a.position, angle_of(r.velocity), norm(r.velocity) * params_.tau, nbs);
  }
  OrientationParams op;
  op.dt = params_.dt;
  op.omega_max = params_.omega_max;
  op.clearance_margin = params_.clearance_margin * s.max_width;
  d.orientation = update_orientation({a.position, a.orientation, &s.hull, &s.widths}, r.velocity,
                                     corridor, nbs, op);
  return d;
}

namespace {

// Relative motion over [0, tau] brings the two discs within contact.
bool discs_meet(const Point2& ca, double ra, const Point2& cb, double rb, const Vec2& v_rel, double tau) {
  const Vec2 d = cb - ca;
  const double vv = norm_sq(v_rel);
  const double t = vv > 0 ? std::clamp(dot(d, v_rel) / vv, 0.0, tau) : 0.0;
  return norm(d - v_rel * t) < ra + rb;
}

}  // namespace

void World::record_collisions(StepMetrics& m) const {
  const int n = static_cast<int>(agents_.size());
  std::vector<Polygon> polys(n);
  std::vector<std::vector<TupleShape>> tuples(n);
  for (int i = 0; i < n; ++i) {
    polys[i] = world_polygon(i);
    const Pose pose{agents_[i].position, agents_[i].orientation};
    for (const auto& t : ctmat_shapes_[agents_[i].shape].tuples) tuples[i].push_back(t.transformed(pose));
  }
  for (int i = 0; i < n; ++i) {
    const AgentState& a = agents_[i];
    const ShapeRuntime& sa = ctmat_shapes_[a.shape];
    const Pose pa{a.position, a.orientation};
    for (int j = i + 1; j < n; ++j) {
      const AgentState& b = agents_[j];
      if (a.is_static && b.is_static) continue;
      const ShapeRuntime& sb = ctmat_shapes_[b.shape];
      const Pose pb{b.position, b.orientation};
      if (distance(a.position, b.position) > sa.bounding_radius + sb.bounding_radius) continue;
      const bool disc = distance(pa.apply(sa.disc.center), pb.apply(sb.disc.center)) <
                        sa.disc.radius + sb.disc.radius;
      bool ctmat = false;
      for (const auto& ta : tuples[i]) {
        for (const auto& tb : tuples[j]) {
          if (separation(ArcHull::of_tuple(ta), ArcHull::of_tuple(tb)) < 0) ctmat = true;
        }
      }
      const bool exact = exact_collision(polys[i], polys[j]);
      m.disc_collisions += disc;
      m.bounding_collisions += ctmat;
      m.exact_collisions += exact;
    }
  }
}

void World::record_predictions(StepMetrics& m) const {
  const int n = static_cast<int>(agents_.size());
  {
    // Collision predictions at the preferred velocities, per representation.
    std::vector<Polygon> before(n);
    std::vector<std::vector<TupleShape>> ct(n);
    std::vector<Vec2> pref(n);
    for (int i = 0; i < n; ++i) {
      before[i] = world_polygon(i);
      const Pose pose{agents_[i].position, agents_[i].orientation};
      for (const auto& t : ctmat_shapes_[agents_[i].shape].tuples) ct[i].push_back(t.transformed(pose));
      pref[i] = preferred_velocity(agents_[i], params_.dt);
    }
    for (int i = 0; i < n; ++i) {
      const auto& sa = ctmat_shapes_[agents_[i].shape];
      for (int j = i + 1; j < n; ++j) {
        if (agents_[i].is_static && agents_[j].is_static) continue;
        const auto& sb = ctmat_shapes_[agents_[j].shape];
        const double gap = distance(agents_[i].position, agents_[j].position) - sa.bounding_radius -
                           sb.bounding_radius;
        if (gap > params_.neighbor_dist) continue;
        const Vec2 v_rel = pref[i] - pref[j];
        const Pose pa{agents_[i].position, agents_[i].orientation};
        const Pose pb{agents_[j].position, agents_[j].orientation};
        const bool disc = discs_meet(pa.apply(sa.disc.center), sa.disc.radius, pb.apply(sb.disc.center),
                                     sb.disc.radius, v_rel, params_.tau);
        if (!disc) continue;  // nothing tighter can predict a collision
        bool ctmat = false;
        for (const auto& ta : ct[i]) {
          for (const auto& tb : ct[j]) {
            const VOCone cone = velocity_obstacle(minkowski_two_tuples(ta, tb), params_.tau, params_.dt);
            if (cone.overlap || cone.contains(v_rel)) ctmat = true;
          }
        }
        const bool exact = ctmat && exact_sweep_collision(before[i], v_rel * params_.tau, before[j]);
        m.predicted_disc += disc;
        m.predicted_ctmat += ctmat;
        m.predicted_exact += exact;
      }
    }
  }

}

void World::step() {
  StepMetrics m;
  m.step = step_;
  if (params_.record_collisions) record_predictions(m);
  const auto t0 = std::chrono::steady_clock::now();
  const int n = static_cast<int>(agents_.size());
  tree_.build(agents_);

  // Phase 1: everything below reads the snapshot only.
  std::vector<Body> bodies(n);
  for (int i = 0; i < n; ++i) {
    const AgentState& a = agents_[i];
    Body& b = bodies[i];
    b.id = a.id;
    b.position = a.position;
    b.tuples = world_tuples(i);
    b.types = shapes_[a.shape].types;
    b.velocity = a.velocity;
    b.v_max = a.v_max;
    b.is_static = a.is_static;
  }
  std::vector<Decision> decisions(n);
  if (params_.parallel) {
    tbb::parallel_for(0, n, [&](int i) { decisions[i] = decide(i, bodies); });
  } else {
    for (int i = 0; i < n; ++i) decisions[i] = decide(i, bodies);
  }

  // Phase 2: commit.
  for (int i = 0; i < n; ++i) {
    AgentState& a = agents_[i];
    const Decision& d = decisions[i];
    if (!a.is_static) {
      a.preferred_velocity = preferred_velocity(a, params_.dt);
      a.velocity = d.velocity;
      a.position = a.position + d.velocity * params_.dt;
      a.orientation = d.orientation;
      a.feasible = d.feasible;
      m.feasible += d.feasible;
      m.fallback += !d.feasible;
      m.all_feasible = m.all_feasible && d.feasible;
    }
    m.constraint_pairs += d.pairs;
    m.predicted_pairs += d.predicted;
    m.planes += d.planes;
  }
  for (const auto& a : agents_) {
    trajectory_.push_back({step_, a.id, a.position.x, a.position.y, a.velocity.x, a.velocity.y,
                           a.orientation, a.feasible});
  }
  m.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  if (params_.record_collisions) record_collisions(m);
  metrics_.push_back(m);
  ++step_;
}

int World::run(int max_steps) {
  int taken = 0;
  while (taken < max_steps && !done()) {
    step();
    ++taken;
  }
  return taken;
}

}  // namespace matnav
