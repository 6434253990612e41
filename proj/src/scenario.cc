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

#include "matnav/scenario.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

namespace matnav {

namespace {

const CTMATShape& shape_at(const ShapeLibrary& library, int index, const char* what) {
  if (index < 0 || index >= static_cast<int>(library.size())) {
    throw std::invalid_argument(fmt::format("{}: shape index {} out of range", what, index));
  }
  return library[index].shape;
}

// Body-frame extent of the tuple union along a direction.
double reach(const CTMATShape& s, double angle) {
  double r = -std::numeric_limits<double>::infinity();
  for (const auto& t : s.tuples) r = std::max(r, ArcHull::of_tuple(t).support(angle));
  return r;
}

void add_wall(std::vector<AgentSpec>& out, int shape, double x0, double x1, double y, double pitch) {
  for (double x = x0; x <= x1 + 1e-9; x += pitch) out.push_back({shape, {x, y}, {x, y}, 0.0, 0.0, true});
}

}  // namespace

std::vector<AgentSpec> generate(const ShapeLibrary& library, const AntipodalCircle& g) {
  if (g.n <= 0 || g.shapes.empty()) throw std::invalid_argument("antipodal-circle: need agents and shapes");
  double max_r = 0.0;
  for (int s : g.shapes) max_r = std::max(max_r, shape_at(library, s, "antipodal-circle").bounding_radius());
  if (g.n > 1 && 2.0 * g.radius * std::sin(kPi / g.n) <= 2.0 * max_r) {
    throw std::invalid_argument(
        fmt::format("antipodal-circle: radius {} too small for {} agents of radius {:.3f}", g.radius, g.n, max_r));
  }
  std::vector<AgentSpec> out;
  for (int k = 0; k < g.n; ++k) {
    const double a = kTwoPi * k / g.n;
    const Point2 p = unit(a) * g.radius;
    out.push_back({g.shapes[k % g.shapes.size()], p, -p, wrap_angle(a + kPi), g.v_max, false});
  }
  return out;
}

std::vector<AgentSpec> generate(const ShapeLibrary& library, const CrossingStreams& g) {
  shape_at(library, g.shape, "crossing-streams");
  const double travel = 2.0 * g.distance + (g.per_stream - 1) * g.spacing;
  std::vector<AgentSpec> out;
  for (int k = 0; k < g.per_stream; ++k) {
    const double s = -g.distance - k * g.spacing;
    out.push_back({g.shape, {s, 0.0}, {s + travel, 0.0}, 0.0, g.v_max, false});
    out.push_back({g.shape, {0.0, s}, {0.0, s + travel}, 0.5 * kPi, g.v_max, false});
  }
  return out;
}

std::vector<AgentSpec> generate(const ShapeLibrary& library, const Hallway& g) {
  const CTMATShape& agent = shape_at(library, g.agent_shape, "hallway");
  const CTMATShape& wall = shape_at(library, g.wall_shape, "hallway");
  const double pitch = 0.9 * (reach(wall, 0.0) + reach(wall, kPi));
  const double spacing = 2.5 * agent.bounding_radius();
  const double half = 0.5 * g.length;
  const double end = half + (g.per_side + 2) * spacing;
  std::vector<AgentSpec> out;
  add_wall(out, g.wall_shape, -end, end, 0.5 * g.width + reach(wall, -0.5 * kPi), pitch);
  add_wall(out, g.wall_shape, -end, end, -0.5 * g.width - reach(wall, 0.5 * kPi), pitch);
  // A slight lane offset breaks the head-on symmetry.
  const double lane = 0.02 * g.width;
  for (int k = 0; k < g.per_side; ++k) {
    // Front agents travel farthest, so nobody has to overtake.
    const double x = half + k * spacing;
    out.push_back({g.agent_shape, {-x, lane}, {x - 2.0 * k * spacing, lane}, 0.0, g.v_max, false});
    out.push_back({g.agent_shape, {x, -lane}, {-x + 2.0 * k * spacing, -lane}, kPi, g.v_max, false});
  }
  return out;
}

std::vector<AgentSpec> generate(const ShapeLibrary& library, const NarrowDoor& g) {
  const CTMATShape& agent = shape_at(library, g.agent_shape, "narrow-door");
  const CTMATShape& wall = shape_at(library, g.wall_shape, "narrow-door");
  const double pitch = 0.9 * (reach(wall, 0.0) + reach(wall, kPi));
  const double spacing = 2.5 * agent.bounding_radius();
  const double jamb = 0.5 * g.door_width;
  std::vector<AgentSpec> out;
  // Jambs sit flush with the door; the rest of each half extends outward.
  add_wall(out, g.wall_shape, jamb + reach(wall, kPi), 0.5 * g.wall_length, 0.0, pitch);
  std::vector<AgentSpec> left;
  add_wall(left, g.wall_shape, jamb + reach(wall, 0.0), 0.5 * g.wall_length, 0.0, pitch);
  for (auto& w : left) w.position.x = -w.position.x, w.goal = w.position;
  out.insert(out.end(), left.begin(), left.end());
  const double start = 2.0 * agent.bounding_radius() + 2.0;
  for (int k = 0; k < g.agents; ++k) {
    const double y = start + k * spacing;
    const double goal = start + (g.agents - 1 - k) * spacing;
    out.push_back({g.agent_shape, {0.0, -y}, {0.0, goal}, 0.0, g.v_max, false});
  }
  return out;
}

}  // namespace matnav
