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

// Multi-agent world: neighbor search, the two-phase step, and the
// collision bookkeeping used to compare bounding representations.

#ifndef MATNAV_SIM_H_
#define MATNAV_SIM_H_

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "matnav/ctmat.h"
#include "matnav/matrvo.h"
#include "matnav/minkowski.h"
#include "matnav/orientation.h"

namespace matnav {

enum class Mode {
  kCtmat,  // agents avoid each other as their tuple unions
  kDisc,   // agents avoid each other as the enclosing disc of that union
};

struct WorldParams {
  double dt = 0.1;
  double tau = 2.0;
  double neighbor_dist = 0.0;  // <= 0 picks 10x the largest bounding radius
  int max_neighbors = 10;
  double omega_max = kPi;
  double clearance_margin = 0.02;  // fraction of the agent's max width
  double goal_tolerance = 0.1;     // fraction of the bounding radius
  bool record_collisions = true;   // exact and bounding checks every step
  bool parallel = true;
  // Preferred velocities get a tiny seeded nudge each step so perfectly
  // symmetric layouts cannot settle into a deadlock.
  double perturbation = 1e-3;
  // Clearance agents keep between tuple unions, so that blocked agents still
  // have room to turn. Negative picks two steps of the fastest agent.
  double buffer = -1.0;
  std::uint64_t seed = 0;
};

struct AgentSpec {
  int shape = 0;  // index into the shape library
  Point2 position;
  Point2 goal;
  double orientation = 0.0;
  double v_max = 1.5;
  bool is_static = false;
};

struct Scenario {
  ShapeLibrary library;
  std::vector<AgentSpec> agents;
  WorldParams params;
  int max_steps = 1000;
};

struct AgentState {
  int id = 0;
  int shape = 0;
  Point2 position;
  double orientation = 0.0;
  double preferred_orientation = 0.0;
  Vec2 velocity;
  Vec2 preferred_velocity;
  Point2 goal;
  double v_max = 1.5;
  bool is_static = false;
  double bounding_radius = 0.0;
  bool feasible = true;
};

/// Per-shape data shared by all agents of that shape, for one mode.
struct ShapeRuntime {
  std::vector<TupleShape> tuples;  // body frame; the enclosing disc in disc mode
  std::vector<int> types;          // table type ids
  Polygon polygon;                 // exact body-frame outline
  Circle disc;                     // enclosing circle of the tuple union
  AgentHull hull;
  WidthTable widths;
  double bounding_radius = 0.0;
  double max_width = 0.0;
};

/// The representation a mode avoids with: in disc mode each shape becomes a
/// single degenerate tuple, the enclosing circle of its tuple union.
std::vector<ShapeRuntime> make_runtime(const ShapeLibrary& library, Mode mode);
/// The library actually used for tables in this mode.
ShapeLibrary runtime_library(const ShapeLibrary& library, Mode mode);

struct StepMetrics {
  int step = 0;
  int feasible = 0;
  int fallback = 0;
  double wall_ms = 0.0;
  long constraint_pairs = 0;      // tuple pairs examined by the constraint builder
  long predicted_pairs = 0;       // t(A) * sum t(N_k), from the neighbor lists
  long planes = 0;                // constraints kept after pruning
  int exact_collisions = 0;       // overlapping exact polygons after commit
  int bounding_collisions = 0;    // overlapping tuple unions after commit
  int disc_collisions = 0;        // overlapping enclosing discs after commit
  bool all_feasible = true;
  // Collision predictions over [0, tau] at the preferred velocities, per pair
  // of neighboring agents.
  int predicted_exact = 0;
  int predicted_ctmat = 0;
  int predicted_disc = 0;
};

struct TrajectoryRecord {
  int step = 0;
  int id = 0;
  double x = 0, y = 0, vx = 0, vy = 0, theta = 0;
  bool feasible = true;
};

class EmptyRun : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct FalsePositiveReport {
  double ratio = 0.0;
  long bounding_positive = 0;
  long exact_positive = 0;
  bool empty_denominator = false;
};

/// (bounding-positive and exact-negative) / bounding-positive over a run.
FalsePositiveReport false_positive_report(std::span<const StepMetrics> run, Mode mode);

/// Edges cross or one polygon holds a vertex of the other.
bool exact_collision(std::span<const Point2> a, std::span<const Point2> b);

/// True iff `a` moving by t * v for some t in [0, 1] touches the static `b`.
bool exact_sweep_collision(std::span<const Point2> a, const Vec2& v, std::span<const Point2> b);

/// 2D kd-tree over agent centers.
class KdTree {
 public:
  void build(std::span<const AgentState> agents);
  /// Up to max_count agents ordered by center distance minus both bounding
  /// radii (then id), excluding `self`, with that gap below max_dist.
  std::vector<int> query(std::span<const AgentState> agents, int self, double max_dist,
                         int max_count) const;

 private:
  struct Node {
    int begin = 0, end = 0;  // range in order_
    int left = -1, right = -1;
    double min_x = 0, max_x = 0, min_y = 0, max_y = 0;
  };
  int build_node(std::span<const AgentState> agents, int begin, int end, int depth);

  std::vector<int> order_;
  std::vector<Node> nodes_;
  double max_radius_ = 0.0;
};

Vec2 preferred_velocity(const AgentState& agent, double dt);

class World {
 public:
  /// The table, if any, must be built from runtime_library(library, mode).
  World(const Scenario& scenario, Mode mode, std::shared_ptr<const MinkTable> table = nullptr);

  void step();
  bool done() const;
  int run(int max_steps);  // steps taken

  std::span<const AgentState> agents() const { return agents_; }
  std::span<const StepMetrics> metrics() const { return metrics_; }
  std::span<const TrajectoryRecord> trajectory() const { return trajectory_; }
  const std::vector<ShapeRuntime>& shapes() const { return shapes_; }
  const WorldParams& params() const { return params_; }
  Mode mode() const { return mode_; }
  int steps_taken() const { return step_; }

  std::vector<TupleShape> world_tuples(int agent) const;
  Polygon world_polygon(int agent) const;
  bool reached_goal(int agent) const;
  std::vector<int> neighbors_of(int agent) const;

 private:
  struct Decision {
    Vec2 velocity;
    double orientation = 0.0;
    bool feasible = true;
    long pairs = 0;
    long predicted = 0;
    long planes = 0;
  };
  Decision decide(int i, std::span<const Body> bodies) const;
  Vec2 nudged_preference(const AgentState& a) const;
  void record_predictions(StepMetrics& m) const;
  void record_collisions(StepMetrics& m) const;

  WorldParams params_;
  Mode mode_;
  std::vector<ShapeRuntime> shapes_;
  std::vector<ShapeRuntime> ctmat_shapes_;  // for bounding checks in disc mode
  std::shared_ptr<const MinkTable> table_;
  std::vector<AgentState> agents_;
  KdTree tree_;
  std::vector<StepMetrics> metrics_;
  std::vector<TrajectoryRecord> trajectory_;
  int step_ = 0;
};

}  // namespace matnav

#endif  // MATNAV_SIM_H_
