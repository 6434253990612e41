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

// Benchmark layouts. Each generator returns agents only; shapes are indices
// into the library the caller passes in.

#ifndef MATNAV_SCENARIO_H_
#define MATNAV_SCENARIO_H_

#include <vector>

#include "matnav/sim.h"

namespace matnav {

/// Agents evenly spaced on a circle, each heading to the opposite point.
/// Shapes are assigned round-robin from `shapes`.
struct AntipodalCircle {
  int n = 20;
  double radius = 20.0;
  std::vector<int> shapes{0};
  double v_max = 1.5;
};

/// Two perpendicular columns crossing at the origin.
struct CrossingStreams {
  int per_stream = 10;
  double spacing = 4.0;   // between consecutive agents of a stream
  double distance = 20.0;  // start of the first agent from the crossing
  int shape = 0;
  double v_max = 1.5;
};

/// Two groups swapping ends of a straight corridor walled by static tiles.
struct Hallway {
  int per_side = 3;
  double length = 40.0;
  double width = 4.8;  // gap between the walls' tuple unions
  int agent_shape = 0;
  int wall_shape = 1;
  double v_max = 1.5;
};

/// A wall across the x axis with one door; agents file through it from
/// below, starting broadside to the door.
struct NarrowDoor {
  int agents = 4;
  double door_width = 3.0;  // between the tuple unions of the jambs
  double wall_length = 30.0;
  int agent_shape = 0;
  int wall_shape = 1;
  double v_max = 1.5;
};

std::vector<AgentSpec> generate(const ShapeLibrary& library, const AntipodalCircle& g);
std::vector<AgentSpec> generate(const ShapeLibrary& library, const CrossingStreams& g);
std::vector<AgentSpec> generate(const ShapeLibrary& library, const Hallway& g);
std::vector<AgentSpec> generate(const ShapeLibrary& library, const NarrowDoor& g);

}  // namespace matnav

#endif  // MATNAV_SCENARIO_H_
