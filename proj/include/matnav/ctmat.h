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

// Shape approximation by tuples: contour -> polygon -> boundary samples ->
// constrained Delaunay triangulation -> medial circles -> filtered graph ->
// tuples -> coverage-corrected tuples.

#ifndef MATNAV_CTMAT_H_
#define MATNAV_CTMAT_H_

#include <array>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "matnav/geom.h"

namespace matnav {

using Polygon = std::vector<Point2>;

enum class ContourKind {
  kPolygon,       // exact polygon, kept as is
  kSampledCurve,  // samples of a smooth closed curve
};

struct InputContour {
  std::vector<Point2> points;
  ContourKind kind = ContourKind::kPolygon;
};

class SelfIntersectionError : public GeometryError {
 public:
  using GeometryError::GeometryError;
};

/// No web candidate could cover the boundary, even with doubled caps.
class CoverageFailure : public std::runtime_error {
 public:
  CoverageFailure(const std::string& what, std::vector<Segment> violations)
      : std::runtime_error(what), violations_(std::move(violations)) {}
  const std::vector<Segment>& violations() const { return violations_; }

 private:
  std::vector<Segment> violations_;
};

double signed_area(std::span<const Point2> poly);
bool is_simple(std::span<const Point2> poly);
bool point_in_polygon(const Point2& p, std::span<const Point2> poly);

/// Overestimating polygon for the contour: counterclockwise, contains the
/// input region and stays within `tol` of it. Polygons pass through unchanged
/// apart from orientation.
Polygon polygonize(const InputContour& contour, double tol);

struct BoundarySamples {
  std::vector<Point2> points;  // counterclockwise, polygon vertices included
  Polygon polygon;
  double h = 0.0;

  std::size_t size() const { return points.size(); }
  /// Sampling segment i runs from sample i to sample i + 1 (cyclically).
  Segment segment(std::size_t i) const { return {points[i], points[(i + 1) % points.size()]}; }
};

BoundarySamples sample_boundary(const Polygon& polygon, double h);

enum class TriangleClass { kT, kS, kJ };

/// Interior triangulation of the sample loop. Edge k of a triangle runs from
/// vertex k to vertex k + 1; `neighbor` is -1 across the boundary.
struct TriangleMesh {
  std::vector<std::array<int, 3>> triangles;
  std::vector<std::array<int, 3>> neighbor;
  std::vector<std::array<bool, 3>> external;
  std::vector<TriangleClass> classes;
};

TriangleMesh constrained_delaunay(const BoundarySamples& samples);

struct MedialCircle {
  Circle circle;
  TriangleClass source = TriangleClass::kT;
};

struct MedialGraph {
  std::vector<MedialCircle> circles;
  std::vector<std::pair<int, int>> edges;  // (i, j) with i < j, sorted

  std::vector<int> neighbors(int i) const;
};

/// One circle per T/J triangle (adjacent J triangles sharing a circumcircle
/// form a single junction); edges through direct contact or S-triangle chains.
MedialGraph build_medial_graph(const TriangleMesh& mesh, const BoundarySamples& samples);

/// Gamma = (d + r_min) / (r_a + r_b); below 1 the circles are nearly redundant.
double filter_ratio(const Circle& a, const Circle& b);

MedialGraph filter_circles(const MedialGraph& g, double phi);

/// One tuple per edge, in edge order; a lone circle yields a degenerate tuple.
std::vector<TupleShape> interpolate_tuples(const MedialGraph& g);

struct BuildParams {
  double h = 0.0;            // sampling density; <= 0 picks 5% of the bbox diagonal
  double phi = 1.0;          // filter threshold
  double curve_tol = 0.0;    // polygonization tolerance; <= 0 picks 1% of the diagonal
  int rays = 16;
  int rings = 8;
  double ring_step = 0.05;   // fraction of the original radius
  double center_cap = 0.5;   // fraction of the original radius
  double radius_cap = 2.0;   // fraction of the original radius
};

/// The tuple representation of one agent, in its body frame: the reference
/// point (area centroid of the tuple union) sits at the origin.
struct CTMATShape {
  std::vector<TupleShape> tuples;
  MedialGraph graph;    // tuple k spans graph.edges[k] (or the lone circle)
  Polygon polygon;      // source polygon in the body frame
  Point2 reference;     // body origin expressed in the input frame
  double h = 0.0;

  /// Max distance from the origin to the union.
  double bounding_radius() const;
};

/// True iff the segment is inside the union, certified piecewise: every
/// sub-piece of length <= piece_len lies inside one (convex) tuple.
bool segment_in_union(const Segment& s, std::span<const TupleShape> tuples, double piece_len);

/// Moves and resizes the medial circles one at a time until every sampling
/// segment is covered. The result is expressed in the input frame
/// (reference point computed but not applied).
CTMATShape modify_cover(const MedialGraph& g, const BoundarySamples& samples,
                        const BuildParams& params);

struct CoverReport {
  bool ok = true;
  std::vector<Segment> violations;
};

/// Re-samples the polygon at h/4 and checks every sample is in the union.
CoverReport verify_cover(const CTMATShape& shape, const Polygon& polygon);

/// Area centroid of the tuple union, from a fixed 256x256 grid.
Point2 union_centroid(std::span<const TupleShape> tuples);

/// Named shapes available to a simulation; tuple types are (shape, tuple).
struct NamedShape {
  std::string name;
  CTMATShape shape;
};
using ShapeLibrary = std::vector<NamedShape>;

/// Full pipeline; output is in the body frame.
CTMATShape build_ctmat(const InputContour& contour, const BuildParams& params = {});

/// Re-expresses a shape so that `origin` (input frame) becomes the body origin.
CTMATShape rebase(const CTMATShape& shape, const Point2& origin);

}  // namespace matnav

#endif  // MATNAV_CTMAT_H_
