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

#ifndef MATNAV_MINKOWSKI_H_
#define MATNAV_MINKOWSKI_H_

#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "matnav/arc_hull.h"
#include "matnav/ctmat.h"
#include "matnav/geom.h"

namespace matnav {

enum class Provenance { kExact, kTable };

/// B (+) (-A): the set of offsets b - a. Its boundary is the outline of
/// arcs and segments that the velocity obstacle is built from.
struct MinkowskiOutline {
  ArcHull region;
  Provenance provenance = Provenance::kExact;

  Outline outline() const { return region.outline(); }
};

/// The tuple dilated by a disc of radius r.
TupleShape offset_tuple(const TupleShape& t, double r);

/// Exact sum tB (+) (-tA): tB grown by each of A's radii, shifted by minus
/// the matching center of A, then joined by outer tangents.
MinkowskiOutline minkowski_two_tuples(const TupleShape& a, const TupleShape& b);

/// Convex region containing every circle rotated about `pivot` by any angle
/// in [from, to]. Exact hull of the swept circles: each circle at both end
/// angles plus the arc traced by its far point.
ArcHull swept_circles(std::span<const Circle> circles, const Point2& pivot, double from, double to);

/// The tuple rotated about its big-circle center through [from, to].
ArcHull swept_tuple(const TupleShape& t, double from, double to);

class UnknownShapeType : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

/// Precomputed conservative sums for every ordered pair of tuple types and
/// every relative-orientation bucket. Entries live in A's canonical frame:
/// A's big center at the origin, A's axis along +x, B's big center at the
/// origin before the runtime offset is applied.
class MinkTable {
 public:
  MinkTable() = default;

  static MinkTable build(const ShapeLibrary& library, double theta_e = kPi / 36);

  double theta_e() const { return theta_e_; }
  int bucket_count() const { return buckets_; }
  int type_count() const { return static_cast<int>(offsets_.empty() ? 0 : offsets_.back()); }
  int shape_count() const { return static_cast<int>(offsets_.size()) - 1; }
  /// Dense id of (shape, tuple); throws UnknownShapeType.
  int type_id(int shape, int tuple) const;
  /// Bucket holding the relative orientation (any real angle).
  int bucket(double relative_angle) const;

  const ArcHull& entry(int type_a, int type_b, int bucket) const;
  MinkowskiOutline lookup(int type_a, const TupleShape& a, int type_b, const TupleShape& b) const;
  /// The same region in A's axis frame, i.e. rotated by -a.theta about the
  /// origin; saves the rotation when the caller can work in that frame.
  MinkowskiOutline lookup_local(int type_a, const TupleShape& a, int type_b, const TupleShape& b) const;

  /// Raw access for serialization.
  const std::vector<int>& offsets() const { return offsets_; }
  const std::vector<ArcHull>& entries() const { return entries_; }
  static MinkTable from_parts(double theta_e, std::vector<int> offsets, std::vector<ArcHull> entries);

 private:
  double theta_e_ = kPi / 36;
  int buckets_ = 0;
  std::vector<int> offsets_;  // prefix sums of tuple counts per shape
  std::vector<ArcHull> entries_;
};

/// Number of buckets for a bucket width: floor(2pi / theta_e), plus one
/// boundary bucket when 2pi is not an exact multiple.
int bucket_count_for(double theta_e);

}  // namespace matnav

#endif  // MATNAV_MINKOWSKI_H_
