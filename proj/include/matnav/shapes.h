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

// Built-in agent contours, all centered near the origin.

#ifndef MATNAV_SHAPES_H_
#define MATNAV_SHAPES_H_

#include <string>
#include <vector>

#include "matnav/ctmat.h"

namespace matnav::shapes {

InputContour rectangle(double length, double width);
/// Stadium: a length x width rectangle with semicircular ends, sampled.
InputContour capsule(double length, double width, int samples_per_end = 24);
InputContour l_shape(double size = 2.0, double thickness = 0.8);
InputContour plus_sign(double arm = 1.0, double half_width = 0.5);
InputContour triangle(double size = 1.0);
/// Top-down outline of a car, nose towards +x.
InputContour car(double length = 4.5, double width = 1.8);
InputContour circle(double radius, int samples = 64);

/// Looks up one of the names above with default dimensions.
InputContour by_name(const std::string& name);
std::vector<std::string> names();

}  // namespace matnav::shapes

#endif  // MATNAV_SHAPES_H_
