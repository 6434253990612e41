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

#include "matnav/shapes.h"

#include <stdexcept>

#include <fmt/format.h>

namespace matnav::shapes {

InputContour rectangle(double length, double width) {
  const double x = length / 2;
  const double y = width / 2;
  return {{{-x, -y}, {x, -y}, {x, y}, {-x, y}}, ContourKind::kPolygon};
}

InputContour capsule(double length, double width, int samples_per_end) {
  const double r = width / 2;
  const double x = length / 2 - r;
  InputContour c{{}, ContourKind::kSampledCurve};
  for (int i = 0; i <= samples_per_end; ++i) {
    c.points.push_back(Point2{x, 0} + unit(-kPi / 2 + kPi * i / samples_per_end) * r);
  }
  for (int i = 0; i <= samples_per_end; ++i) {
    c.points.push_back(Point2{-x, 0} + unit(kPi / 2 + kPi * i / samples_per_end) * r);
  }
  return c;
}

InputContour l_shape(double size, double thickness) {
  const double s = size / 2;
  const double t = -s + thickness;
  return {{{-s, -s}, {s, -s}, {s, t}, {t, t}, {t, s}, {-s, s}}, ContourKind::kPolygon};
}

InputContour plus_sign(double arm, double half_width) {
  const double a = arm + half_width;
  const double w = half_width;
  return {{{w, -w}, {a, -w}, {a, w}, {w, w}, {w, a}, {-w, a},
           {-w, w}, {-a, w}, {-a, -w}, {-w, -w}, {-w, -a}, {w, -a}},
          ContourKind::kPolygon};
}

InputContour triangle(double size) {
  return {{{-size, -0.6 * size}, {size, -0.6 * size}, {0, 0.9 * size}}, ContourKind::kPolygon};
}

InputContour car(double length, double width) {
  const double x = length / 2;
  const double y = width / 2;
  // Tapered nose and tail, slight mirror bulges.
  return {{{-x, -0.8 * y},
           {-0.85 * x, -y},
           {0.3 * x, -y},
           {0.35 * x, -1.1 * y},
           {0.45 * x, -1.1 * y},
           {0.5 * x, -y},
           {0.85 * x, -0.95 * y},
           {x, -0.6 * y},
           {x, 0.6 * y},
           {0.85 * x, 0.95 * y},
           {0.5 * x, y},
           {0.45 * x, 1.1 * y},
           {0.35 * x, 1.1 * y},
           {0.3 * x, y},
           {-0.85 * x, y},
           {-x, 0.8 * y}},
          ContourKind::kPolygon};
}

InputContour circle(double radius, int samples) {
  InputContour c{{}, ContourKind::kSampledCurve};
  for (int i = 0; i < samples; ++i) c.points.push_back(unit(kTwoPi * i / samples) * radius);
  return c;
}

InputContour by_name(const std::string& name) {
  if (name == "rectangle") return rectangle(4.0, 2.0);
  if (name == "capsule") return capsule(4.0, 2.0);
  if (name == "l_shape") return l_shape();
  if (name == "plus_sign") return plus_sign();
  if (name == "triangle") return triangle();
  if (name == "car") return car();
  if (name == "circle") return circle(1.0);
  throw std::invalid_argument(fmt::format("unknown built-in shape '{}'", name));
}

std::vector<std::string> names() {
  return {"rectangle", "capsule", "l_shape", "plus_sign", "triangle", "car", "circle"};
}

}  // namespace matnav::shapes
