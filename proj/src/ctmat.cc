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

#include "matnav/ctmat.h"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <set>
#include <unordered_map>

#include <fmt/format.h>

namespace matnav {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double bbox_diagonal(std::span<const Point2> pts) {
  double x0 = kInf, y0 = kInf, x1 = -kInf, y1 = -kInf;
  for (const auto& p : pts) {
    x0 = std::min(x0, p.x);
    y0 = std::min(y0, p.y);
    x1 = std::max(x1, p.x);
    y1 = std::max(y1, p.y);
  }
  return std::hypot(x1 - x0, y1 - y0);
}

double orient(const Point2& a, const Point2& b, const Point2& c) { return cross(b - a, c - a); }

bool on_segment(const Point2& p, const Point2& a, const Point2& b) {
  return std::min(a.x, b.x) <= p.x && p.x <= std::max(a.x, b.x) && std::min(a.y, b.y) <= p.y &&
         p.y <= std::max(a.y, b.y);
}

bool segments_touch(const Point2& a, const Point2& b, const Point2& c, const Point2& d) {
  const double d1 = orient(c, d, a);
  const double d2 = orient(c, d, b);
  const double d3 = orient(a, b, c);
  const double d4 = orient(a, b, d);
  if (((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) && ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0))) {
    return true;
  }
  return (d1 == 0 && on_segment(a, c, d)) || (d2 == 0 && on_segment(b, c, d)) ||
         (d3 == 0 && on_segment(c, a, b)) || (d4 == 0 && on_segment(d, a, b));
}

std::vector<Point2> dedupe_loop(std::vector<Point2> pts) {
  std::vector<Point2> out;
  for (const auto& p : pts) {
    if (out.empty() || !(out.back() == p)) out.push_back(p);
  }
  while (out.size() > 1 && out.front() == out.back()) out.pop_back();
  return out;
}

double polyline_distance(const Point2& p, std::span<const Point2> loop) {
  double best = kInf;
  for (std::size_t i = 0; i < loop.size(); ++i) {
    best = std::min(best, closest_point_on_segment(p, {loop[i], loop[(i + 1) % loop.size()]}).distance);
  }
  return best;
}

// Douglas-Peucker on loop[a..b] (indices modulo n), marking kept vertices.
void douglas_peucker(std::span<const Point2> loop, std::size_t a, std::size_t b, double eps,
                     std::vector<bool>& keep) {
  const std::size_t n = loop.size();
  const std::size_t span = (b + n - a) % n;
  if (span < 2) return;
  double best = -1.0;
  std::size_t best_i = a;
  for (std::size_t k = 1; k < span; ++k) {
    const std::size_t i = (a + k) % n;
    const double d = closest_point_on_segment(loop[i], {loop[a], loop[b % n]}).distance;
    if (d > best) {
      best = d;
      best_i = i;
    }
  }
  if (best > eps) {
    keep[best_i] = true;
    douglas_peucker(loop, a, best_i, eps, keep);
    douglas_peucker(loop, best_i, b, eps, keep);
  }
}

// Outward bulge of a smooth curve beyond each chord, estimated as the
// sagitta of the circle implied by the smaller turning angle at the chord's
// two ends (a straight run next to a bend keeps a small estimate).
std::vector<double> chord_bulges(std::span<const Point2> loop) {
  const std::size_t n = loop.size();
  std::vector<double> turn(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2 in = loop[i] - loop[(i + n - 1) % n];
    const Vec2 out = loop[(i + 1) % n] - loop[i];
    turn[i] = std::abs(std::atan2(cross(in, out), dot(in, out)));
  }
  std::vector<double> bulge(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double alpha = std::min({turn[i], turn[(i + 1) % n], kPi / 2});
    bulge[i] = 0.5 * distance(loop[i], loop[(i + 1) % n]) * std::tan(alpha / 4);
  }
  return bulge;
}

std::optional<Polygon> offset_simplified(std::span<const Point2> loop, const std::vector<bool>& keep,
                                         const std::vector<double>& bulge) {
  const std::size_t n = loop.size();
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < n; ++i) {
    if (keep[i]) idx.push_back(i);
  }
  const std::size_t m = idx.size();
  if (m < 3) return std::nullopt;

  std::vector<Vec2> dir(m), normal(m);
  std::vector<double> shift(m);
  for (std::size_t j = 0; j < m; ++j) {
    const std::size_t a = idx[j];
    const std::size_t b = idx[(j + 1) % m];
    dir[j] = normalized(loop[b] - loop[a]);
    normal[j] = {dir[j].y, -dir[j].x};  // right of travel = outside for CCW
    double e = 0.0;
    double bulge_max = 0.0;
    for (std::size_t i = a; i != b; i = (i + 1) % n) {
      e = std::max(e, dot(loop[i] - loop[a], normal[j]));
      bulge_max = std::max(bulge_max, bulge[i]);
    }
    shift[j] = e + bulge_max;
  }

  Polygon out;
  for (std::size_t j = 0; j < m; ++j) {
    const std::size_t pj = (j + m - 1) % m;
    const Point2 v = loop[idx[j]];
    const double c = dot(dir[pj], dir[j]);
    const double s = cross(dir[pj], dir[j]);
    if (c < std::cos(5 * kPi / 6) || std::abs(s) < 1e-9) {
      // Square caps at hairpins and straight continuations.
      out.push_back(v + normal[pj] * shift[pj] + dir[pj] * shift[pj]);
      out.push_back(v + normal[j] * shift[j] - dir[j] * shift[j]);
      continue;
    }
    // Intersect the two offset lines n . x = n . v + shift.
    const Point2 p0 = v + normal[pj] * shift[pj];
    const Point2 p1 = v + normal[j] * shift[j];
    const double t = cross(p1 - p0, dir[j]) / cross(dir[pj], dir[j]);
    out.push_back(p0 + dir[pj] * t);
  }
  return dedupe_loop(std::move(out));
}

}  // namespace

double signed_area(std::span<const Point2> poly) {
  double a = 0.0;
  for (std::size_t i = 0; i < poly.size(); ++i) a += cross(poly[i], poly[(i + 1) % poly.size()]);
  return 0.5 * a;
}

bool is_simple(std::span<const Point2> poly) {
  const std::size_t n = poly.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Point2& a = poly[i];
    const Point2& b = poly[(i + 1) % n];
    for (std::size_t j = i + 1; j < n; ++j) {
      const Point2& c = poly[j];
      const Point2& d = poly[(j + 1) % n];
      const bool adjacent = j == i + 1 || (i == 0 && j == n - 1);
      if (adjacent) {
        // Neighbors share a vertex; they only conflict when folding back.
        const Point2& shared = j == i + 1 ? b : a;
        const Point2& p = j == i + 1 ? a : b;
        const Point2& q = j == i + 1 ? d : c;
        if (orient(p, shared, q) == 0 && dot(p - shared, q - shared) > 0) return false;
        continue;
      }
      if (segments_touch(a, b, c, d)) return false;
    }
  }
  return true;
}

bool point_in_polygon(const Point2& p, std::span<const Point2> poly) {
  bool inside = false;
  for (std::size_t i = 0, j = poly.size() - 1; i < poly.size(); j = i++) {
    const Point2& a = poly[i];
    const Point2& b = poly[j];
    if (orient(a, b, p) == 0 && on_segment(p, a, b)) return true;
    if ((a.y > p.y) != (b.y > p.y) && p.x < (b.x - a.x) * (p.y - a.y) / (b.y - a.y) + a.x) {
      inside = !inside;
    }
  }
  return inside;
}

Polygon polygonize(const InputContour& contour, double tol) {
  std::vector<Point2> loop = dedupe_loop(contour.points);
  if (loop.size() < 3) throw DegenerateError("polygonize: fewer than 3 distinct points");
  if (!is_simple(loop)) throw SelfIntersectionError("polygonize: contour self-intersects");
  const double area = signed_area(loop);
  const double diag = bbox_diagonal(loop);
  if (std::abs(area) <= 1e-12 * diag * diag) throw DegenerateError("polygonize: zero area");
  if (area < 0) std::reverse(loop.begin(), loop.end());
  if (contour.kind == ContourKind::kPolygon) return loop;
  if (!(tol > 0)) throw GeometryError("polygonize: tolerance must be positive");

  const std::size_t n = loop.size();
  const auto bulge = chord_bulges(loop);
  // Probe points the output must contain: the samples and the bulge estimate
  // at every chord midpoint.
  std::vector<Point2> probes = loop;
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2 d = normalized(loop[(i + 1) % n] - loop[i]);
    probes.push_back((loop[i] + loop[(i + 1) % n]) * 0.5 + Vec2{d.y, -d.x} * bulge[i]);
  }

  std::size_t far = 0;
  for (std::size_t i = 1; i < n; ++i) {
    if (distance(loop[i], loop[0]) > distance(loop[far], loop[0])) far = i;
  }
  for (double eps = tol / 2; eps > 1e-12 * diag; eps /= 2) {
    std::vector<bool> keep(n, false);
    keep[0] = keep[far] = true;
    douglas_peucker(loop, 0, far, eps, keep);
    douglas_peucker(loop, far, n, eps, keep);
    const auto poly = offset_simplified(loop, keep, bulge);
    if (!poly || poly->size() < 3 || !is_simple(*poly) || signed_area(*poly) <= 0) continue;
    const bool contains = std::all_of(probes.begin(), probes.end(), [&](const Point2& p) {
      return point_in_polygon(p, *poly) || polyline_distance(p, *poly) <= 1e-9 * diag;
    });
    if (!contains) continue;
    double hausdorff = 0.0;
    for (const auto& p : loop) hausdorff = std::max(hausdorff, polyline_distance(p, *poly));
    for (const auto& v : *poly) hausdorff = std::max(hausdorff, polyline_distance(v, loop));
    if (hausdorff <= tol) return *poly;
  }
  throw GeometryError(fmt::format("polygonize: cannot meet tolerance {}", tol));
}

BoundarySamples sample_boundary(const Polygon& polygon, double h) {
  if (!(h > 0)) throw GeometryError("sample_boundary: h must be positive");
  BoundarySamples out;
  out.polygon = polygon;
  out.h = h;
  const std::size_t n = polygon.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Point2& a = polygon[i];
    const Point2& b = polygon[(i + 1) % n];
    const int k = std::max(1, static_cast<int>(std::ceil(distance(a, b) / h - 1e-9)));
    for (int s = 0; s < k; ++s) out.points.push_back(a + (b - a) * (static_cast<double>(s) / k));
  }
  return out;
}

TriangleMesh constrained_delaunay(const BoundarySamples& samples) {
  const auto& pts = samples.points;
  const int n = static_cast<int>(pts.size());
  if (n < 3) throw DegenerateError("triangulation needs at least 3 samples");
  const double diag = bbox_diagonal(pts);
  if (signed_area(pts) <= 1e-12 * diag * diag) throw DegenerateError("samples are collinear");
  const double area_eps = 1e-14 * diag * diag;

  // Ear clipping: the sample loop is the constraint set, so any interior
  // triangulation already honors it.
  std::vector<std::array<int, 3>> tris;
  std::vector<int> prev(n), next(n);
  for (int i = 0; i < n; ++i) {
    prev[i] = (i + n - 1) % n;
    next[i] = (i + 1) % n;
  }
  auto is_ear = [&](int i, bool allow_on_boundary) {
    const int a = prev[i];
    const int c = next[i];
    const Point2& pa = pts[a];
    const Point2& pb = pts[i];
    const Point2& pc = pts[c];
    if (orient(pa, pb, pc) <= area_eps) return false;
    for (int v = next[c]; v != a; v = next[v]) {
      const Point2& p = pts[v];
      const double o1 = orient(pa, pb, p);
      const double o2 = orient(pb, pc, p);
      const double o3 = orient(pc, pa, p);
      if (allow_on_boundary) {
        if (o1 > area_eps && o2 > area_eps && o3 > area_eps) return false;
      } else if (o1 >= -area_eps && o2 >= -area_eps && o3 >= -area_eps) {
        return false;
      }
    }
    return true;
  };
  int remaining = n;
  int cur = 0;
  int misses = 0;
  bool relaxed = false;
  while (remaining > 3) {
    if (is_ear(cur, relaxed)) {
      tris.push_back({prev[cur], cur, next[cur]});
      next[prev[cur]] = next[cur];
      prev[next[cur]] = prev[cur];
      --remaining;
      cur = prev[cur];
      misses = 0;
      continue;
    }
    cur = next[cur];
    if (++misses > remaining) {
      if (relaxed) throw GeometryError("triangulation: no ear found");
      relaxed = true;
      misses = 0;
    }
  }
  tris.push_back({prev[cur], cur, next[cur]});

  // Lawson flips towards the Delaunay triangulation.
  auto key = [n](int a, int b) { return static_cast<std::int64_t>(a) * n + b; };
  std::unordered_map<std::int64_t, int> owner;
  for (int t = 0; t < static_cast<int>(tris.size()); ++t) {
    for (int k = 0; k < 3; ++k) owner[key(tris[t][k], tris[t][(k + 1) % 3])] = t;
  }
  auto third = [](const std::array<int, 3>& t, int a, int b) {
    for (int v : t) {
      if (v != a && v != b) return v;
    }
    return -1;
  };
  auto incircle = [&](const Point2& a, const Point2& b, const Point2& c, const Point2& d) {
    const double adx = a.x - d.x, ady = a.y - d.y;
    const double bdx = b.x - d.x, bdy = b.y - d.y;
    const double cdx = c.x - d.x, cdy = c.y - d.y;
    return (adx * adx + ady * ady) * (bdx * cdy - cdx * bdy) +
           (bdx * bdx + bdy * bdy) * (cdx * ady - adx * cdy) +
           (cdx * cdx + cdy * cdy) * (adx * bdy - bdx * ady);
  };
  const double incircle_eps = 1e-12 * std::pow(diag, 4);
  std::vector<std::pair<int, int>> stack;
  for (const auto& t : tris) {
    for (int k = 0; k < 3; ++k) stack.emplace_back(t[k], t[(k + 1) % 3]);
  }
  long guard = 0;
  while (!stack.empty()) {
    if (++guard > 50'000'000) throw GeometryError("triangulation: flip loop did not terminate");
    const auto [a, b] = stack.back();
    stack.pop_back();
    const auto i1 = owner.find(key(a, b));
    const auto i2 = owner.find(key(b, a));
    if (i1 == owner.end() || i2 == owner.end()) continue;
    const int t1 = i1->second;
    const int t2 = i2->second;
    const int c = third(tris[t1], a, b);
    const int d = third(tris[t2], a, b);
    if (incircle(pts[a], pts[b], pts[c], pts[d]) <= incircle_eps) continue;
    if (orient(pts[c], pts[a], pts[d]) <= area_eps || orient(pts[d], pts[b], pts[c]) <= area_eps) continue;
    owner.erase(key(a, b));
    owner.erase(key(b, a));
    tris[t1] = {c, a, d};
    tris[t2] = {d, b, c};
    owner[key(c, a)] = t1;
    owner[key(a, d)] = t1;
    owner[key(d, c)] = t1;
    owner[key(d, b)] = t2;
    owner[key(b, c)] = t2;
    owner[key(c, d)] = t2;
    stack.emplace_back(a, d);
    stack.emplace_back(d, b);
    stack.emplace_back(b, c);
    stack.emplace_back(c, a);
  }

  TriangleMesh mesh;
  mesh.triangles = std::move(tris);
  const std::size_t m = mesh.triangles.size();
  mesh.neighbor.resize(m);
  mesh.external.resize(m);
  mesh.classes.resize(m);
  for (std::size_t t = 0; t < m; ++t) {
    int ext = 0;
    for (int k = 0; k < 3; ++k) {
      const int a = mesh.triangles[t][k];
      const int b = mesh.triangles[t][(k + 1) % 3];
      const auto it = owner.find(key(b, a));
      mesh.neighbor[t][k] = it == owner.end() ? -1 : it->second;
      mesh.external[t][k] = b == (a + 1) % n;
      ext += mesh.external[t][k];
    }
    mesh.classes[t] = ext >= 2 ? TriangleClass::kT : ext == 1 ? TriangleClass::kS : TriangleClass::kJ;
  }
  return mesh;
}

std::vector<int> MedialGraph::neighbors(int i) const {
  std::vector<int> out;
  for (const auto& [a, b] : edges) {
    if (a == i) out.push_back(b);
    if (b == i) out.push_back(a);
  }
  std::sort(out.begin(), out.end());
  return out;
}

MedialGraph build_medial_graph(const TriangleMesh& mesh, const BoundarySamples& samples) {
  const auto& pts = samples.points;
  MedialGraph g;
  const int m = static_cast<int>(mesh.triangles.size());
  auto corners = [&](int t) {
    return std::array<Point2, 3>{pts[mesh.triangles[t][0]], pts[mesh.triangles[t][1]],
                                 pts[mesh.triangles[t][2]]};
  };
  if (m == 1) {
    const auto c = corners(0);
    g.circles.push_back({min_enclosing_circle(c), TriangleClass::kT});
    return g;
  }

  std::vector<Circle> cc(m);
  for (int t = 0; t < m; ++t) {
    if (mesh.classes[t] == TriangleClass::kS) continue;
    const auto c = corners(t);
    cc[t] = circumcircle(c[0], c[1], c[2]);
  }

  // Adjacent J triangles on one circle describe a single junction.
  std::vector<int> root(m);
  std::iota(root.begin(), root.end(), 0);
  auto find = [&](int x) {
    while (root[x] != x) x = root[x] = root[root[x]];
    return x;
  };
  const double same_tol = 1e-7 * bbox_diagonal(pts);
  for (int t = 0; t < m; ++t) {
    if (mesh.classes[t] != TriangleClass::kJ) continue;
    for (int k = 0; k < 3; ++k) {
      const int u = mesh.neighbor[t][k];
      if (u < 0 || mesh.classes[u] != TriangleClass::kJ) continue;
      if (distance(cc[t].center, cc[u].center) <= same_tol &&
          std::abs(cc[t].radius - cc[u].radius) <= same_tol) {
        const int a = find(t);
        const int b = find(u);
        if (a != b) root[std::max(a, b)] = std::min(a, b);
      }
    }
  }

  std::vector<int> circle_of(m, -1);
  for (int t = 0; t < m; ++t) {
    if (mesh.classes[t] == TriangleClass::kS) continue;
    const int r = find(t);
    if (circle_of[r] < 0) {
      circle_of[r] = static_cast<int>(g.circles.size());
      g.circles.push_back({cc[r], mesh.classes[t]});
    }
    circle_of[t] = circle_of[r];
  }

  std::set<std::pair<int, int>> edges;
  for (int t = 0; t < m; ++t) {
    if (circle_of[t] < 0) continue;
    for (int k = 0; k < 3; ++k) {
      int from = t;
      int cur = mesh.neighbor[t][k];
      while (cur >= 0 && mesh.classes[cur] == TriangleClass::kS) {
        int step = -1;
        for (int q = 0; q < 3; ++q) {
          const int nb = mesh.neighbor[cur][q];
          if (nb >= 0 && nb != from) step = nb;
        }
        from = cur;
        cur = step;
      }
      if (cur < 0) continue;
      const int a = circle_of[t];
      const int b = circle_of[cur];
      if (a != b) edges.insert({std::min(a, b), std::max(a, b)});
    }
  }
  g.edges.assign(edges.begin(), edges.end());
  return g;
}

double filter_ratio(const Circle& a, const Circle& b) {
  return (distance(a.center, b.center) + std::min(a.radius, b.radius)) / (a.radius + b.radius);
}

MedialGraph filter_circles(const MedialGraph& g, double phi) {
  if (!(phi > 0)) throw GeometryError("filter threshold must be positive");
  const int n = static_cast<int>(g.circles.size());
  std::vector<std::set<int>> adj(n);
  for (const auto& [a, b] : g.edges) {
    adj[a].insert(b);
    adj[b].insert(a);
  }
  std::vector<bool> alive(n, true);
  for (;;) {
    double best = phi;
    int bi = -1, bj = -1;
    for (int i = 0; i < n; ++i) {
      if (!alive[i]) continue;
      for (int j : adj[i]) {
        if (j <= i) continue;
        const double gamma = filter_ratio(g.circles[i].circle, g.circles[j].circle);
        if (gamma < best) {
          best = gamma;
          bi = i;
          bj = j;
        }
      }
    }
    if (bi < 0) break;
    const auto& ci = g.circles[bi];
    const auto& cj = g.circles[bj];
    int victim;
    if (ci.source != cj.source) {
      victim = ci.source == TriangleClass::kT ? bi : bj;
    } else if (ci.circle.radius != cj.circle.radius) {
      victim = ci.circle.radius < cj.circle.radius ? bi : bj;
    } else {
      victim = bj;
    }
    const int survivor = victim == bi ? bj : bi;
    for (int nb : adj[victim]) {
      adj[nb].erase(victim);
      if (nb == survivor) continue;
      adj[nb].insert(survivor);
      adj[survivor].insert(nb);
    }
    adj[victim].clear();
    alive[victim] = false;
  }

  MedialGraph out;
  std::vector<int> remap(n, -1);
  for (int i = 0; i < n; ++i) {
    if (!alive[i]) continue;
    remap[i] = static_cast<int>(out.circles.size());
    out.circles.push_back(g.circles[i]);
  }
  std::set<std::pair<int, int>> edges;
  for (int i = 0; i < n; ++i) {
    for (int j : adj[i]) {
      if (alive[i] && alive[j] && i < j) edges.insert({remap[i], remap[j]});
    }
  }
  out.edges.assign(edges.begin(), edges.end());
  return out;
}

namespace {

// The circle pairs behind the tuples: every edge, then each isolated circle
// paired with itself.
std::vector<std::pair<int, int>> tuple_pairs(const MedialGraph& g) {
  std::vector<std::pair<int, int>> pairs = g.edges;
  std::vector<bool> used(g.circles.size(), false);
  for (const auto& [a, b] : g.edges) used[a] = used[b] = true;
  for (std::size_t i = 0; i < g.circles.size(); ++i) {
    if (!used[i]) pairs.emplace_back(static_cast<int>(i), static_cast<int>(i));
  }
  return pairs;
}

}  // namespace

std::vector<TupleShape> interpolate_tuples(const MedialGraph& g) {
  std::vector<TupleShape> out;
  for (const auto& [a, b] : tuple_pairs(g)) {
    out.push_back(make_tuple(g.circles[a].circle, g.circles[b].circle));
  }
  return out;
}

double CTMATShape::bounding_radius() const {
  double r = 0.0;
  for (const auto& t : tuples) {
    r = std::max(r, norm(t.big.center) + t.big.radius);
    r = std::max(r, norm(t.small.center) + t.small.radius);
  }
  return r;
}

bool segment_in_union(const Segment& s, std::span<const TupleShape> tuples, double piece_len) {
  for (const auto& t : tuples) {
    if (point_in_tuple(s.a, t) && point_in_tuple(s.b, t)) return true;
  }
  const int k = std::max(1, static_cast<int>(std::ceil(s.length() / piece_len)));
  Point2 p0 = s.a;
  for (int i = 1; i <= k; ++i) {
    const Point2 p1 = i == k ? s.b : s.a + (s.b - s.a) * (static_cast<double>(i) / k);
    const bool ok = std::any_of(tuples.begin(), tuples.end(), [&](const TupleShape& t) {
      return point_in_tuple(p0, t) && point_in_tuple(p1, t);
    });
    if (!ok) return false;
    p0 = p1;
  }
  return true;
}

Point2 union_centroid(std::span<const TupleShape> tuples) {
  double x0 = kInf, y0 = kInf, x1 = -kInf, y1 = -kInf;
  for (const auto& t : tuples) {
    for (const Circle& c : {t.big, t.small}) {
      x0 = std::min(x0, c.center.x - c.radius);
      y0 = std::min(y0, c.center.y - c.radius);
      x1 = std::max(x1, c.center.x + c.radius);
      y1 = std::max(y1, c.center.y + c.radius);
    }
  }
  constexpr int kGrid = 256;
  double sx = 0.0, sy = 0.0;
  long count = 0;
  for (int i = 0; i < kGrid; ++i) {
    for (int j = 0; j < kGrid; ++j) {
      const Point2 p{x0 + (x1 - x0) * (i + 0.5) / kGrid, y0 + (y1 - y0) * (j + 0.5) / kGrid};
      if (point_in_union(p, tuples)) {
        sx += p.x;
        sy += p.y;
        ++count;
      }
    }
  }
  if (count == 0) return {(x0 + x1) / 2, (y0 + y1) / 2};
  return {sx / count, sy / count};
}

namespace {

// Greedy per-circle coverage repair. Segments already inside the circle's
// incident tuples (G_in) must stay covered; uncovered segments attributed to
// those tuples (G_out) are covered as far as any web node allows, so a hub
// circle never blocks on a gap that only a neighbor can reach. A second pass
// with doubled caps picks up what the first one left.
class CoverSearch {
 public:
  CoverSearch(const MedialGraph& g, const BoundarySamples& samples, const BuildParams& params)
      : circles_(g.circles),
        pairs_(tuple_pairs(g)),
        samples_(samples),
        params_(params),
        piece_(samples.h / 8),
        eps_(1e-9 * std::max(1.0, bbox_diagonal(samples.points))) {
    for (const auto& [a, b] : pairs_) tuples_.push_back(make_tuple(circles_[a].circle, circles_[b].circle));
  }

  void run() {
    std::vector<int> order(circles_.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
      return circles_[a].circle.radius > circles_[b].circle.radius;
    });
    std::vector<Circle> originals;
    for (const auto& c : circles_) originals.push_back(c.circle);
    // Uncovered segments go to their nearest circle first; only if that
    // leaves gaps are they attributed to the whole incident tuple set.
    for (bool local : {true, false}) {
      local_ = local;
      for (double mult : {1.0, 2.0}) {
        for (int m : order) process(m, originals[m], mult);
        if (uncovered().empty()) return;
      }
    }
    const auto bad = uncovered();
    throw CoverageFailure(
        fmt::format("no cover within doubled search caps: {} segments uncovered", bad.size()), bad);
  }

  const std::vector<TupleShape>& tuples() const { return tuples_; }
  MedialGraph graph(const MedialGraph& original) const {
    MedialGraph g = original;
    g.circles = circles_;
    return g;
  }

 private:
  std::vector<Segment> uncovered() const {
    std::vector<Segment> bad;
    for (std::size_t i = 0; i < samples_.size(); ++i) {
      if (!segment_in_union(samples_.segment(i), tuples_, piece_)) bad.push_back(samples_.segment(i));
    }
    return bad;
  }

  void process(int m, const Circle& orig, double mult) {
    incident_.clear();
    std::vector<TupleShape> others;
    for (std::size_t k = 0; k < pairs_.size(); ++k) {
      if (pairs_[k].first == m || pairs_[k].second == m) {
        incident_.push_back(k);
      } else {
        others.push_back(tuples_[k]);
      }
    }
    std::vector<TupleShape> u;
    for (std::size_t k : incident_) u.push_back(tuples_[k]);

    g_in_.clear();
    g_out_.clear();
    g_shared_.clear();
    for (std::size_t i = 0; i < samples_.size(); ++i) {
      const Segment s = samples_.segment(i);
      if (segment_in_union(s, u, piece_)) {
        g_in_.push_back(s);
        continue;
      }
      if (segment_in_union(s, others, piece_)) continue;
      if (segment_in_union(s, tuples_, piece_)) {
        // Covered only jointly by U and the rest; must stay covered.
        g_shared_.push_back(s);
        continue;
      }
      const bool touches = point_in_union(s.a, u) || point_in_union(s.b, u);
      if (!touches && segment_outline_distance(s, u) > segment_outline_distance(s, others)) continue;
      if (local_ && !nearest_circle(m, s)) continue;
      g_out_.push_back(s);
    }
    others_ = std::move(others);
    if (g_out_.empty()) return;  // current configuration is optimal

    const Circle current = circles_[m].circle;
    if (const auto best = search(m, orig, current, mult)) {
      circles_[m].circle = *best;
      for (std::size_t k : incident_) {
        tuples_[k] = make_tuple(circles_[pairs_[k].first].circle, circles_[pairs_[k].second].circle);
      }
    }
  }

  // m's disc is at least as close to the segment (farther endpoint) as the
  // other circle of every incident tuple.
  bool nearest_circle(int m, const Segment& s) const {
    auto gap = [&](int k) {
      const Circle& c = circles_[k].circle;
      return std::max(distance(s.a, c.center), distance(s.b, c.center)) - c.radius;
    };
    const double own = gap(m);
    for (std::size_t k : incident_) {
      const auto [a, b] = pairs_[k];
      const int other = a == m ? b : a;
      if (other != m && gap(other) < own) return false;
    }
    return true;
  }

  std::optional<std::vector<TupleShape>> candidate(int m, const Circle& c) const {
    std::vector<TupleShape> u;
    try {
      for (std::size_t k : incident_) {
        const auto [a, b] = pairs_[k];
        u.push_back(make_tuple(a == m ? c : circles_[a].circle, b == m ? c : circles_[b].circle));
      }
    } catch (const ContainmentError&) {
      return std::nullopt;
    }
    return u;
  }

  // Number of G_out segments covered, or -1 when a hard constraint breaks.
  int evaluate(int m, const Circle& c) {
    const auto u = candidate(m, c);
    if (!u) return -1;
    auto covered = [&](const Segment& s) { return segment_in_union(s, *u, piece_); };
    // The segment that broke the last candidate usually breaks this one too.
    if (last_fail_ && !covered(*last_fail_)) return -1;
    for (const auto& s : g_in_) {
      if (!covered(s)) {
        last_fail_ = s;
        return -1;
      }
    }
    if (!g_shared_.empty()) {
      std::vector<TupleShape> all = *u;
      all.insert(all.end(), others_.begin(), others_.end());
      for (const auto& s : g_shared_) {
        if (!segment_in_union(s, all, piece_)) return -1;
      }
    }
    return static_cast<int>(std::count_if(g_out_.begin(), g_out_.end(), covered));
  }

  // Best web node: most G_out segments covered, then least E. Returns nothing
  // when no node beats the current configuration.
  std::optional<Circle> search(int m, const Circle& orig, const Circle& current, double mult) {
    const double r_o = orig.radius;
    const double step = params_.ring_step * r_o * mult;
    const double center_cap = params_.center_cap * r_o * mult;
    const double radius_cap = params_.radius_cap * r_o * mult;
    std::vector<Point2> nodes{orig.center};
    for (int ring = 1; ring <= params_.rings; ++ring) {
      if (ring * step > center_cap + 1e-12) break;
      for (int ray = 0; ray < params_.rays; ++ray) {
        nodes.push_back(orig.center + unit(kTwoPi * ray / params_.rays) * (ring * step));
      }
    }
    auto energy = [&](const Circle& c) {
      const double over = std::max(c.radius - r_o, 0.0);
      return norm_sq(c.center - orig.center) + over * over;
    };
    last_fail_.reset();
    int best_count = evaluate(m, current);
    double best_e = energy(current);
    std::optional<Circle> best;
    for (const auto& c : nodes) {
      double lo = 0.0;
      double hi = radius_cap;
      for (std::size_t k : incident_) {
        const auto [a, b] = pairs_[k];
        if (a == b) continue;
        const Circle& other = circles_[a == m ? b : a].circle;
        const double d = distance(c, other.center);
        lo = std::max(lo, other.radius - d);
        hi = std::min(hi, other.radius + d);
      }
      lo += 4 * eps_;
      hi -= 4 * eps_;
      if (lo >= hi) continue;
      const double d2 = norm_sq(c - orig.center);
      const int top = evaluate(m, {c, hi});
      if (top < best_count || (top == best_count && d2 >= best_e)) continue;
      // Coverage grows with r, so bisect for the smallest r reaching `top`.
      double r = hi;
      if (evaluate(m, {c, lo}) >= top) {
        r = lo;
      } else {
        double a = lo;
        while (r - a > 1e-7 * r_o) {
          const double mid = 0.5 * (a + r);
          (evaluate(m, {c, mid}) >= top ? r : a) = mid;
        }
      }
      const double e = energy({c, r});
      if (top > best_count || e < best_e) {
        best_count = top;
        best_e = e;
        best = Circle{c, r};
      }
    }
    return best;
  }

  std::vector<MedialCircle> circles_;
  std::vector<std::pair<int, int>> pairs_;
  const BoundarySamples& samples_;
  BuildParams params_;
  double piece_;
  double eps_;
  std::vector<TupleShape> tuples_;

  std::vector<std::size_t> incident_;
  std::vector<TupleShape> others_;
  std::vector<Segment> g_in_, g_out_, g_shared_;
  std::optional<Segment> last_fail_;
  bool local_ = true;
};

}  // namespace

CTMATShape modify_cover(const MedialGraph& g, const BoundarySamples& samples,
                        const BuildParams& params) {
  if (g.circles.empty()) throw GeometryError("modify_cover: empty medial graph");
  CoverSearch search(g, samples, params);
  search.run();
  CTMATShape shape;
  shape.tuples = search.tuples();
  shape.graph = search.graph(g);
  shape.polygon = samples.polygon;
  shape.h = samples.h;
  shape.reference = union_centroid(shape.tuples);
  const CoverReport report = verify_cover(shape, samples.polygon);
  if (!report.ok) {
    throw CoverageFailure(
        fmt::format("cover check failed on {} segments", report.violations.size()),
        report.violations);
  }
  return shape;
}

CoverReport verify_cover(const CTMATShape& shape, const Polygon& polygon) {
  const BoundarySamples fine = sample_boundary(polygon, shape.h / 4);
  CoverReport report;
  std::vector<bool> in(fine.size());
  for (std::size_t i = 0; i < fine.size(); ++i) in[i] = point_in_union(fine.points[i], shape.tuples);
  for (std::size_t i = 0; i < fine.size(); ++i) {
    if (!in[i] || !in[(i + 1) % fine.size()]) {
      report.ok = false;
      report.violations.push_back(fine.segment(i));
    }
  }
  return report;
}

CTMATShape rebase(const CTMATShape& shape, const Point2& origin) {
  CTMATShape out = shape;
  for (auto& t : out.tuples) t = t.translated(-origin);
  for (auto& c : out.graph.circles) c.circle.center -= origin;
  for (auto& p : out.polygon) p -= origin;
  out.reference = origin;
  return out;
}

CTMATShape build_ctmat(const InputContour& contour, const BuildParams& params) {
  const double diag = bbox_diagonal(contour.points);
  const double tol = params.curve_tol > 0 ? params.curve_tol : 0.01 * diag;
  const Polygon polygon = polygonize(contour, tol);
  const double h = params.h > 0 ? params.h : 0.05 * bbox_diagonal(polygon);
  const BoundarySamples samples = sample_boundary(polygon, h);
  const TriangleMesh mesh = constrained_delaunay(samples);
  const MedialGraph graph = filter_circles(build_medial_graph(mesh, samples), params.phi);
  CTMATShape shape = modify_cover(graph, samples, params);
  return rebase(shape, shape.reference);
}

}  // namespace matnav
