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

#include "matnav/io.h"

#include <algorithm>
#include <fstream>
#include <limits>
#include <sstream>

#include <fmt/format.h>

#include "matnav/shapes.h"

namespace matnav {

namespace {

std::uint64_t fnv1a(std::string_view bytes, std::uint64_t h = 1469598103934665603ULL) {
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::string hex(std::uint64_t v) { return fmt::format("{:016x}", v); }

// Checked view of one JSON object; every error names the path.
class Fields {
 public:
  Fields(const Json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j.is_object()) fail("expected an object");
  }

  [[noreturn]] void fail(const std::string& msg) const { throw SchemaError(fmt::format("{}: {}", path_, msg)); }
  std::string at(const std::string& key) const { return fmt::format("{}.{}", path_, key); }

  void only(std::initializer_list<std::string_view> keys) const {
    for (const auto& [k, v] : j_.items()) {
      if (std::find(keys.begin(), keys.end(), k) == keys.end()) fail(fmt::format("unknown key '{}'", k));
    }
  }
  bool has(const std::string& key) const { return j_.contains(key); }
  const Json& raw(const std::string& key) const {
    if (!has(key)) fail(fmt::format("missing key '{}'", key));
    return j_.at(key);
  }

  double number(const std::string& key) const {
    const Json& v = raw(key);
    if (!v.is_number()) throw SchemaError(fmt::format("{}: expected a number", at(key)));
    return v.get<double>();
  }
  double number(const std::string& key, double fallback) const { return has(key) ? number(key) : fallback; }
  double positive(const std::string& key, double fallback) const {
    const double v = number(key, fallback);
    if (!(v > 0)) throw SchemaError(fmt::format("{}: must be positive", at(key)));
    return v;
  }
  int integer(const std::string& key, int fallback) const {
    if (!has(key)) return fallback;
    const Json& v = j_.at(key);
    if (!v.is_number_integer()) throw SchemaError(fmt::format("{}: expected an integer", at(key)));
    return v.get<int>();
  }
  std::uint64_t unsigned_integer(const std::string& key, std::uint64_t fallback) const {
    if (!has(key)) return fallback;
    const Json& v = j_.at(key);
    if (!v.is_number_unsigned()) throw SchemaError(fmt::format("{}: expected a non-negative integer", at(key)));
    return v.get<std::uint64_t>();
  }
  bool boolean(const std::string& key, bool fallback) const {
    if (!has(key)) return fallback;
    const Json& v = j_.at(key);
    if (!v.is_boolean()) throw SchemaError(fmt::format("{}: expected true or false", at(key)));
    return v.get<bool>();
  }
  std::string string(const std::string& key) const {
    const Json& v = raw(key);
    if (!v.is_string()) throw SchemaError(fmt::format("{}: expected a string", at(key)));
    return v.get<std::string>();
  }

 private:
  const Json& j_;
  std::string path_;
};

Point2 point(const Json& v, const std::string& path) {
  if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) {
    throw SchemaError(fmt::format("{}: expected [x, y]", path));
  }
  return {v[0].get<double>(), v[1].get<double>()};
}

std::vector<Point2> points(const Json& v, const std::string& path) {
  if (!v.is_array() || v.size() < 3) throw SchemaError(fmt::format("{}: expected at least 3 points", path));
  std::vector<Point2> out;
  for (std::size_t k = 0; k < v.size(); ++k) out.push_back(point(v[k], fmt::format("{}[{}]", path, k)));
  return out;
}

struct Builtin {
  const char* name;
  std::size_t max_args;
  double defaults[2];
  InputContour (*make)(double, double);
};

constexpr Builtin kBuiltins[] = {
    {"rectangle", 2, {4.0, 2.0}, [](double l, double w) { return shapes::rectangle(l, w); }},
    {"capsule", 2, {4.0, 2.0}, [](double l, double w) { return shapes::capsule(l, w); }},
    {"l_shape", 2, {2.0, 0.8}, [](double s, double t) { return shapes::l_shape(s, t); }},
    {"plus_sign", 2, {1.0, 0.5}, [](double a, double w) { return shapes::plus_sign(a, w); }},
    {"triangle", 1, {1.0, 0.0}, [](double s, double) { return shapes::triangle(s); }},
    {"car", 2, {4.5, 1.8}, [](double l, double w) { return shapes::car(l, w); }},
    {"circle", 1, {1.0, 0.0}, [](double r, double) { return shapes::circle(r); }},
};

InputContour builtin(const std::string& name, const std::vector<double>& args, const std::string& path) {
  for (const auto& b : kBuiltins) {
    if (name != b.name) continue;
    if (args.size() > b.max_args) {
      throw SchemaError(fmt::format("{}: '{}' takes at most {} arguments", path, name, b.max_args));
    }
    for (double a : args) {
      if (!(a > 0)) throw SchemaError(fmt::format("{}: arguments of '{}' must be positive", path, name));
    }
    return b.make(args.size() > 0 ? args[0] : b.defaults[0], args.size() > 1 ? args[1] : b.defaults[1]);
  }
  throw SchemaError(fmt::format("{}: unknown built-in shape '{}'", path, name));
}

ShapeSource parse_shape(const std::string& name, const Json& spec) {
  const std::string path = fmt::format("shapes.{}", name);
  ShapeSource s;
  s.name = name;
  s.spec = spec;
  s.hash = fnv1a(spec.dump(), fnv1a(name + '\n'));
  if (spec.is_array()) {
    s.contour = {points(spec, path), ContourKind::kPolygon};
    return s;
  }
  const Fields f(spec, path);
  f.only({"builtin", "args", "points", "curve", "phi", "h", "curve_tol", "rays", "rings", "ring_step", "center_cap",
          "radius_cap"});
  if (f.has("builtin") == f.has("points")) f.fail("needs exactly one of 'builtin' or 'points'");
  if (f.has("builtin")) {
    std::vector<double> args;
    if (f.has("args")) {
      const Json& a = f.raw("args");
      if (!a.is_array()) throw SchemaError(fmt::format("{}: expected a list of numbers", f.at("args")));
      for (const auto& v : a) {
        if (!v.is_number()) throw SchemaError(fmt::format("{}: expected a list of numbers", f.at("args")));
        args.push_back(v.get<double>());
      }
    }
    s.contour = builtin(f.string("builtin"), args, path);
  } else {
    s.contour = {points(f.raw("points"), f.at("points")),
                 f.boolean("curve", false) ? ContourKind::kSampledCurve : ContourKind::kPolygon};
  }
  s.params.phi = f.positive("phi", s.params.phi);
  s.params.h = f.number("h", s.params.h);
  s.params.curve_tol = f.number("curve_tol", s.params.curve_tol);
  s.params.rays = f.integer("rays", s.params.rays);
  s.params.rings = f.integer("rings", s.params.rings);
  if (s.params.rays <= 0 || s.params.rings < 0) f.fail("rays must be positive and rings non-negative");
  s.params.ring_step = f.positive("ring_step", s.params.ring_step);
  s.params.center_cap = f.number("center_cap", s.params.center_cap);
  s.params.radius_cap = f.positive("radius_cap", s.params.radius_cap);
  return s;
}

WorldParams parse_world(const Json& j, int& max_steps, double& theta_e) {
  const Fields f(j, "world");
  f.only({"dt", "tau", "neighbor_dist", "max_neighbors", "omega_max", "clearance_margin", "goal_tolerance",
          "record_collisions", "parallel", "perturbation", "buffer", "seed", "max_steps", "theta_e"});
  WorldParams p;
  p.dt = f.positive("dt", p.dt);
  p.tau = f.positive("tau", p.tau);
  p.neighbor_dist = f.number("neighbor_dist", p.neighbor_dist);
  p.max_neighbors = f.integer("max_neighbors", p.max_neighbors);
  if (p.max_neighbors < 0) f.fail("max_neighbors must be non-negative");
  p.omega_max = f.positive("omega_max", p.omega_max);
  p.clearance_margin = f.number("clearance_margin", p.clearance_margin);
  p.goal_tolerance = f.positive("goal_tolerance", p.goal_tolerance);
  p.record_collisions = f.boolean("record_collisions", p.record_collisions);
  p.parallel = f.boolean("parallel", p.parallel);
  p.perturbation = f.number("perturbation", p.perturbation);
  p.buffer = f.number("buffer", p.buffer);
  p.seed = f.unsigned_integer("seed", p.seed);
  max_steps = f.integer("max_steps", max_steps);
  if (max_steps < 0) f.fail("max_steps must be non-negative");
  theta_e = f.positive("theta_e", theta_e);
  return p;
}

class ShapeNames {
 public:
  explicit ShapeNames(const std::vector<ShapeSource>& shapes) {
    for (std::size_t k = 0; k < shapes.size(); ++k) index_[shapes[k].name] = static_cast<int>(k);
  }
  int operator()(const Fields& f, const std::string& key) const { return resolve(f.string(key), f.at(key)); }
  int resolve(const std::string& name, const std::string& path) const {
    const auto it = index_.find(name);
    if (it == index_.end()) throw SchemaError(fmt::format("{}: unknown shape '{}'", path, name));
    return it->second;
  }

 private:
  std::map<std::string, int> index_;
};

AgentSpec parse_agent(const Json& j, const std::string& path, const ShapeNames& names) {
  const Fields f(j, path);
  f.only({"shape", "position", "goal", "orientation", "v_max", "static"});
  AgentSpec a;
  a.shape = names(f, "shape");
  a.position = point(f.raw("position"), f.at("position"));
  a.goal = f.has("goal") ? point(f.raw("goal"), f.at("goal")) : a.position;
  a.orientation = f.number("orientation", 0.0);
  a.is_static = f.boolean("static", false);
  a.v_max = a.is_static ? f.number("v_max", 0.0) : f.positive("v_max", a.v_max);
  return a;
}

GeneratorSpec parse_generator(const Json& j, const std::string& path, const ShapeNames& names) {
  const Fields f(j, path);
  const std::string type = f.string("type");
  if (type == "antipodal-circle") {
    f.only({"type", "n", "radius", "shapes", "v_max"});
    AntipodalCircle g;
    g.n = f.integer("n", g.n);
    if (g.n <= 0) f.fail("n must be positive");
    g.radius = f.positive("radius", g.radius);
    g.v_max = f.positive("v_max", g.v_max);
    const Json& list = f.raw("shapes");
    if (!list.is_array() || list.empty()) throw SchemaError(fmt::format("{}: expected shape names", f.at("shapes")));
    g.shapes.clear();
    for (std::size_t k = 0; k < list.size(); ++k) {
      const std::string at = fmt::format("{}.shapes[{}]", path, k);
      if (!list[k].is_string()) throw SchemaError(fmt::format("{}: expected a shape name", at));
      g.shapes.push_back(names.resolve(list[k].get<std::string>(), at));
    }
    return g;
  }
  if (type == "crossing-streams") {
    f.only({"type", "per_stream", "spacing", "distance", "shape", "v_max"});
    CrossingStreams g;
    g.per_stream = f.integer("per_stream", g.per_stream);
    if (g.per_stream <= 0) f.fail("per_stream must be positive");
    g.spacing = f.positive("spacing", g.spacing);
    g.distance = f.positive("distance", g.distance);
    g.shape = names(f, "shape");
    g.v_max = f.positive("v_max", g.v_max);
    return g;
  }
  if (type == "hallway") {
    f.only({"type", "per_side", "length", "width", "agent_shape", "wall_shape", "v_max"});
    Hallway g;
    g.per_side = f.integer("per_side", g.per_side);
    if (g.per_side <= 0) f.fail("per_side must be positive");
    g.length = f.positive("length", g.length);
    g.width = f.positive("width", g.width);
    g.agent_shape = names(f, "agent_shape");
    g.wall_shape = names(f, "wall_shape");
    g.v_max = f.positive("v_max", g.v_max);
    return g;
  }
  if (type == "narrow-door") {
    f.only({"type", "agents", "door_width", "wall_length", "agent_shape", "wall_shape", "v_max"});
    NarrowDoor g;
    g.agents = f.integer("agents", g.agents);
    if (g.agents <= 0) f.fail("agents must be positive");
    g.door_width = f.positive("door_width", g.door_width);
    g.wall_length = f.positive("wall_length", g.wall_length);
    g.agent_shape = names(f, "agent_shape");
    g.wall_shape = names(f, "wall_shape");
    g.v_max = f.positive("v_max", g.v_max);
    return g;
  }
  throw SchemaError(fmt::format("{}.type: unknown generator '{}'", path, type));
}

Json xy(const Point2& p) { return Json::array({p.x, p.y}); }
Json circle_json(const Circle& c) { return Json::array({c.center.x, c.center.y, c.radius}); }

Circle circle_from(const Json& j) {
  return {{j.at(0).get<double>(), j.at(1).get<double>()}, j.at(2).get<double>()};
}

const char* class_name(TriangleClass c) {
  switch (c) {
    case TriangleClass::kT: return "T";
    case TriangleClass::kS: return "S";
    case TriangleClass::kJ: return "J";
  }
  return "T";
}

TriangleClass class_from(const std::string& s) {
  if (s == "S") return TriangleClass::kS;
  if (s == "J") return TriangleClass::kJ;
  return TriangleClass::kT;
}

Json piece_list(const ArcHull& h) {
  Json out = Json::array();
  for (const auto& p : h.pieces()) out.push_back(Json::array({p.center.x, p.center.y, p.radius, p.begin, p.end}));
  return out;
}

ArcHull hull_from(const Json& j) {
  std::vector<HullPiece> pieces;
  for (const auto& p : j) {
    pieces.push_back({{p.at(0).get<double>(), p.at(1).get<double>()}, p.at(2).get<double>(),
                      p.at(3).get<double>(), p.at(4).get<double>()});
  }
  return ArcHull::from_pieces(std::move(pieces));
}

std::string num(double v) { return fmt::format("{:.4f}", v); }

// One SVG subpath; full circles are split in two because a single elliptical
// arc command cannot close on itself.
std::string svg_path(const Outline& o) {
  if (o.pieces.empty()) return {};
  std::string d = fmt::format("M {} {}", num(piece_start(o.pieces[0]).x), num(piece_start(o.pieces[0]).y));
  for (const auto& piece : o.pieces) {
    if (const auto* s = std::get_if<Segment>(&piece)) {
      d += fmt::format(" L {} {}", num(s->b.x), num(s->b.y));
      continue;
    }
    const Arc& a = std::get<Arc>(piece);
    const double r = a.circle.radius;
    const int sweep = a.ccw ? 1 : 0;
    if (a.span() > kPi + 1e-9) {
      const Point2 mid = a.point_at(0.5);
      d += fmt::format(" A {0} {0} 0 0 {1} {2} {3}", num(r), sweep, num(mid.x), num(mid.y));
    }
    const Point2 end = a.end_point();
    d += fmt::format(" A {0} {0} 0 0 {1} {2} {3}", num(r), sweep, num(end.x), num(end.y));
  }
  return d + " Z";
}

}  // namespace

// ---- scenario ------------------------------------------------------------------

ScenarioFile parse_scenario(const Json& doc) {
  const Fields top(doc, "scenario");
  top.only({"shapes", "world", "agents", "generators"});
  ScenarioFile file;
  const Json& shapes = top.raw("shapes");
  if (!shapes.is_object() || shapes.empty()) throw SchemaError("shapes: expected a non-empty object of named shapes");
  for (const auto& [name, spec] : shapes.items()) file.shapes.push_back(parse_shape(name, spec));
  if (top.has("world")) file.params = parse_world(top.raw("world"), file.max_steps, file.theta_e);
  const ShapeNames names(file.shapes);
  if (top.has("agents")) {
    const Json& list = top.raw("agents");
    if (!list.is_array()) throw SchemaError("agents: expected a list");
    for (std::size_t k = 0; k < list.size(); ++k) {
      file.agents.push_back(parse_agent(list[k], fmt::format("agents[{}]", k), names));
    }
  }
  if (top.has("generators")) {
    const Json& list = top.raw("generators");
    if (!list.is_array()) throw SchemaError("generators: expected a list");
    for (std::size_t k = 0; k < list.size(); ++k) {
      file.generators.push_back(parse_generator(list[k], fmt::format("generators[{}]", k), names));
    }
  }
  return file;
}

ScenarioFile parse_scenario_text(const std::string& text) {
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw SchemaError(fmt::format("not valid JSON: {}", e.what()));
  }
  return parse_scenario(doc);
}

ScenarioFile load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error(fmt::format("cannot read {}", path.string()));
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_scenario_text(ss.str());
}

ShapeLibrary build_library(const std::vector<ShapeSource>& sources, const ShapeCache* cache) {
  ShapeLibrary library;
  for (const auto& s : sources) {
    if (cache) {
      const auto it = cache->find(s.name);
      if (it != cache->end() && it->second.hash == s.hash) {
        library.push_back({s.name, it->second.shape});
        continue;
      }
    }
    try {
      library.push_back({s.name, build_ctmat(s.contour, s.params)});
    } catch (const CoverageFailure& e) {
      throw CoverageFailure(fmt::format("shape '{}': {}", s.name, e.what()), e.violations());
    } catch (const GeometryError& e) {
      throw SchemaError(fmt::format("shapes.{}: {}", s.name, e.what()));
    }
  }
  return library;
}

Scenario instantiate(const ScenarioFile& file, ShapeLibrary library) {
  Scenario sc;
  sc.library = std::move(library);
  sc.params = file.params;
  sc.max_steps = file.max_steps;
  sc.agents = file.agents;
  for (std::size_t k = 0; k < file.generators.size(); ++k) {
    try {
      const auto more = std::visit([&](const auto& g) { return generate(sc.library, g); }, file.generators[k]);
      sc.agents.insert(sc.agents.end(), more.begin(), more.end());
    } catch (const std::invalid_argument& e) {
      throw SchemaError(fmt::format("generators[{}]: {}", k, e.what()));
    }
  }
  if (sc.agents.empty()) throw SchemaError("scenario: no agents");
  return sc;
}

// ---- shape cache ----------------------------------------------------------------

Json shape_cache_json(const std::vector<ShapeSource>& sources, const ShapeLibrary& library) {
  Json records = Json::array();
  for (std::size_t k = 0; k < library.size(); ++k) {
    const CTMATShape& s = library[k].shape;
    Json tuples = Json::array();
    for (const auto& t : s.tuples) {
      Json tangents = Json::array();
      for (const auto& p : t.tangents) tangents.push_back(xy(p));
      tuples.push_back({{"big", circle_json(t.big)}, {"small", circle_json(t.small)},
                        {"tangents", tangents}, {"theta", t.theta}});
    }
    Json circles = Json::array();
    for (const auto& c : s.graph.circles) {
      circles.push_back({c.circle.center.x, c.circle.center.y, c.circle.radius, class_name(c.source)});
    }
    Json edges = Json::array();
    for (const auto& [i, j] : s.graph.edges) edges.push_back({i, j});
    Json polygon = Json::array();
    for (const auto& p : s.polygon) polygon.push_back(xy(p));
    const WidthTable widths = WidthTable::build(convex_hull_of_tuples(s));
    Json intervals = Json::array();
    for (const auto& iv : widths.intervals()) {
      intervals.push_back({iv.begin, iv.end, iv.delta.x, iv.delta.y, iv.radii});
    }
    records.push_back({{"name", library[k].name},
                       {"hash", hex(k < sources.size() ? sources[k].hash : 0)},
                       {"params", k < sources.size() ? sources[k].spec : Json()},
                       {"h", s.h},
                       {"reference", xy(s.reference)},
                       {"polygon", polygon},
                       {"tuples", tuples},
                       {"adjacency", {{"circles", circles}, {"edges", edges}}},
                       {"widths", {{"resolution", widths.resolution()}, {"intervals", intervals}}}});
  }
  return {{"format", "matnav-shapes"}, {"version", 1}, {"shapes", records}};
}

ShapeCache parse_shape_cache(const Json& doc) {
  if (!doc.is_object() || doc.value("format", "") != "matnav-shapes") {
    throw SchemaError("shape cache: not a matnav shape cache");
  }
  ShapeCache cache;
  try {
    for (const auto& r : doc.at("shapes")) {
      CachedShape c;
      c.hash = std::stoull(r.at("hash").get<std::string>(), nullptr, 16);
      CTMATShape& s = c.shape;
      s.h = r.at("h").get<double>();
      s.reference = point(r.at("reference"), "reference");
      for (const auto& p : r.at("polygon")) s.polygon.push_back(point(p, "polygon"));
      for (const auto& t : r.at("tuples")) {
        TupleShape u;
        u.big = circle_from(t.at("big"));
        u.small = circle_from(t.at("small"));
        for (int q = 0; q < 4; ++q) u.tangents[q] = point(t.at("tangents").at(q), "tangents");
        u.theta = t.at("theta").get<double>();
        s.tuples.push_back(u);
      }
      for (const auto& m : r.at("adjacency").at("circles")) {
        s.graph.circles.push_back({circle_from(m), class_from(m.at(3).get<std::string>())});
      }
      for (const auto& e : r.at("adjacency").at("edges")) {
        s.graph.edges.emplace_back(e.at(0).get<int>(), e.at(1).get<int>());
      }
      std::vector<WidthTable::Interval> intervals;
      for (const auto& iv : r.at("widths").at("intervals")) {
        intervals.push_back({iv.at(0).get<double>(), iv.at(1).get<double>(),
                             {iv.at(2).get<double>(), iv.at(3).get<double>()}, iv.at(4).get<double>()});
      }
      c.widths = WidthTable::from_intervals(std::move(intervals), r.at("widths").at("resolution").get<double>());
      cache[r.at("name").get<std::string>()] = std::move(c);
    }
  } catch (const Json::exception& e) {
    throw SchemaError(fmt::format("shape cache: {}", e.what()));
  }
  return cache;
}

std::uint64_t library_hash(const ShapeLibrary& library) {
  std::uint64_t h = fnv1a("matnav-library");
  for (const auto& s : library) {
    Json tuples = Json::array();
    for (const auto& t : s.shape.tuples) tuples.push_back({circle_json(t.big), circle_json(t.small), t.theta});
    h = fnv1a(tuples.dump(), h);
  }
  return h;
}

// ---- table cache ----------------------------------------------------------------

Json table_cache_json(const MinkTable& table, std::uint64_t hash) {
  const auto& offsets = table.offsets();
  Json per_shape = Json::array();
  for (int s = 0; s < table.shape_count(); ++s) per_shape.push_back(offsets[s + 1] - offsets[s]);
  Json pairs = Json::array();
  for (int sa = 0; sa < table.shape_count(); ++sa) {
    for (int sb = 0; sb < table.shape_count(); ++sb) {
      Json entries = Json::array();
      for (int ta = offsets[sa]; ta < offsets[sa + 1]; ++ta) {
        for (int tb = offsets[sb]; tb < offsets[sb + 1]; ++tb) {
          Json buckets = Json::array();
          for (int k = 0; k < table.bucket_count(); ++k) buckets.push_back(piece_list(table.entry(ta, tb, k)));
          entries.push_back(buckets);
        }
      }
      pairs.push_back({{"shape_a", sa}, {"shape_b", sb}, {"entries", entries}});
    }
  }
  return {{"format", "matnav-table"},
          {"version", 1},
          {"key", {{"library_hash", hex(hash)}, {"theta_e", table.theta_e()}}},
          {"buckets", table.bucket_count()},
          {"tuples_per_shape", per_shape},
          {"pair_tables", pairs}};
}

std::optional<MinkTable> parse_table_cache(const Json& doc, std::uint64_t hash, double theta_e) {
  if (!doc.is_object() || doc.value("format", "") != "matnav-table") return std::nullopt;
  try {
    const Json& key = doc.at("key");
    if (key.at("library_hash").get<std::string>() != hex(hash) || key.at("theta_e").get<double>() != theta_e) {
      return std::nullopt;
    }
    std::vector<int> offsets{0};
    for (const auto& n : doc.at("tuples_per_shape")) offsets.push_back(offsets.back() + n.get<int>());
    const int shapes = static_cast<int>(offsets.size()) - 1;
    const int n = offsets.back();
    const int buckets = doc.at("buckets").get<int>();
    if (buckets != bucket_count_for(theta_e)) return std::nullopt;
    std::vector<ArcHull> entries(static_cast<std::size_t>(n) * n * buckets);
    const Json& pairs = doc.at("pair_tables");
    if (static_cast<int>(pairs.size()) != shapes * shapes) return std::nullopt;
    for (const auto& p : pairs) {
      const int sa = p.at("shape_a").get<int>(), sb = p.at("shape_b").get<int>();
      const Json& list = p.at("entries");
      std::size_t q = 0;
      for (int ta = offsets[sa]; ta < offsets[sa + 1]; ++ta) {
        for (int tb = offsets[sb]; tb < offsets[sb + 1]; ++tb, ++q) {
          for (int k = 0; k < buckets; ++k) {
            entries[(static_cast<std::size_t>(ta) * n + tb) * buckets + k] = hull_from(list.at(q).at(k));
          }
        }
      }
    }
    return MinkTable::from_parts(theta_e, std::move(offsets), std::move(entries));
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

// ---- files ----------------------------------------------------------------------

std::string dump(const Json& doc, bool pretty) { return doc.dump(pretty ? 2 : -1) + "\n"; }

Json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error(fmt::format("cannot read {}", path.string()));
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw SchemaError(fmt::format("{}: not valid JSON: {}", path.string(), e.what()));
  }
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error(fmt::format("cannot write {}", path.string()));
  out << text;
  if (!out) throw std::runtime_error(fmt::format("cannot write {}", path.string()));
}

// ---- run artifacts --------------------------------------------------------------

void write_trajectory_csv(std::ostream& out, std::span<const TrajectoryRecord> records) {
  out << "step,id,x,y,vx,vy,theta,feasible\n";
  for (const auto& r : records) {
    out << fmt::format("{},{},{},{},{},{},{},{}\n", r.step, r.id, r.x, r.y, r.vx, r.vy, r.theta,
                       r.feasible ? 1 : 0);
  }
}

std::string svg_frame(const World& world) {
  static constexpr const char* kColors[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728",
                                            "#9467bd", "#8c564b", "#e377c2", "#17becf"};
  const auto agents = world.agents();
  double lo_x = std::numeric_limits<double>::infinity(), lo_y = lo_x;
  double hi_x = -lo_x, hi_y = -lo_x;
  for (const auto& a : agents) {
    for (const Point2& p : {a.position, a.goal}) {
      lo_x = std::min(lo_x, p.x - a.bounding_radius);
      hi_x = std::max(hi_x, p.x + a.bounding_radius);
      lo_y = std::min(lo_y, p.y - a.bounding_radius);
      hi_y = std::max(hi_y, p.y + a.bounding_radius);
    }
  }
  const double pad = 1.0;
  lo_x -= pad, lo_y -= pad, hi_x += pad, hi_y += pad;
  const double w = hi_x - lo_x, h = hi_y - lo_y;
  const double scale = 800.0 / std::max(w, h);
  std::string out = fmt::format(
      "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{}\" height=\"{}\" viewBox=\"{} {} {} {}\">\n"
      "<title>step {}</title>\n<g transform=\"scale(1,-1)\" stroke-width=\"{}\">\n",
      num(w * scale), num(h * scale), num(lo_x), num(-hi_y), num(w), num(h), world.steps_taken(),
      num(1.5 / scale));
  for (std::size_t i = 0; i < agents.size(); ++i) {
    const auto& a = agents[i];
    const char* color = a.is_static ? "#7f7f7f" : kColors[a.shape % std::size(kColors)];
    if (!a.is_static) {
      out += fmt::format("<circle class=\"goal\" cx=\"{}\" cy=\"{}\" r=\"{}\" fill=\"none\" stroke=\"{}\"/>\n",
                         num(a.goal.x), num(a.goal.y), num(0.15), color);
    }
    for (const auto& t : world.world_tuples(static_cast<int>(i))) {
      out += fmt::format("<path class=\"tuple\" data-agent=\"{}\" d=\"{}\" fill=\"{}\" fill-opacity=\"0.4\" "
                         "stroke=\"{}\"/>\n",
                         a.id, svg_path(t.outline()), color, color);
    }
  }
  return out + "</g>\n</svg>\n";
}

Json metrics_json(const World& world) {
  const auto run = world.metrics();
  long pairs = 0, predicted = 0, planes = 0;
  int exact = 0, exact_feasible = 0, bounding = 0, disc = 0, feasible_steps = 0, fallback = 0;
  bool counts_match = true;
  double wall = 0.0;
  for (const auto& m : run) {
    pairs += m.constraint_pairs;
    predicted += m.predicted_pairs;
    planes += m.planes;
    counts_match &= m.constraint_pairs == m.predicted_pairs;
    exact += m.exact_collisions;
    bounding += m.bounding_collisions;
    disc += m.disc_collisions;
    fallback += m.fallback;
    wall += m.wall_ms;
    if (m.all_feasible) {
      ++feasible_steps;
      exact_feasible += m.exact_collisions;
    }
  }
  int reached = 0, movers = 0;
  for (const auto& a : world.agents()) {
    if (a.is_static) continue;
    ++movers;
    reached += world.reached_goal(a.id) ? 1 : 0;
  }
  auto fp = [&](Mode mode) -> Json {
    if (run.empty()) return nullptr;
    const auto r = false_positive_report(run, mode);
    return {{"ratio", r.empty_denominator ? Json() : Json(r.ratio)},
            {"bounding_positive", r.bounding_positive},
            {"exact_positive", r.exact_positive}};
  };
  return {{"mode", world.mode() == Mode::kCtmat ? "ctmat" : "disc"},
          {"agents", world.agents().size()},
          {"moving_agents", movers},
          {"steps", world.steps_taken()},
          {"done", world.done()},
          {"reached_goal", reached},
          {"feasible_steps", feasible_steps},
          {"fallback_solves", fallback},
          {"exact_collisions", exact},
          {"exact_collisions_on_feasible_steps", exact_feasible},
          {"bounding_collisions", bounding},
          {"disc_collisions", disc},
          {"mean_frame_ms", run.empty() ? 0.0 : wall / run.size()},
          {"constraint_pairs", pairs},
          {"predicted_pairs", predicted},
          {"constraint_counts_match", counts_match},
          {"planes", planes},
          {"false_positives", {{"ctmat", fp(Mode::kCtmat)}, {"disc", fp(Mode::kDisc)}}}};
}

}  // namespace matnav
