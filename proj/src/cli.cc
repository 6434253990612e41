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

#include "matnav/cli.h"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "matnav/io.h"
#include "matnav/shapes.h"

namespace matnav {

namespace fs = std::filesystem;

namespace {

const std::map<std::string, Mode> kModes{{"ctmat", Mode::kCtmat}, {"disc", Mode::kDisc}};

struct RunOptions {
  std::string scenario;
  std::optional<int> steps;
  std::optional<double> dt, tau, theta_e;
  std::optional<std::uint64_t> seed;
  std::string out = "trajectory.csv";
  std::string metrics = "metrics.json";
  int svg_every = 0;
  std::string svg_dir = "frames";
  bool use_tables = false;
  Mode mode = Mode::kCtmat;
  std::string shape_cache, table_cache;
};

struct PrecomputeOptions {
  std::string library;
  double theta_e = kPi / 36;
  std::string out_dir = ".";
  Mode mode = Mode::kCtmat;
};

struct BenchOptions {
  std::string family = "antipodal";
  std::vector<int> counts{10, 50, 100};
  int frames = 50;
  std::string shape = "capsule";
  std::vector<double> shape_args{2.0, 1.0};
  int sweep_count = 20;
  std::string out;
};

ShapeCache load_shape_cache(const std::string& path) {
  if (path.empty() || !fs::exists(path)) return {};
  return parse_shape_cache(read_json(path));
}

std::shared_ptr<const MinkTable> table_for(const ShapeLibrary& library, Mode mode, double theta_e,
                                           const std::string& cache_path, std::ostream& out) {
  const ShapeLibrary rt = runtime_library(library, mode);
  const std::uint64_t hash = library_hash(rt);
  if (!cache_path.empty() && fs::exists(cache_path)) {
    if (auto t = parse_table_cache(read_json(cache_path), hash, theta_e)) {
      out << fmt::format("loaded table cache {}\n", cache_path);
      return std::make_shared<const MinkTable>(std::move(*t));
    }
    out << fmt::format("table cache {} does not match; rebuilding\n", cache_path);
  }
  auto table = std::make_shared<const MinkTable>(MinkTable::build(rt, theta_e));
  if (!cache_path.empty()) write_text(cache_path, dump(table_cache_json(*table, hash), false));
  return table;
}

int cmd_run(const RunOptions& o, std::ostream& out) {
  const ScenarioFile file = load_scenario(o.scenario);
  const ShapeCache cache = load_shape_cache(o.shape_cache);
  Scenario sc = instantiate(file, build_library(file.shapes, &cache));
  if (o.dt) sc.params.dt = *o.dt;
  if (o.tau) sc.params.tau = *o.tau;
  if (o.seed) sc.params.seed = *o.seed;
  if (!(sc.params.dt > 0) || !(sc.params.tau > 0)) throw SchemaError("--dt and --tau must be positive");
  const double theta_e = o.theta_e.value_or(file.theta_e);
  std::shared_ptr<const MinkTable> table;
  if (o.use_tables) table = table_for(sc.library, o.mode, theta_e, o.table_cache, out);

  World world(sc, o.mode, table);
  // An explicit step count runs exactly that many steps; otherwise the run
  // stops once every agent is home.
  const int limit = o.steps.value_or(sc.max_steps);
  int frames = 0;
  for (int s = 0; s < limit; ++s) {
    if (!o.steps && world.done()) break;
    if (o.svg_every > 0 && s % o.svg_every == 0) {
      write_text(fs::path(o.svg_dir) / fmt::format("frame_{:06d}.svg", s), svg_frame(world));
      ++frames;
    }
    world.step();
  }

  std::ostringstream csv;
  write_trajectory_csv(csv, world.trajectory());
  write_text(o.out, csv.str());
  const Json metrics = metrics_json(world);
  write_text(o.metrics, dump(metrics));
  out << fmt::format("{} steps, {} agents, {}/{} at goal, {} exact collisions ({} on feasible steps)",
                     world.steps_taken(), world.agents().size(), metrics["reached_goal"].get<int>(),
                     metrics["moving_agents"].get<int>(), metrics["exact_collisions"].get<int>(),
                     metrics["exact_collisions_on_feasible_steps"].get<int>());
  if (frames > 0) out << fmt::format(", {} frames in {}", frames, o.svg_dir);
  out << "\n";
  return kExitOk;
}

int cmd_build_shapes(const std::string& library_path, const std::string& out_path, std::ostream& out) {
  const ScenarioFile file = load_scenario(library_path);
  const ShapeLibrary library = build_library(file.shapes);
  write_text(out_path, dump(shape_cache_json(file.shapes, library)));
  for (const auto& s : library) out << fmt::format("{}: {} tuples\n", s.name, s.shape.tuples.size());
  return kExitOk;
}

int cmd_precompute(const PrecomputeOptions& o, std::ostream& out) {
  const ScenarioFile file = load_scenario(o.library);
  const fs::path shapes_path = fs::path(o.out_dir) / "shapes.json";
  const fs::path tables_path = fs::path(o.out_dir) / "tables.json";
  const ShapeCache cache = load_shape_cache(shapes_path.string());
  const ShapeLibrary library = build_library(file.shapes, &cache);
  write_text(shapes_path, dump(shape_cache_json(file.shapes, library)));
  const ShapeLibrary rt = runtime_library(library, o.mode);
  const MinkTable table = MinkTable::build(rt, o.theta_e);
  write_text(tables_path, dump(table_cache_json(table, library_hash(rt)), false));
  out << fmt::format("{} shapes, {} tuple types, {} pair tables x {} buckets -> {}\n", table.shape_count(),
                     table.type_count(), table.shape_count() * table.shape_count(), table.bucket_count(),
                     tables_path.string());
  return kExitOk;
}

// ---- bench --------------------------------------------------------------------

struct BenchRow {
  double frame_ms = 0.0;
  double pairs = 0.0;  // tuple pairs per frame
};

BenchRow measure(const Scenario& sc, Mode mode, std::shared_ptr<const MinkTable> table, int frames) {
  World world(sc, mode, std::move(table));
  for (int f = 0; f < frames; ++f) world.step();
  BenchRow r;
  for (const auto& m : world.metrics()) {
    r.frame_ms += m.wall_ms;
    r.pairs += static_cast<double>(m.constraint_pairs);
  }
  r.frame_ms /= std::max(1, frames);
  r.pairs /= std::max(1, frames);
  return r;
}

std::vector<AgentSpec> family_agents(const ShapeLibrary& lib, const std::string& family, int count) {
  const double r = lib[0].shape.bounding_radius();
  if (family == "antipodal") {
    AntipodalCircle g;
    g.n = count;
    g.radius = std::max(15.0, 0.75 * count * r);
    return generate(lib, g);
  }
  if (family == "crossing") {
    CrossingStreams g;
    g.per_stream = std::max(1, count / 2);
    g.spacing = 3.0 * r;
    g.distance = 10.0 + 2.0 * r;
    return generate(lib, g);
  }
  if (family == "hallway") {
    Hallway g;
    g.per_side = std::max(1, count / 2);
    g.width = 5.0 * r;
    return generate(lib, g);
  }
  if (family == "door") {
    NarrowDoor g;
    g.agents = count;
    g.door_width = 2.5 * r;
    return generate(lib, g);
  }
  throw SchemaError(fmt::format("unknown bench family '{}'", family));
}

Scenario bench_scenario(const ShapeLibrary& lib, const std::vector<AgentSpec>& agents) {
  Scenario sc;
  sc.library = lib;
  sc.agents = agents;
  sc.params.record_collisions = false;
  return sc;
}

int cmd_bench(const BenchOptions& o, std::ostream& out) {
  InputContour agent;
  {
    Json spec = {{"builtin", o.shape}, {"args", o.shape_args}};
    agent = parse_scenario(Json{{"shapes", {{o.shape, spec}}}}).shapes[0].contour;
  }
  const ShapeLibrary lib{{o.shape, build_ctmat(agent)}, {"wall", build_ctmat(shapes::rectangle(8.0, 1.0))}};
  struct ModeSpec {
    const char* name;
    Mode mode;
    bool table;
  };
  const ModeSpec modes[] = {{"ctmat-exact", Mode::kCtmat, false},
                            {"ctmat-table", Mode::kCtmat, true},
                            {"disc", Mode::kDisc, false}};
  Json rows = Json::array();
  out << fmt::format("family {} shape {} ({} tuples), {} frames\n", o.family, o.shape, lib[0].shape.tuples.size(),
                     o.frames);
  out << fmt::format("{:<12} {:>7} {:>12} {:>14}\n", "mode", "agents", "ms/frame", "pairs/frame");
  for (const auto& m : modes) {
    std::shared_ptr<const MinkTable> table;
    if (m.table) table = std::make_shared<const MinkTable>(MinkTable::build(runtime_library(lib, m.mode)));
    for (int count : o.counts) {
      const Scenario sc = bench_scenario(lib, family_agents(lib, o.family, count));
      const BenchRow r = measure(sc, m.mode, table, o.frames);
      out << fmt::format("{:<12} {:>7} {:>12.3f} {:>14.1f}\n", m.name, count, r.frame_ms, r.pairs);
      rows.push_back({{"mode", m.name}, {"count", count}, {"agents", sc.agents.size()},
                      {"mean_frame_ms", r.frame_ms}, {"pairs_per_frame", r.pairs}});
    }
  }

  // Frame time against tuples per agent, at a fixed agent count.
  struct SweepShape {
    const char* name;
    InputContour contour;
    double phi;
  };
  const SweepShape sweep[] = {{"circle", shapes::circle(1.0), 1.0},
                              {"car-2.5x0.6", shapes::car(2.5, 0.6), 1.0},
                              {"car-3x1.2", shapes::car(3.0, 1.2), 1.2},
                              {"plus_sign", shapes::plus_sign(), 1.0},
                              {"l_shape", shapes::l_shape(), 1.0}};
  Json sweep_rows = Json::array();
  out << fmt::format("tuple sweep, antipodal, {} agents, ctmat-table\n", o.sweep_count);
  out << fmt::format("{:<12} {:>7} {:>12} {:>14}\n", "shape", "tuples", "ms/frame", "pairs/frame");
  for (const auto& s : sweep) {
    BuildParams bp;
    bp.phi = s.phi;
    const ShapeLibrary one{{s.name, build_ctmat(s.contour, bp)}};
    const auto table = std::make_shared<const MinkTable>(MinkTable::build(one));
    const Scenario sc = bench_scenario(one, family_agents(one, "antipodal", o.sweep_count));
    const BenchRow r = measure(sc, Mode::kCtmat, table, o.frames);
    const auto tuples = one[0].shape.tuples.size();
    out << fmt::format("{:<12} {:>7} {:>12.3f} {:>14.1f}\n", s.name, tuples, r.frame_ms, r.pairs);
    sweep_rows.push_back({{"shape", s.name}, {"tuples", tuples}, {"mean_frame_ms", r.frame_ms},
                          {"pairs_per_frame", r.pairs}});
  }
  if (!o.out.empty()) {
    write_text(o.out, dump({{"family", o.family}, {"shape", o.shape}, {"frames", o.frames},
                            {"rows", rows}, {"tuple_sweep", sweep_rows}}));
  }
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Navigation of arbitrarily shaped agents with tuple-based velocity obstacles", "matnav"};
  app.require_subcommand(1);

  RunOptions run;
  auto* run_cmd = app.add_subcommand("run", "Simulate a scenario file");
  run_cmd->add_option("scenario", run.scenario, "Scenario file")->required();
  run_cmd->add_option("--steps", run.steps, "Run exactly this many steps");
  run_cmd->add_option("--dt", run.dt, "Time step");
  run_cmd->add_option("--tau", run.tau, "Velocity obstacle horizon");
  run_cmd->add_option("--out", run.out, "Trajectory CSV")->capture_default_str();
  run_cmd->add_option("--metrics", run.metrics, "Metrics report")->capture_default_str();
  run_cmd->add_option("--svg-every", run.svg_every, "Write an SVG frame every k steps")->check(CLI::NonNegativeNumber);
  run_cmd->add_option("--svg-dir", run.svg_dir, "Directory for SVG frames")->capture_default_str();
  run_cmd->add_flag("--use-tables", run.use_tables, "Use precomputed Minkowski tables");
  run_cmd->add_option("--mode", run.mode, "Bounding representation")->transform(CLI::CheckedTransformer(kModes));
  run_cmd->add_option("--seed", run.seed, "Seed for the preference perturbation");
  run_cmd->add_option("--theta-e", run.theta_e, "Table bucket width in radians");
  run_cmd->add_option("--shape-cache", run.shape_cache, "Shape cache to reuse");
  run_cmd->add_option("--table-cache", run.table_cache, "Table cache to load, or write when stale");

  std::string shapes_in, shapes_out = "shapes.json";
  auto* build_cmd = app.add_subcommand("build-shapes", "Build the tuple representation of every shape");
  build_cmd->add_option("library", shapes_in, "Scenario or shape library file")->required();
  build_cmd->add_option("--out", shapes_out, "Shape cache")->capture_default_str();

  PrecomputeOptions pre;
  auto* pre_cmd = app.add_subcommand("precompute", "Write shape, width and Minkowski table caches");
  pre_cmd->add_option("library", pre.library, "Scenario or shape library file")->required();
  pre_cmd->add_option("--theta-e", pre.theta_e, "Table bucket width in radians")->check(CLI::PositiveNumber);
  pre_cmd->add_option("--out-dir", pre.out_dir, "Output directory")->capture_default_str();
  pre_cmd->add_option("--mode", pre.mode, "Bounding representation")->transform(CLI::CheckedTransformer(kModes));

  BenchOptions bench;
  auto* bench_cmd = app.add_subcommand("bench", "Mean frame time per agent count and mode");
  bench_cmd->add_option("--family", bench.family, "antipodal, crossing, hallway or door")
      ->check(CLI::IsMember({"antipodal", "crossing", "hallway", "door"}))
      ->capture_default_str();
  bench_cmd->add_option("--counts", bench.counts, "Agent counts")->delimiter(',')->capture_default_str();
  bench_cmd->add_option("--frames", bench.frames, "Frames per measurement")->check(CLI::PositiveNumber);
  bench_cmd->add_option("--shape", bench.shape, "Built-in agent shape")->capture_default_str();
  bench_cmd->add_option("--shape-args", bench.shape_args, "Built-in shape arguments")->delimiter(',');
  bench_cmd->add_option("--sweep-count", bench.sweep_count, "Agents in the tuple-count sweep")
      ->check(CLI::PositiveNumber);
  bench_cmd->add_option("--out", bench.out, "JSON report");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(std::move(reversed));
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitSchema;
  }

  try {
    if (run_cmd->parsed()) return cmd_run(run, out);
    if (build_cmd->parsed()) return cmd_build_shapes(shapes_in, shapes_out, out);
    if (pre_cmd->parsed()) return cmd_precompute(pre, out);
    if (bench_cmd->parsed()) return cmd_bench(bench, out);
  } catch (const SchemaError& e) {
    err << "schema error: " << e.what() << "\n";
    return kExitSchema;
  } catch (const CoverageFailure& e) {
    err << "coverage failure: " << e.what() << "\n";
    return kExitCoverage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitFailure;
}

}  // namespace matnav
