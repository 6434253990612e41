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

// Scenario files, shape and table caches, and run artifacts (trajectory CSV,
// SVG frames, metrics). All documents are JSON.

#ifndef MATNAV_IO_H_
#define MATNAV_IO_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "matnav/scenario.h"
#include "matnav/sim.h"

namespace matnav {

using Json = nlohmann::ordered_json;

/// A scenario or shape document does not match the schema.
class SchemaError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// One named shape as given in a document, before construction.
struct ShapeSource {
  std::string name;
  Json spec;  // the document's entry, kept for hashing and the cache
  InputContour contour;
  BuildParams params;
  std::uint64_t hash = 0;  // of name and spec
};

using GeneratorSpec = std::variant<AntipodalCircle, CrossingStreams, Hallway, NarrowDoor>;

/// A parsed scenario document. Shape names are already resolved to indices
/// into `shapes`; generators are expanded once the shapes are built.
struct ScenarioFile {
  std::vector<ShapeSource> shapes;
  std::vector<AgentSpec> agents;
  std::vector<GeneratorSpec> generators;
  WorldParams params;
  int max_steps = 1000;
  double theta_e = kPi / 36;
};

/// Validates and parses a scenario document. A document holding only
/// "shapes" is a valid shape library.
ScenarioFile parse_scenario(const Json& doc);
ScenarioFile parse_scenario_text(const std::string& text);
ScenarioFile load_scenario(const std::filesystem::path& path);

/// Shapes read back from a cache file, keyed by name.
struct CachedShape {
  std::uint64_t hash = 0;
  CTMATShape shape;
  WidthTable widths;
};
using ShapeCache = std::map<std::string, CachedShape>;

/// Builds every shape, reusing cache records whose source hash matches.
/// CoverageFailure is rethrown with the shape name in its message.
ShapeLibrary build_library(const std::vector<ShapeSource>& sources, const ShapeCache* cache = nullptr);

/// Explicit agents followed by generated ones, in document order.
Scenario instantiate(const ScenarioFile& file, ShapeLibrary library);

Json shape_cache_json(const std::vector<ShapeSource>& sources, const ShapeLibrary& library);
ShapeCache parse_shape_cache(const Json& doc);

/// FNV-1a over the tuple geometry of a library, in order.
std::uint64_t library_hash(const ShapeLibrary& library);

Json table_cache_json(const MinkTable& table, std::uint64_t library_hash);
/// The table when the cache key matches (hash, theta_e); none otherwise.
std::optional<MinkTable> parse_table_cache(const Json& doc, std::uint64_t library_hash, double theta_e);

/// JSON text with a trailing newline, indented unless `pretty` is off; the
/// same document always yields the same bytes.
std::string dump(const Json& doc, bool pretty = true);
Json read_json(const std::filesystem::path& path);
void write_text(const std::filesystem::path& path, const std::string& text);

void write_trajectory_csv(std::ostream& out, std::span<const TrajectoryRecord> records);

/// The current state of the world: one closed path per agent tuple, plus
/// goal markers.
std::string svg_frame(const World& world);

Json metrics_json(const World& world);

}  // namespace matnav

#endif  // MATNAV_IO_H_
