#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "rpe/geometry.hpp"
#include "rpe/grid_oracle.hpp"
#include "rpe/rspeg.hpp"
#include "rpe/shadows.hpp"

namespace rpe::test {

std::filesystem::path data_dir();
std::filesystem::path env_path(const std::string& name);
Environment load_env(const std::string& name);

/// Shipped environments in a fixed order; the first one is convex.
const std::vector<std::string>& env_names();
/// Shipped environments with at least one reflex vertex.
const std::vector<std::string>& nonconvex_env_names();

Environment unit_square(std::vector<Ring> holes = {});
Ring square(double x0, double y0, double x1, double y1);

Point random_point_in(const Environment& env, std::mt19937_64& rng);
ShadowLabel random_label(std::size_t size, std::mt19937_64& rng);

/// Probe-grid check of a visibility polygon: every probe of a res x res grid over
/// the bounding box that lies in F and farther than `band` from the polygon's
/// boundary must be inside the polygon iff the segment from the viewpoint is in F.
struct ProbeReport {
  std::size_t probes{0};
  std::size_t skipped{0};
  std::size_t disagreements{0};
};
ProbeReport probe_visibility(const Environment& env, const VisPolygon& vp, int res, double band);

/// Shadow count from the raster: components of cells unseen by every point.
std::size_t grid_shadow_count(const ContaminationGrid& grid, std::span<const Point> points);

/// Cells whose centre lies in the region and in the raster of F.
Mask cells_in(const ContaminationGrid& grid, const Region& region);

/// Bracketing oracle for one influence relation. Seeding only the cells of
/// source shadow a, the motion is replayed twice: once treating any cell a
/// polygon touches as seen (contamination lower bound) and once treating only
/// fully covered cells as seen (upper bound). Entry (a, b) reads whether any
/// cell of destination shadow b ends contaminated.
struct BracketEntry {
  bool resolved{false};  // both shadows own at least one cell
  bool lo{false};
  bool hi{false};
};
struct Bracket {
  std::size_t rows{0};
  std::size_t cols{0};
  std::vector<BracketEntry> entries;  // row-major

  const BracketEntry& at(std::size_t a, std::size_t b) const { return entries[a * cols + b]; }
};
Bracket bracket_relation(const ContaminationGrid& grid, const ShadowSet& src, const ShadowSet& dst,
                         std::span<const Point> from, std::span<const Point> to, int steps);

/// Minimal JSON-schema check (type, required, properties, items, minItems,
/// maxItems, enum, minimum). Returns one message per violation.
std::vector<std::string> schema_errors(const nlohmann::json& schema, const nlohmann::json& doc,
                                       const std::string& where = "$");

struct CommandResult {
  int exit_code{-1};
  std::string out;
  std::string err;
};
/// Runs a shell command, capturing both output streams.
CommandResult run_command(const std::string& command);

std::string read_file(const std::filesystem::path& path);

}  // namespace rpe::test
