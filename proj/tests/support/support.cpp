#include "support.hpp"

#include <sys/wait.h>

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <sstream>

#include "rpe/environment_io.hpp"

namespace rpe::test {

std::filesystem::path data_dir() { return RPE_DATA_DIR; }

std::filesystem::path env_path(const std::string& name) { return data_dir() / "environments" / (name + ".json"); }

Environment load_env(const std::string& name) { return load_environment(env_path(name)); }

const std::vector<std::string>& env_names() {
  static const std::vector<std::string> names{"convex_room", "l_room", "wing_rooms", "hooked_hole", "two_holes"};
  return names;
}

const std::vector<std::string>& nonconvex_env_names() {
  static const std::vector<std::string> names{"l_room", "wing_rooms", "hooked_hole", "two_holes"};
  return names;
}

Ring square(double x0, double y0, double x1, double y1) { return {{x0, y0}, {x1, y0}, {x1, y1}, {x0, y1}}; }

Environment unit_square(std::vector<Ring> holes) {
  RawEnvironment raw;
  raw.outer = square(0, 0, 1, 1);
  raw.holes = std::move(holes);
  return Environment::validate(raw);
}

Point random_point_in(const Environment& env, std::mt19937_64& rng) {
  const Box b = env.bounds();
  std::uniform_real_distribution<double> ux(b.min_x, b.max_x), uy(b.min_y, b.max_y);
  for (;;) {
    const Point p{ux(rng), uy(rng)};
    if (contains_point(env, p)) return p;
  }
}

ShadowLabel random_label(std::size_t size, std::mt19937_64& rng) {
  ShadowLabel l(size);
  std::bernoulli_distribution coin(0.5);
  for (std::size_t i = 0; i < size; ++i) l.set(i, coin(rng));
  return l;
}

namespace {

double distance_to_ring(const Ring& ring, Point p) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < ring.size(); ++i) {
    best = std::min(best, distance_to_segment(p, ring[i], ring[(i + 1) % ring.size()]));
  }
  return best;
}

std::string type_of(const nlohmann::json& j) {
  if (j.is_object()) return "object";
  if (j.is_array()) return "array";
  if (j.is_string()) return "string";
  if (j.is_boolean()) return "boolean";
  if (j.is_number_integer() || j.is_number_unsigned()) return "integer";
  if (j.is_number()) return "number";
  return "null";
}

bool type_matches(const std::string& want, const nlohmann::json& j) {
  const std::string have = type_of(j);
  return want == have || (want == "number" && have == "integer");
}

}  // namespace

ProbeReport probe_visibility(const Environment& env, const VisPolygon& vp, int res, double band) {
  ProbeReport r;
  const Box b = env.bounds();
  for (int iy = 0; iy < res; ++iy) {
    for (int ix = 0; ix < res; ++ix) {
      const Point p{b.min_x + (ix + 0.5) * b.width() / res, b.min_y + (iy + 0.5) * b.height() / res};
      if (!contains_point(env, p)) continue;
      if (distance_to_ring(vp.boundary, p) <= band) {
        ++r.skipped;
        continue;
      }
      ++r.probes;
      if (vp.contains(p, 0.0) != contains_segment(env, vp.viewpoint, p)) ++r.disagreements;
    }
  }
  return r;
}

std::size_t grid_shadow_count(const ContaminationGrid& grid, std::span<const Point> points) {
  int n = 0;
  grid.components(grid.unseen(points), &n);
  return static_cast<std::size_t>(n);
}

Mask cells_in(const ContaminationGrid& grid, const Region& region) {
  Mask m(grid.cells(), 0);
  const IntFrame& frame = grid.env().frame();
  for (std::size_t c = 0; c < grid.cells(); ++c) {
    if (grid.free(c) && region.contains(frame, grid.center(c))) m[c] = 1;
  }
  return m;
}

Bracket bracket_relation(const ContaminationGrid& grid, const ShadowSet& src, const ShadowSet& dst,
                         std::span<const Point> from, std::span<const Point> to, int steps) {
  Bracket out;
  out.rows = src.size();
  out.cols = dst.size();
  out.entries.resize(out.rows * out.cols);
  std::vector<Mask> dst_cells;
  for (const Shadow& s : dst.shadows) dst_cells.push_back(cells_in(grid, s.region));
  const Mask lo_unseen = grid.unseen(from, SeenRule::Touch);
  const Mask hi_unseen = grid.unseen(from, SeenRule::Whole);

  auto run = [&](const Mask& seeds, const Mask& unseen, SeenRule rule) {
    Mask start(grid.cells(), 0);
    for (std::size_t c = 0; c < start.size(); ++c) start[c] = seeds[c] && unseen[c];
    GridMotionOptions options;
    options.fixed_steps = steps;
    options.rule = rule;
    return simulate_motion(grid, start, from, to, options);
  };
  auto reaches = [](const Mask& contaminated, const Mask& cells) {
    for (std::size_t c = 0; c < cells.size(); ++c) {
      if (cells[c] && contaminated[c]) return true;
    }
    return false;
  };

  for (std::size_t a = 0; a < out.rows; ++a) {
    const Mask seeds = cells_in(grid, src.shadows[a].region);
    if (count(seeds) == 0) continue;
    const Mask lo = run(seeds, lo_unseen, SeenRule::Touch);
    const Mask hi = run(seeds, hi_unseen, SeenRule::Whole);
    for (std::size_t b = 0; b < out.cols; ++b) {
      if (count(dst_cells[b]) == 0) continue;
      BracketEntry& e = out.entries[a * out.cols + b];
      e.resolved = true;
      e.lo = reaches(lo, dst_cells[b]);
      e.hi = reaches(hi, dst_cells[b]);
    }
  }
  return out;
}

std::vector<std::string> schema_errors(const nlohmann::json& schema, const nlohmann::json& doc,
                                       const std::string& where) {
  std::vector<std::string> errors;
  if (schema.contains("type") && !type_matches(schema["type"].get<std::string>(), doc)) {
    errors.push_back(where + ": expected " + schema["type"].get<std::string>() + ", got " + type_of(doc));
    return errors;
  }
  if (schema.contains("enum")) {
    const auto& options = schema["enum"];
    if (std::find(options.begin(), options.end(), doc) == options.end()) {
      errors.push_back(where + ": " + doc.dump() + " not in enum");
    }
  }
  if (schema.contains("minimum") && doc.is_number() && doc.get<double>() < schema["minimum"].get<double>()) {
    errors.push_back(where + ": below minimum");
  }
  if (doc.is_object()) {
    for (const auto& key : schema.value("required", nlohmann::json::array())) {
      if (!doc.contains(key.get<std::string>())) errors.push_back(where + ": missing " + key.get<std::string>());
    }
    if (schema.contains("properties")) {
      for (const auto& [key, sub] : schema["properties"].items()) {
        if (!doc.contains(key)) continue;
        auto more = schema_errors(sub, doc[key], where + "." + key);
        errors.insert(errors.end(), more.begin(), more.end());
      }
    }
  }
  if (doc.is_array()) {
    if (schema.contains("minItems") && doc.size() < schema["minItems"].get<std::size_t>()) {
      errors.push_back(where + ": too few items");
    }
    if (schema.contains("maxItems") && doc.size() > schema["maxItems"].get<std::size_t>()) {
      errors.push_back(where + ": too many items");
    }
    if (schema.contains("items")) {
      for (std::size_t i = 0; i < doc.size(); ++i) {
        auto more = schema_errors(schema["items"], doc[i], where + "[" + std::to_string(i) + "]");
        errors.insert(errors.end(), more.begin(), more.end());
      }
    }
  }
  return errors;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

CommandResult run_command(const std::string& command) {
  const auto dir = std::filesystem::temp_directory_path();
  const auto tag = std::to_string(std::random_device{}());
  const auto out = dir / ("rpe_out_" + tag);
  const auto err = dir / ("rpe_err_" + tag);
  const std::string full = command + " >" + out.string() + " 2>" + err.string();
  const int status = std::system(full.c_str());
  CommandResult r;
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = read_file(out);
  r.err = read_file(err);
  std::filesystem::remove(out);
  std::filesystem::remove(err);
  return r;
}

}  // namespace rpe::test
