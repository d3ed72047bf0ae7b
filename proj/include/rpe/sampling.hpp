#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "rpe/common.hpp"
#include "rpe/geometry.hpp"
#include "rpe/rspeg.hpp"

namespace rpe {

enum class SamplingErrc { CoverageStall, DisconnectedWeb };

const char* to_string(SamplingErrc code);

class SamplingError : public std::runtime_error {
 public:
  SamplingError(SamplingErrc code, const std::string& what) : std::runtime_error(what), code_(code) {}
  SamplingErrc code() const noexcept { return code_; }

 private:
  SamplingErrc code_;
};

using Rng = std::mt19937_64;

/// Guard points P (covering F) plus connector points Q (one per pairwise
/// intersection of guard visibility polygons).
struct Web {
  std::vector<Point> guards;
  std::vector<Point> connectors;

  std::size_t size() const { return guards.size() + connectors.size(); }
  /// Guards first, then connectors.
  std::vector<Point> points() const;
};

struct WebOptions {
  int coverage_grid{200};
  int max_rejections{10000};  // uniform draws from F before drawing from the uncovered region itself
  bool sparse{true};  // skip a pair whose intersection already holds a connector
};

/// Uniform point of F by rejection from the bounding box.
Point sample_free_point(const Environment& env, Rng& rng);

Web build_web(const Environment& env, std::uint64_t seed, const WebOptions& options = {},
              const Deadline& deadline = {});

/// Adjacency lists over web points, sorted ascending.
struct VisibilityGraph {
  std::vector<std::vector<std::size_t>> adjacency;

  std::size_t size() const { return adjacency.size(); }
  std::size_t edge_count() const;
  bool connected() const;
  static VisibilityGraph from_edges(std::size_t n, const std::vector<std::pair<std::size_t, std::size_t>>& edges);
};

/// Links web points that see each other. Throws DisconnectedWeb.
VisibilityGraph build_visibility_graph(const Environment& env, const Web& web);

/// Depth-first tour from `root` listing each vertex on arrival and on every
/// return to it, except the final return to the root.
std::vector<std::size_t> dfs_walk(const VisibilityGraph& graph, std::size_t root);

/// Walk root drawn uniformly from `count` web points, derived from the web seed.
std::size_t pick_walk_root(std::size_t count, std::uint64_t web_seed);

/// Gap between consecutive robots on the walk: ceil(d / n).
std::size_t rcs_spacing(std::size_t d, std::size_t n);

/// Samples drawn per walk: 1 + ceil(2d / n).
std::size_t rcs_sample_count(std::size_t d, std::size_t n);

/// Walk index of robot i in sample k.
std::size_t rcs_index(std::size_t d, std::size_t n, std::size_t i, std::size_t k);

enum class SamplerKind { Rcs, Ws };

const char* to_string(SamplerKind kind);
SamplerKind parse_sampler(const std::string& name);

/// Endless stream of joint configurations drawn from successive webs. Web k is
/// built from seed + k; a web that fails to build is replaced by the next one.
class SampleStream {
 public:
  SampleStream(const Environment& env, SamplerKind kind, std::size_t n, std::uint64_t seed,
               WebOptions options = {});
  SampleStream(Environment&&, SamplerKind, std::size_t, std::uint64_t, WebOptions = {}) = delete;

  Jpc next(const Deadline& deadline = {});

  std::size_t webs_built() const { return webs_built_; }
  std::size_t webs_rejected() const { return webs_rejected_; }
  std::size_t samples_drawn() const { return drawn_; }
  const Web& web() const { return web_; }
  const std::vector<std::size_t>& walk() const { return walk_; }

 private:
  void refill(const Deadline& deadline);

  const Environment* env_;
  SamplerKind kind_;
  std::size_t n_;
  std::uint64_t seed_;
  WebOptions options_;
  std::uint64_t next_web_{0};
  Web web_;
  std::vector<Point> points_;
  std::vector<std::size_t> walk_;
  Rng rng_;
  std::size_t budget_{0};
  std::size_t k_{0};
  std::size_t webs_built_{0};
  std::size_t webs_rejected_{0};
  std::size_t drawn_{0};
};

}  // namespace rpe
