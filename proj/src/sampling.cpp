#include "rpe/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

#include "clipper.hpp"

namespace rpe {

const char* to_string(SamplingErrc code) {
  switch (code) {
    case SamplingErrc::CoverageStall: return "CoverageStall";
    case SamplingErrc::DisconnectedWeb: return "DisconnectedWeb";
  }
  return "Unknown";
}

const char* to_string(SamplerKind kind) { return kind == SamplerKind::Rcs ? "rcs" : "ws"; }

SamplerKind parse_sampler(const std::string& name) {
  if (name == "rcs") return SamplerKind::Rcs;
  if (name == "ws") return SamplerKind::Ws;
  throw std::invalid_argument("unknown sampler '" + name + "' (expected rcs or ws)");
}

std::vector<Point> Web::points() const {
  std::vector<Point> out = guards;
  out.insert(out.end(), connectors.begin(), connectors.end());
  return out;
}

Point sample_free_point(const Environment& env, Rng& rng) {
  const Box& b = env.bounds();
  std::uniform_real_distribution<double> ux(b.min_x, b.max_x), uy(b.min_y, b.max_y);
  for (;;) {
    const Point p{ux(rng), uy(rng)};
    if (contains_point(env, p)) return p;
  }
}

namespace {

// Cell centres at least epsilon away from the boundary of F.
std::vector<Point> coverage_cells(const Environment& env, int resolution) {
  const Box& b = env.bounds();
  const double dx = b.width() / resolution, dy = b.height() / resolution;
  std::vector<Point> out;
  for (int j = 0; j < resolution; ++j) {
    for (int i = 0; i < resolution; ++i) {
      const Point c{b.min_x + (i + 0.5) * dx, b.min_y + (j + 0.5) * dy};
      if (!contains_point(env, c)) continue;
      bool interior = true;
      for (const Edge& e : env.edges()) {
        if (distance_to_segment(c, e.a, e.b) <= env.epsilon()) {
          interior = false;
          break;
        }
      }
      if (interior) out.push_back(c);
    }
  }
  return out;
}

std::vector<Region> intersection(const Environment& env, const VisPolygon& a, const VisPolygon& b) {
  ClipperLib::Clipper clipper;
  clipper.AddPath(to_lattice(env.frame(), a.boundary), ClipperLib::ptSubject, true);
  clipper.AddPath(to_lattice(env.frame(), b.boundary), ClipperLib::ptClip, true);
  ClipperLib::PolyTree tree;
  clipper.Execute(ClipperLib::ctIntersection, tree, ClipperLib::pftNonZero, ClipperLib::pftNonZero);
  return regions_from_tree(tree, env.area_floor());
}

bool region_holds(const Environment& env, const std::vector<Region>& regions, Point p) {
  return std::any_of(regions.begin(), regions.end(), [&](const Region& r) { return r.contains(env.frame(), p); });
}

// Uniform point of the union of `regions` by rejection from their bounding box.
std::optional<Point> sample_in(const Environment& env, const std::vector<Region>& regions, Rng& rng) {
  ClipperLib::IntPoint lo = regions.front().bbox_min, hi = regions.front().bbox_max;
  for (const Region& r : regions) {
    lo.X = std::min(lo.X, r.bbox_min.X);
    lo.Y = std::min(lo.Y, r.bbox_min.Y);
    hi.X = std::max(hi.X, r.bbox_max.X);
    hi.Y = std::max(hi.Y, r.bbox_max.Y);
  }
  const Point a = env.frame().to_real(lo), b = env.frame().to_real(hi);
  std::uniform_real_distribution<double> ux(a.x, b.x), uy(a.y, b.y);
  for (int attempt = 0; attempt < 1000000; ++attempt) {
    const Point p{ux(rng), uy(rng)};
    if (region_holds(env, regions, p) && contains_point(env, p)) return p;
  }
  return std::nullopt;
}

}  // namespace

Web build_web(const Environment& env, std::uint64_t seed, const WebOptions& options, const Deadline& deadline) {
  Rng rng(seed);
  Web web;
  std::vector<VisPolygon> views;
  std::vector<Point> uncovered = coverage_cells(env, options.coverage_grid);
  const double eps = env.epsilon();

  while (!uncovered.empty()) {
    deadline.check();
    auto unseen = [&](Point p) {
      return std::none_of(views.begin(), views.end(), [&](const VisPolygon& v) { return v.contains(p, eps); });
    };
    std::optional<Point> candidate;
    for (int rejections = 0; rejections < options.max_rejections && !candidate; ++rejections) {
      const Point p = sample_free_point(env, rng);
      if (unseen(p)) candidate = p;
    }
    if (!candidate) {
      // The uncovered part of F is a sliver. Drawing from it directly keeps the
      // same conditional distribution as continued rejection.
      std::vector<Region> rest;
      for (Shadow& s : shadow_set_from(env, views).shadows) rest.push_back(std::move(s.region));
      for (int attempt = 0; attempt < 100 && !rest.empty() && !candidate; ++attempt) {
        const auto p = sample_in(env, rest, rng);
        if (!p) break;
        if (unseen(*p)) candidate = p;
      }
    }
    if (!candidate) {
      throw SamplingError(SamplingErrc::CoverageStall,
                          "CoverageStall: " + std::to_string(uncovered.size()) +
                              " coverage cells remain but no unseen point of F can be drawn");
    }
    web.guards.push_back(*candidate);
    views.push_back(visibility_polygon(env, *candidate));
    const VisPolygon& v = views.back();
    std::erase_if(uncovered, [&](Point c) { return v.contains(c, eps); });
  }

  for (std::size_t i = 0; i < views.size(); ++i) {
    for (std::size_t j = i + 1; j < views.size(); ++j) {
      deadline.check();
      std::vector<Region> overlap = intersection(env, views[i], views[j]);
      if (overlap.empty()) continue;
      if (options.sparse && std::any_of(web.connectors.begin(), web.connectors.end(),
                                        [&](Point q) { return region_holds(env, overlap, q); })) {
        continue;
      }
      if (auto q = sample_in(env, overlap, rng)) web.connectors.push_back(*q);
    }
  }
  return web;
}

std::size_t VisibilityGraph::edge_count() const {
  std::size_t n = 0;
  for (const auto& a : adjacency) n += a.size();
  return n / 2;
}

bool VisibilityGraph::connected() const {
  if (adjacency.empty()) return true;
  std::vector<char> seen(adjacency.size(), 0);
  std::vector<std::size_t> stack{0};
  seen[0] = 1;
  std::size_t reached = 1;
  while (!stack.empty()) {
    const std::size_t v = stack.back();
    stack.pop_back();
    for (std::size_t u : adjacency[v]) {
      if (!seen[u]) {
        seen[u] = 1;
        ++reached;
        stack.push_back(u);
      }
    }
  }
  return reached == adjacency.size();
}

VisibilityGraph VisibilityGraph::from_edges(std::size_t n,
                                            const std::vector<std::pair<std::size_t, std::size_t>>& edges) {
  VisibilityGraph g;
  g.adjacency.resize(n);
  for (auto [a, b] : edges) {
    if (a >= n || b >= n || a == b) throw std::invalid_argument("edge endpoint out of range");
    g.adjacency[a].push_back(b);
    g.adjacency[b].push_back(a);
  }
  for (auto& adj : g.adjacency) {
    std::sort(adj.begin(), adj.end());
    adj.erase(std::unique(adj.begin(), adj.end()), adj.end());
  }
  return g;
}

VisibilityGraph build_visibility_graph(const Environment& env, const Web& web) {
  const std::vector<Point> pts = web.points();
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  for (std::size_t a = 0; a < pts.size(); ++a) {
    for (std::size_t b = a + 1; b < pts.size(); ++b) {
      if (contains_segment(env, pts[a], pts[b])) edges.emplace_back(a, b);
    }
  }
  VisibilityGraph g = VisibilityGraph::from_edges(pts.size(), edges);
  if (!g.connected()) {
    throw SamplingError(SamplingErrc::DisconnectedWeb,
                        "DisconnectedWeb: visibility graph over " + std::to_string(pts.size()) +
                            " web points is not connected");
  }
  return g;
}

std::vector<std::size_t> dfs_walk(const VisibilityGraph& graph, std::size_t root) {
  if (root >= graph.size()) throw std::invalid_argument("walk root out of range");
  std::vector<char> seen(graph.size(), 0);
  std::vector<std::pair<std::size_t, std::size_t>> stack{{root, 0}};  // vertex, next neighbour slot
  std::vector<std::size_t> walk{root};
  seen[root] = 1;
  while (!stack.empty()) {
    auto& [v, slot] = stack.back();
    if (slot < graph.adjacency[v].size()) {
      const std::size_t u = graph.adjacency[v][slot++];
      if (seen[u]) continue;
      seen[u] = 1;
      walk.push_back(u);
      stack.emplace_back(u, 0);
      continue;
    }
    stack.pop_back();
    if (!stack.empty()) walk.push_back(stack.back().first);
  }
  // The closing return to the root is not part of the walk.
  if (walk.size() > 1) walk.pop_back();
  return walk;
}

std::size_t pick_walk_root(std::size_t count, std::uint64_t web_seed) {
  Rng pick(web_seed ^ 0x9e3779b97f4a7c15ULL);
  return std::uniform_int_distribution<std::size_t>(0, count - 1)(pick);
}

std::size_t rcs_spacing(std::size_t d, std::size_t n) { return (d + n - 1) / n; }

std::size_t rcs_sample_count(std::size_t d, std::size_t n) { return 1 + (2 * d + n - 1) / n; }

std::size_t rcs_index(std::size_t d, std::size_t n, std::size_t i, std::size_t k) {
  return (i * rcs_spacing(d, n) + k) % d;
}

SampleStream::SampleStream(const Environment& env, SamplerKind kind, std::size_t n, std::uint64_t seed,
                           WebOptions options)
    : env_(&env), kind_(kind), n_(n), seed_(seed), options_(options) {
  if (n == 0 || (kind == SamplerKind::Rcs && n < 2)) {
    throw std::invalid_argument("sampler needs " + std::string(kind == SamplerKind::Rcs ? "n >= 2" : "n >= 1") +
                                ", got " + std::to_string(n));
  }
}

void SampleStream::refill(const Deadline& deadline) {
  for (;;) {
    const std::uint64_t web_seed = seed_ + next_web_++;
    try {
      Web web = build_web(*env_, web_seed, options_, deadline);
      const VisibilityGraph graph = build_visibility_graph(*env_, web);
      walk_ = dfs_walk(graph, pick_walk_root(graph.size(), web_seed));
      web_ = std::move(web);
      points_ = web_.points();
      rng_.seed(web_seed ^ 0xd1b54a32d192ed03ULL);
      budget_ = rcs_sample_count(walk_.size(), n_);
      k_ = 0;
      ++webs_built_;
      return;
    } catch (const SamplingError&) {
      ++webs_rejected_;
    }
  }
}

Jpc SampleStream::next(const Deadline& deadline) {
  if (k_ >= budget_) refill(deadline);
  Jpc jpc;
  jpc.positions.reserve(n_);
  if (kind_ == SamplerKind::Rcs) {
    const std::size_t d = walk_.size();
    for (std::size_t i = 0; i < n_; ++i) jpc.positions.push_back(points_[walk_[rcs_index(d, n_, i, k_)]]);
  } else {
    std::uniform_int_distribution<std::size_t> pick(0, points_.size() - 1);
    for (std::size_t i = 0; i < n_; ++i) jpc.positions.push_back(points_[pick(rng_)]);
  }
  ++k_;
  ++drawn_;
  return jpc;
}

}  // namespace rpe
