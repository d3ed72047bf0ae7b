#include <algorithm>
#include <stdexcept>

#include "rpe/shadows.hpp"

namespace rpe {

const char* to_string(EventKind kind) {
  switch (kind) {
    case EventKind::Appeared: return "appeared";
    case EventKind::Persisted: return "persisted";
    case EventKind::Merged: return "merged";
    case EventKind::Split: return "split";
    case EventKind::Disappeared: return "disappeared";
  }
  return "unknown";
}

OverlapGraph overlap_graph(const Environment& env, const ShadowSet& prev, const ShadowSet& next) {
  OverlapGraph g;
  g.adjacency = InfluenceRelation(prev.size(), next.size());
  std::vector<double> best_prev(prev.size(), 0.0), best_next(next.size(), 0.0);
  for (std::size_t c = 0; c < prev.size(); ++c) {
    for (std::size_t b = 0; b < next.size(); ++b) {
      const double area = overlap_area(prev.shadows[c].region, next.shadows[b].region);
      if (area <= 0.0) continue;
      g.adjacency.set(c, b);
      best_prev[c] = std::max(best_prev[c], area);
      best_next[b] = std::max(best_next[b], area);
    }
  }
  const double floor = env.area_floor();
  for (double a : best_prev) g.ambiguous = g.ambiguous || (a > 0.0 && a <= floor);
  for (double a : best_next) g.ambiguous = g.ambiguous || (a > 0.0 && a <= floor);

  std::vector<std::size_t> in_degree(next.size(), 0);
  for (std::size_t c = 0; c < prev.size(); ++c) {
    const std::size_t out = g.adjacency.reach[c].count();
    if (out == 0 || out > 1) ++g.event_count;  // disappeared or split
    for (std::size_t b = 0; b < next.size(); ++b) in_degree[b] += g.adjacency.at(c, b) ? 1 : 0;
  }
  for (std::size_t d : in_degree) {
    if (d == 0 || d > 1) ++g.event_count;  // appeared or merged
  }
  return g;
}

std::vector<ShadowEvent> classify_events(const Environment& env, const ShadowSet& prev, const ShadowSet& next) {
  const OverlapGraph g = overlap_graph(env, prev, next);
  if (g.ambiguous) {
    throw ShadowsError(ShadowsErrc::AmbiguousCorrespondence,
                       "AmbiguousCorrespondence: a shadow overlaps its candidates only below the area floor");
  }
  std::vector<ShadowEvent> events;
  for (std::size_t b = 0; b < next.size(); ++b) {
    ShadowEvent ev;
    ev.next = b;
    for (std::size_t c = 0; c < prev.size(); ++c) {
      if (g.adjacency.at(c, b)) ev.prev.push_back(c);
    }
    if (ev.prev.empty()) {
      ev.kind = EventKind::Appeared;
    } else if (ev.prev.size() > 1) {
      ev.kind = EventKind::Merged;
    } else if (g.adjacency.reach[ev.prev.front()].count() > 1) {
      ev.kind = EventKind::Split;
    } else {
      ev.kind = EventKind::Persisted;
    }
    events.push_back(std::move(ev));
  }
  for (std::size_t c = 0; c < prev.size(); ++c) {
    if (g.adjacency.reach[c].all_clear()) events.push_back(ShadowEvent{EventKind::Disappeared, std::nullopt, {c}});
  }
  return events;
}

namespace {

// Strict crossing: touching or collinear segments do not count.
bool segments_cross(Point a, Point b, Point c, Point d, double eps) {
  const double d1 = cross(b - a, c - a) / std::max(norm(b - a), eps);
  const double d2 = cross(b - a, d - a) / std::max(norm(b - a), eps);
  const double d3 = cross(d - c, a - c) / std::max(norm(d - c), eps);
  const double d4 = cross(d - c, b - c) / std::max(norm(d - c), eps);
  return ((d1 > eps && d2 < -eps) || (d1 < -eps && d2 > eps)) && ((d3 > eps && d4 < -eps) || (d3 < -eps && d4 > eps));
}

}  // namespace

VisibilitySignature visibility_signature(const Environment& env, std::span<const VisPolygon> polygons) {
  const int n = static_cast<int>(env.vertex_count());
  // Boundary edges a feature lies on: a vertex touches two, an edge point one.
  auto incident = [&](int f) -> std::array<int, 2> {
    if (f < n) return {f, static_cast<int>(env.prev_edge(f))};
    return {f - n, f - n};
  };
  auto along_wall = [&](int f, int g) {
    const auto a = incident(f);
    const auto b = incident(g);
    return a[0] == b[0] || a[0] == b[1] || a[1] == b[0] || a[1] == b[1];
  };

  struct Window {
    std::array<int, 3> key;
    Point a, b;
  };
  std::vector<Window> all;
  for (std::size_t v = 0; v < polygons.size(); ++v) {
    const VisPolygon& poly = polygons[v];
    const std::size_t m = poly.boundary.size();
    if (poly.features.size() != m) throw std::invalid_argument("visibility polygon carries no boundary features");
    for (std::size_t k = 0; k < m; ++k) {
      const std::size_t l = (k + 1) % m;
      int f = poly.features[k], g = poly.features[l];
      if (f < 0 || g < 0 || along_wall(f, g)) continue;
      Point a = poly.boundary[k], b = poly.boundary[l];
      if (distance(poly.viewpoint, a) > distance(poly.viewpoint, b)) {
        std::swap(a, b);
        std::swap(f, g);
      }
      all.push_back({{static_cast<int>(v), f, g}, a, b});
    }
  }
  std::sort(all.begin(), all.end(), [](const Window& x, const Window& y) { return x.key < y.key; });

  VisibilitySignature sig;
  for (const Window& w : all) sig.windows.push_back(w.key);
  for (std::size_t i = 0; i < all.size(); ++i) {
    for (std::size_t j = i + 1; j < all.size(); ++j) {
      if (all[i].key[0] == all[j].key[0]) continue;
      if (segments_cross(all[i].a, all[i].b, all[j].a, all[j].b, env.epsilon())) {
        sig.crossings.emplace_back(static_cast<int>(i), static_cast<int>(j));
      }
    }
  }
  return sig;
}

namespace {

class MotionTracker {
 public:
  MotionTracker(const Environment& env, std::span<const Point> from, std::span<const Point> to,
                const RelationOptions& options, const Deadline& deadline, RelationStats& stats)
      : env_(env), from_(from), to_(to), options_(options), deadline_(deadline), stats_(stats) {}

  std::vector<VisPolygon> polygons(double t) const {
    std::vector<VisPolygon> out;
    out.reserve(from_.size());
    for (std::size_t j = 0; j < from_.size(); ++j) out.push_back(visibility_polygon(env_, lerp(from_[j], to_[j], t)));
    return out;
  }

  ShadowSet at(double t) {
    ++stats_.shadow_sets;
    return shadow_set_from(env_, polygons(t));
  }

  VisibilitySignature signature(double t) const { return visibility_signature(env_, polygons(t)); }

  // Adds to `times` both ends of every interval of width at most
  // critical_step that holds a change of the visibility signature.
  void locate(double lo, const VisibilitySignature& s_lo, double hi, const VisibilitySignature& s_hi,
              std::vector<double>& times) {
    if (s_lo == s_hi) return;
    deadline_.check();
    if (hi - lo <= options_.critical_step) {
      ++stats_.critical_intervals;
      times.push_back(lo);
      times.push_back(hi);
      return;
    }
    const double mid = 0.5 * (lo + hi);
    const VisibilitySignature s_mid = signature(mid);
    locate(lo, s_lo, mid, s_mid, times);
    locate(mid, s_mid, hi, s_hi, times);
  }

  void start(std::size_t n) { reach_ = InfluenceRelation::identity(n); }

  // Advances the accumulated relation across [lo, hi], bisecting intervals that
  // hold more than one shadow event or an unresolved correspondence.
  void advance(double lo, const ShadowSet& s_lo, double hi, const ShadowSet& s_hi) {
    deadline_.check();
    OverlapGraph g = overlap_graph(env_, s_lo, s_hi);
    if ((g.ambiguous || g.event_count > 1) && hi - lo > options_.min_step) {
      ++stats_.bisections;
      const double mid = 0.5 * (lo + hi);
      const ShadowSet s_mid = at(mid);
      advance(lo, s_lo, mid, s_mid);
      advance(mid, s_mid, hi, s_hi);
      return;
    }
    if (g.ambiguous) {
      throw ShadowsError(ShadowsErrc::AmbiguousCorrespondence,
                         "AmbiguousCorrespondence: unresolved shadow correspondence near t=" + std::to_string(lo));
    }
    if (g.event_count > 1) ++stats_.coincident_events;
    InfluenceRelation next(reach_.rows, g.adjacency.cols);
    for (std::size_t a = 0; a < reach_.rows; ++a) {
      for (std::size_t c = 0; c < reach_.cols; ++c) {
        if (reach_.at(a, c)) next.reach[a] |= g.adjacency.reach[c];
      }
    }
    reach_ = std::move(next);
  }

  InfluenceRelation result() && { return std::move(reach_); }

 private:
  const Environment& env_;
  std::span<const Point> from_;
  std::span<const Point> to_;
  const RelationOptions& options_;
  const Deadline& deadline_;
  RelationStats& stats_;
  InfluenceRelation reach_;
};

}  // namespace

InfluenceRelation influence_relation(const Environment& env, std::span<const Point> from, std::span<const Point> to,
                                     const RelationOptions& options, const Deadline& deadline,
                                     RelationStats* stats) {
  if (from.size() != to.size()) {
    throw ShadowsError(ShadowsErrc::LengthMismatch, "LengthMismatch: motion endpoints have " +
                                                        std::to_string(from.size()) + " and " +
                                                        std::to_string(to.size()) + " points");
  }
  for (std::size_t j = 0; j < from.size(); ++j) {
    if (!contains_segment(env, from[j], to[j])) {
      throw ShadowsError(ShadowsErrc::InfeasibleEdge,
                         "InfeasibleEdge: motion of point " + std::to_string(j) + " leaves the environment");
    }
  }
  RelationStats local;
  RelationStats& st = stats ? *stats : local;
  MotionTracker tracker(env, from, to, options, deadline, st);

  ShadowSet current = tracker.at(0.0);
  tracker.start(current.size());
  if (std::equal(from.begin(), from.end(), to.begin())) return std::move(tracker).result();

  const int steps = std::max(1, options.initial_steps);
  std::vector<double> times;
  for (int k = 0; k <= steps; ++k) times.push_back(k == steps ? 1.0 : static_cast<double>(k) / steps);
  {
    VisibilitySignature s_lo = tracker.signature(0.0);
    for (int k = 1; k <= steps; ++k) {
      VisibilitySignature s_hi = tracker.signature(times[k]);
      tracker.locate(times[k - 1], s_lo, times[k], s_hi, times);
      s_lo = std::move(s_hi);
    }
  }
  std::sort(times.begin(), times.end());
  times.erase(std::unique(times.begin(), times.end()), times.end());

  for (std::size_t k = 1; k < times.size(); ++k) {
    ShadowSet next = tracker.at(times[k]);
    tracker.advance(times[k - 1], current, times[k], next);
    current = std::move(next);
  }
  return std::move(tracker).result();
}

}  // namespace rpe
