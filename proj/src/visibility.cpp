#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "rpe/geometry.hpp"

// Rotational sweep around the viewpoint. Every environment vertex is an event
// direction; at each event the visible distance is evaluated just clockwise
// and just counter-clockwise of the ray, and between events the visible
// boundary is a single edge, so joining the event points is exact.

namespace rpe {

namespace {

struct BoundaryContact {
  std::vector<const Edge*> edges;  // edges passing within epsilon of the viewpoint
  bool at_vertex{false};
  bool convex{false};
};

BoundaryContact find_contact(const Environment& env, Point q) {
  BoundaryContact contact;
  const double eps = env.epsilon();
  const auto edges = env.edges();
  for (const Edge& e : edges) {
    if (distance(e.b, q) <= eps) {
      // q sits on vertex e.b: collect the edge ending there and the one leaving it.
      const Edge* incoming = &e;
      const Edge* outgoing = nullptr;
      for (const Edge& f : edges) {
        if (f.ring == e.ring && f.a == e.b) outgoing = &f;
      }
      contact.edges = {incoming, outgoing};
      contact.at_vertex = true;
      contact.convex = cross(incoming->b - incoming->a, outgoing->b - outgoing->a) > 0.0;
      return contact;
    }
  }
  for (const Edge& e : edges) {
    if (distance_to_segment(q, e.a, e.b) <= eps) contact.edges.push_back(&e);
  }
  return contact;
}

// Whether the ray direction, rotated infinitesimally toward `side` (+1 = CCW),
// points to the obstacle side of edge e.
bool points_into_obstacle(const Edge& e, Point dir, int side) {
  const Point ev = e.b - e.a;
  const double s = cross(ev, dir) / norm(ev);
  if (s < -1e-12) return true;
  if (s > 1e-12) return false;
  return side * dot(ev, dir) < 0.0;
}

bool blocked_at_contact(const BoundaryContact& contact, Point dir, int side) {
  if (contact.edges.empty()) return false;
  if (contact.at_vertex) {
    const bool a = points_into_obstacle(*contact.edges[0], dir, side);
    const bool b = points_into_obstacle(*contact.edges[1], dir, side);
    return contact.convex ? (a || b) : (a && b);
  }
  for (const Edge* e : contact.edges) {
    if (points_into_obstacle(*e, dir, side)) return true;
  }
  return false;
}

struct Hit {
  double r{std::numeric_limits<double>::infinity()};
  int feature{-1};
};

// First boundary feature met by rays rotated infinitesimally clockwise
// (hits[0]) and counter-clockwise (hits[1]) of the unit ray.
void cast(const Environment& env, const BoundaryContact& contact, Point q, Point dir, Hit hits[2]) {
  const double eps = env.epsilon();
  const auto edges = env.edges();
  const int n = static_cast<int>(edges.size());
  auto offer = [&](int side, double r, int feature) {
    Hit& h = hits[side > 0 ? 1 : 0];
    if (r < h.r) h = {r, feature};
  };
  for (int k = 0; k < n; ++k) {
    const Edge& e = edges[k];
    if (std::find(contact.edges.begin(), contact.edges.end(), &e) != contact.edges.end()) continue;
    const double sa = cross(dir, e.a - q);
    const double sb = cross(dir, e.b - q);
    const bool a_on = std::abs(sa) <= eps;
    const bool b_on = std::abs(sb) <= eps;
    if (a_on && b_on) continue;
    if (!a_on && !b_on && (sa > 0.0) == (sb > 0.0)) continue;
    const double ta = dot(e.a - q, dir);
    const double tb = dot(e.b - q, dir);
    if (a_on) {
      if (ta >= -eps) offer(sb > 0.0 ? 1 : -1, std::max(ta, 0.0), k);
      continue;
    }
    if (b_on) {
      if (tb >= -eps) offer(sa > 0.0 ? 1 : -1, std::max(tb, 0.0), static_cast<int>(env.next_edge(k)));
      continue;
    }
    const double t = ta + (tb - ta) * (sa / (sa - sb));
    if (t >= -eps) {
      offer(-1, std::max(t, 0.0), n + k);
      offer(1, std::max(t, 0.0), n + k);
    }
  }
}

}  // namespace

VisPolygon visibility_polygon(const Environment& env, Point q) {
  if (!contains_point(env, q)) {
    throw GeometryError(GeometryErrc::ViewpointOutside, "ViewpointOutside: viewpoint (" + std::to_string(q.x) +
                                                            ", " + std::to_string(q.y) + ") is not in F");
  }
  const double eps = env.epsilon();
  const BoundaryContact contact = find_contact(env, q);

  struct Event {
    double angle;
    Point rel;
    double dist;
  };
  std::vector<Event> events;
  events.reserve(env.vertex_count());
  for (const Edge& e : env.edges()) {
    const Point rel = e.a - q;
    const double d = norm(rel);
    if (d <= eps) continue;
    events.push_back({std::atan2(rel.y, rel.x), rel, d});
  }
  std::sort(events.begin(), events.end(), [](const Event& a, const Event& b) { return a.angle < b.angle; });

  VisPolygon out;
  out.viewpoint = q;
  const int n_vertices = static_cast<int>(env.vertex_count());
  auto push = [&](Point p, int feature) {
    if (out.boundary.empty() || distance(out.boundary.back(), p) > eps) {
      out.boundary.push_back(p);
      out.features.push_back(feature);
    } else if (feature >= 0 && feature < n_vertices) {
      out.features.back() = feature;
    }
  };

  std::size_t i = 0;
  while (i < events.size()) {
    // Group vertices lying on one ray; aim the ray at the farthest of them.
    std::size_t j = i + 1;
    std::size_t far = i;
    const Point u{events[i].rel.x / events[i].dist, events[i].rel.y / events[i].dist};
    while (j < events.size() && std::abs(cross(u, events[j].rel)) <= eps && dot(u, events[j].rel) > 0.0) {
      if (events[j].dist > events[far].dist) far = j;
      ++j;
    }
    const Point dir{events[far].rel.x / events[far].dist, events[far].rel.y / events[far].dist};
    Hit hits[2];
    cast(env, contact, q, dir, hits);
    for (int side : {-1, +1}) {
      Hit h = hits[side > 0 ? 1 : 0];
      if (blocked_at_contact(contact, dir, side)) {
        h = {0.0, -1};
      } else if (!std::isfinite(h.r)) {
        throw std::logic_error("visibility ray escaped the environment");
      }
      push(q + h.r * dir, h.feature);
    }
    i = j;
  }
  while (out.boundary.size() > 1 && distance(out.boundary.front(), out.boundary.back()) <= eps) {
    if (out.features.back() >= 0 && out.features.back() < n_vertices) out.features.front() = out.features.back();
    out.boundary.pop_back();
    out.features.pop_back();
  }
  return out;
}

}  // namespace rpe
