#include "rpe/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace rpe {

namespace {

// Signed distance of c from the directed line through a and b (positive = left).
double side_distance(Point a, Point b, Point c) {
  const Point ab = b - a;
  const double len = norm(ab);
  if (len == 0.0) return distance(a, c);
  return cross(ab, c - a) / len;
}

bool segments_touch(Point a, Point b, Point c, Point d, double eps) {
  const double o1 = side_distance(a, b, c);
  const double o2 = side_distance(a, b, d);
  const double o3 = side_distance(c, d, a);
  const double o4 = side_distance(c, d, b);
  const bool proper = ((o1 > eps && o2 < -eps) || (o1 < -eps && o2 > eps)) &&
                      ((o3 > eps && o4 < -eps) || (o3 < -eps && o4 > eps));
  if (proper) return true;
  return distance_to_segment(c, a, b) <= eps || distance_to_segment(d, a, b) <= eps ||
         distance_to_segment(a, c, d) <= eps || distance_to_segment(b, c, d) <= eps;
}

std::string ring_name(std::size_t ring) {
  return ring == 0 ? std::string("outer") : "hole " + std::to_string(ring - 1);
}

[[noreturn]] void fail(GeometryErrc code, const std::string& msg) {
  throw GeometryError(code, std::string(to_string(code)) + ": " + msg);
}

void check_ring_shape(const Ring& ring, std::size_t r, double eps) {
  if (ring.size() < 3) fail(GeometryErrc::BadInput, ring_name(r) + " has fewer than 3 vertices");
  for (std::size_t i = 0; i < ring.size(); ++i) {
    if (!std::isfinite(ring[i].x) || !std::isfinite(ring[i].y)) {
      fail(GeometryErrc::BadInput, ring_name(r) + " vertex " + std::to_string(i) + " is not finite");
    }
  }
  for (std::size_t i = 0; i < ring.size(); ++i) {
    for (std::size_t j = i + 1; j < ring.size(); ++j) {
      if (distance(ring[i], ring[j]) <= eps) {
        fail(GeometryErrc::DegenerateEdge, ring_name(r) + " vertices " + std::to_string(i) + " and " +
                                               std::to_string(j) + " are closer than epsilon");
      }
    }
  }
  const std::size_t m = ring.size();
  for (std::size_t i = 0; i < m; ++i) {
    const Point a = ring[i], b = ring[(i + 1) % m];
    for (std::size_t j = i + 1; j < m; ++j) {
      const Point c = ring[j], d = ring[(j + 1) % m];
      const bool next = j == i + 1;
      const bool prev = (j + 1) % m == i;
      bool hit = false;
      if (next) {
        // Shared vertex b == c; the far endpoints must stay off the other edge.
        hit = distance_to_segment(d, a, b) <= eps || distance_to_segment(a, c, d) <= eps;
      } else if (prev) {
        hit = distance_to_segment(c, a, b) <= eps || distance_to_segment(b, c, d) <= eps;
      } else {
        hit = segments_touch(a, b, c, d, eps);
      }
      if (hit) {
        fail(GeometryErrc::SelfIntersecting, ring_name(r) + " edges " + std::to_string(i) + " and " +
                                                 std::to_string(j) + " intersect");
      }
    }
  }
}

bool rings_touch(const Ring& p, const Ring& q, double eps, std::size_t* pi, std::size_t* qi) {
  for (std::size_t i = 0; i < p.size(); ++i) {
    for (std::size_t j = 0; j < q.size(); ++j) {
      if (segments_touch(p[i], p[(i + 1) % p.size()], q[j], q[(j + 1) % q.size()], eps)) {
        *pi = i;
        *qi = j;
        return true;
      }
    }
  }
  return false;
}

}  // namespace

const char* to_string(GeometryErrc code) {
  switch (code) {
    case GeometryErrc::BadInput: return "BadInput";
    case GeometryErrc::SelfIntersecting: return "SelfIntersecting";
    case GeometryErrc::HoleOutsideOuter: return "HoleOutsideOuter";
    case GeometryErrc::OverlappingHoles: return "OverlappingHoles";
    case GeometryErrc::DegenerateEdge: return "DegenerateEdge";
    case GeometryErrc::ViewpointOutside: return "ViewpointOutside";
    case GeometryErrc::PointOutside: return "PointOutside";
  }
  return "Unknown";
}

double distance_to_segment(Point p, Point a, Point b) {
  const Point ab = b - a;
  const double len2 = dot(ab, ab);
  if (len2 == 0.0) return distance(p, a);
  const double t = std::clamp(dot(p - a, ab) / len2, 0.0, 1.0);
  return distance(p, a + t * ab);
}

double signed_area(const Ring& ring) {
  double twice = 0.0;
  for (std::size_t i = 0; i < ring.size(); ++i) {
    twice += cross(ring[i], ring[(i + 1) % ring.size()]);
  }
  return 0.5 * twice;
}

bool ring_contains(const Ring& ring, Point p, double eps) {
  bool inside = false;
  const std::size_t m = ring.size();
  for (std::size_t i = 0, j = m - 1; i < m; j = i++) {
    const Point a = ring[j], b = ring[i];
    if (distance_to_segment(p, a, b) <= eps) return true;
    if ((a.y > p.y) != (b.y > p.y)) {
      const double x = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
      if (p.x < x) inside = !inside;
    }
  }
  return inside;
}

Environment Environment::validate(RawEnvironment raw) {
  auto strip_closure = [](Ring& ring) {
    if (ring.size() > 1 && ring.front() == ring.back()) ring.pop_back();
  };
  strip_closure(raw.outer);
  for (auto& h : raw.holes) strip_closure(h);

  if (raw.outer.size() < 3) fail(GeometryErrc::BadInput, "outer has fewer than 3 vertices");
  Box box{std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity(),
          -std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
  for (const Point& p : raw.outer) {
    if (!std::isfinite(p.x) || !std::isfinite(p.y)) fail(GeometryErrc::BadInput, "outer vertex is not finite");
    box.min_x = std::min(box.min_x, p.x);
    box.min_y = std::min(box.min_y, p.y);
    box.max_x = std::max(box.max_x, p.x);
    box.max_y = std::max(box.max_y, p.y);
  }
  const double diameter = std::hypot(box.width(), box.height());
  if (!(diameter > 0.0)) fail(GeometryErrc::BadInput, "outer ring has zero extent");
  const double eps = raw.epsilon.value_or(1e-9 * diameter);
  if (!(eps > 0.0) || !std::isfinite(eps)) fail(GeometryErrc::BadInput, "epsilon must be positive");

  check_ring_shape(raw.outer, 0, eps);
  for (std::size_t h = 0; h < raw.holes.size(); ++h) check_ring_shape(raw.holes[h], h + 1, eps);

  if (signed_area(raw.outer) < 0.0) std::reverse(raw.outer.begin(), raw.outer.end());
  for (auto& h : raw.holes) {
    if (signed_area(h) > 0.0) std::reverse(h.begin(), h.end());
  }

  for (std::size_t h = 0; h < raw.holes.size(); ++h) {
    std::size_t i = 0, j = 0;
    if (rings_touch(raw.holes[h], raw.outer, eps, &i, &j)) {
      fail(GeometryErrc::HoleOutsideOuter, "hole " + std::to_string(h) + " edge " + std::to_string(i) +
                                               " meets outer edge " + std::to_string(j));
    }
    if (!ring_contains(raw.outer, raw.holes[h][0], 0.0)) {
      fail(GeometryErrc::HoleOutsideOuter, "hole " + std::to_string(h) + " vertex 0 lies outside the outer ring");
    }
  }
  for (std::size_t h = 0; h < raw.holes.size(); ++h) {
    for (std::size_t k = h + 1; k < raw.holes.size(); ++k) {
      std::size_t i = 0, j = 0;
      if (rings_touch(raw.holes[h], raw.holes[k], eps, &i, &j)) {
        fail(GeometryErrc::OverlappingHoles, "hole " + std::to_string(h) + " edge " + std::to_string(i) +
                                                 " meets hole " + std::to_string(k) + " edge " + std::to_string(j));
      }
      if (ring_contains(raw.holes[k], raw.holes[h][0], 0.0) || ring_contains(raw.holes[h], raw.holes[k][0], 0.0)) {
        fail(GeometryErrc::OverlappingHoles,
             "holes " + std::to_string(h) + " and " + std::to_string(k) + " are nested");
      }
    }
  }

  Environment env;
  env.outer_ = std::move(raw.outer);
  env.holes_ = std::move(raw.holes);
  env.epsilon_ = eps;
  env.bounds_ = box;
  env.diameter_ = diameter;

  auto add_ring = [&env](const Ring& ring, std::size_t r) {
    for (std::size_t i = 0; i < ring.size(); ++i) {
      env.edges_.push_back(Edge{ring[i], ring[(i + 1) % ring.size()], r, i});
    }
  };
  add_ring(env.outer_, 0);
  for (std::size_t h = 0; h < env.holes_.size(); ++h) add_ring(env.holes_[h], h + 1);

  // A vertex within epsilon of a non-incident edge (of any ring) is a sub-epsilon feature.
  for (const Edge& e : env.edges_) {
    for (const Edge& f : env.edges_) {
      if (&e == &f) continue;
      if (f.ring == e.ring && (f.a == e.a || f.a == e.b)) continue;
      if (distance_to_segment(f.a, e.a, e.b) <= eps) {
        fail(GeometryErrc::DegenerateEdge, ring_name(f.ring) + " vertex " + std::to_string(f.index) +
                                               " lies within epsilon of " + ring_name(e.ring) + " edge " +
                                               std::to_string(e.index));
      }
    }
  }

  env.area_ = signed_area(env.outer_);
  for (const Ring& h : env.holes_) env.area_ += signed_area(h);

  const double half = 0.5 * std::max(box.width(), box.height());
  env.frame_.cx = 0.5 * (box.min_x + box.max_x);
  env.frame_.cy = 0.5 * (box.min_y + box.max_y);
  env.frame_.scale = static_cast<double>(1 << 28) / half;
  env.int_paths_.push_back(to_lattice(env.frame_, env.outer_));
  for (const Ring& h : env.holes_) env.int_paths_.push_back(to_lattice(env.frame_, h));
  env.inflation_ = 4.0;
  env.area_floor_ = 1e-10 * env.area_ * env.frame_.scale * env.frame_.scale;
  return env;
}

bool contains_point(const Environment& env, Point p) {
  const double eps = env.epsilon();
  bool inside = false;
  for (const Edge& e : env.edges()) {
    if (distance_to_segment(p, e.a, e.b) <= eps) return true;
    if ((e.a.y > p.y) != (e.b.y > p.y)) {
      const double x = e.a.x + (p.y - e.a.y) * (e.b.x - e.a.x) / (e.b.y - e.a.y);
      if (p.x < x) inside = !inside;
    }
  }
  return inside;
}

bool contains_segment(const Environment& env, Point a, Point b) {
  if (!contains_point(env, a) || !contains_point(env, b)) return false;
  const double eps = env.epsilon();
  const Point ab = b - a;
  const double len = norm(ab);
  if (len <= eps) return true;

  std::vector<double> cuts{0.0, 1.0};
  for (const Edge& e : env.edges()) {
    const double o1 = side_distance(a, b, e.a);
    const double o2 = side_distance(a, b, e.b);
    if ((o1 > eps && o2 > eps) || (o1 < -eps && o2 < -eps)) continue;
    const double o3 = side_distance(e.a, e.b, a);
    const double o4 = side_distance(e.a, e.b, b);
    if (((o1 > eps && o2 < -eps) || (o1 < -eps && o2 > eps)) &&
        ((o3 > eps && o4 < -eps) || (o3 < -eps && o4 > eps))) {
      return false;
    }
    for (Point v : {e.a, e.b}) {
      if (distance_to_segment(v, a, b) <= eps) {
        cuts.push_back(std::clamp(dot(v - a, ab) / (len * len), 0.0, 1.0));
      }
    }
  }
  std::sort(cuts.begin(), cuts.end());
  const double min_gap = eps / len;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    if (cuts[i + 1] - cuts[i] <= min_gap) continue;
    if (!contains_point(env, lerp(a, b, 0.5 * (cuts[i] + cuts[i + 1])))) return false;
  }
  return true;
}

ClipperLib::Path to_lattice(const IntFrame& frame, const Ring& ring) {
  ClipperLib::Path path;
  path.reserve(ring.size());
  for (const Point& p : ring) path.push_back(frame.to_int(p));
  return path;
}

}  // namespace rpe
