#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "clipper.hpp"

namespace rpe {

struct Point {
  double x{0.0};
  double y{0.0};

  friend bool operator==(const Point&, const Point&) = default;
};

inline Point operator+(Point a, Point b) { return {a.x + b.x, a.y + b.y}; }
inline Point operator-(Point a, Point b) { return {a.x - b.x, a.y - b.y}; }
inline Point operator*(double s, Point a) { return {s * a.x, s * a.y}; }

inline double dot(Point a, Point b) { return a.x * b.x + a.y * b.y; }
inline double cross(Point a, Point b) { return a.x * b.y - a.y * b.x; }
inline double norm(Point a) { return std::hypot(a.x, a.y); }
inline double distance(Point a, Point b) { return norm(a - b); }

/// Linear interpolation that returns `a` exactly at t = 0 and `b` exactly at t = 1.
inline Point lerp(Point a, Point b, double t) {
  return {(1.0 - t) * a.x + t * b.x, (1.0 - t) * a.y + t * b.y};
}

double distance_to_segment(Point p, Point a, Point b);

using Ring = std::vector<Point>;

/// Signed area, positive for counter-clockwise rings.
double signed_area(const Ring& ring);

struct Box {
  double min_x{0.0}, min_y{0.0}, max_x{0.0}, max_y{0.0};
  double width() const { return max_x - min_x; }
  double height() const { return max_y - min_y; }
};

enum class GeometryErrc {
  BadInput,
  SelfIntersecting,
  HoleOutsideOuter,
  OverlappingHoles,
  DegenerateEdge,
  ViewpointOutside,
  PointOutside,
};

const char* to_string(GeometryErrc code);

class GeometryError : public std::runtime_error {
 public:
  GeometryError(GeometryErrc code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  GeometryErrc code() const noexcept { return code_; }

 private:
  GeometryErrc code_;
};

/// One directed boundary edge. Free space lies to its left.
struct Edge {
  Point a;
  Point b;
  std::size_t ring{0};   // 0 = outer, k = hole k-1
  std::size_t index{0};  // index of `a` within its ring
};

/// Maps real coordinates onto the integer lattice used for polygon clipping.
struct IntFrame {
  double cx{0.0}, cy{0.0}, scale{1.0};

  ClipperLib::IntPoint to_int(Point p) const {
    return {static_cast<ClipperLib::cInt>(std::llround((p.x - cx) * scale)),
            static_cast<ClipperLib::cInt>(std::llround((p.y - cy) * scale))};
  }
  Point to_real(const ClipperLib::IntPoint& p) const {
    return {static_cast<double>(p.X) / scale + cx, static_cast<double>(p.Y) / scale + cy};
  }
};

/// Raw vertex lists as read from disk, before validation.
struct RawEnvironment {
  Ring outer;
  std::vector<Ring> holes;
  std::optional<double> epsilon;
};

/// The free space F: a simple outer polygon minus pairwise-disjoint simple holes.
/// Immutable once constructed; every incidence predicate uses `epsilon()`.
class Environment {
 public:
  /// Checks every invariant and normalizes orientation (outer CCW, holes CW).
  /// Throws GeometryError naming the offending ring/vertex/edge.
  static Environment validate(RawEnvironment raw);

  const Ring& outer() const { return outer_; }
  const std::vector<Ring>& holes() const { return holes_; }
  std::span<const Edge> edges() const { return edges_; }
  double epsilon() const { return epsilon_; }
  double area() const { return area_; }
  double diameter() const { return diameter_; }
  const Box& bounds() const { return bounds_; }
  std::size_t vertex_count() const { return edges_.size(); }
  /// Edge leaving the end vertex of edge k, and edge arriving at its start vertex.
  std::size_t next_edge(std::size_t k) const {
    const Edge& e = edges_[k];
    return e.index + 1 == ring_size(e.ring) ? k - e.index : k + 1;
  }
  std::size_t prev_edge(std::size_t k) const {
    const Edge& e = edges_[k];
    return e.index == 0 ? k + ring_size(e.ring) - 1 : k - 1;
  }

  const IntFrame& frame() const { return frame_; }
  /// Outer ring followed by the holes, on the integer lattice.
  const ClipperLib::Paths& int_paths() const { return int_paths_; }
  /// Integer-lattice inflation applied to visibility polygons before subtraction.
  double inflation() const { return inflation_; }
  /// Shadow components (and overlaps) below this lattice area are treated as empty.
  double area_floor() const { return area_floor_; }

 private:
  Environment() = default;
  std::size_t ring_size(std::size_t ring) const { return ring == 0 ? outer_.size() : holes_[ring - 1].size(); }

  Ring outer_;
  std::vector<Ring> holes_;
  std::vector<Edge> edges_;
  double epsilon_{0.0};
  double area_{0.0};
  double diameter_{0.0};
  Box bounds_;
  IntFrame frame_;
  ClipperLib::Paths int_paths_;
  double inflation_{4.0};
  double area_floor_{0.0};
};

/// Closed membership in F; points within epsilon of the boundary count as inside.
bool contains_point(const Environment& env, Point p);

/// True iff the closed segment ab lies in F. Grazing reflex vertices and sliding
/// along edges is allowed.
bool contains_segment(const Environment& env, Point a, Point b);

/// Closed point-in-ring test (even-odd), with an absolute boundary tolerance.
bool ring_contains(const Ring& ring, Point p, double eps);

struct VisPolygon {
  Point viewpoint;
  Ring boundary;  // counter-clockwise, star-shaped about viewpoint
  // Per boundary vertex: k for environment vertex k (the start of edge k),
  // vertex_count() + k for a point inside edge k, -1 for the viewpoint itself.
  std::vector<int> features;

  bool contains(Point p, double eps) const { return ring_contains(boundary, p, eps); }
};

/// The set of points of F seen from q. Throws ViewpointOutside when q is not in F.
VisPolygon visibility_polygon(const Environment& env, Point q);

/// A connected polygonal region with holes, stored on the integer lattice.
/// `paths[0]` is the outer boundary; the rest are holes.
struct Region {
  ClipperLib::Paths paths;
  double lattice_area{0.0};
  ClipperLib::IntPoint min_vertex{0, 0};
  ClipperLib::IntPoint bbox_min{0, 0};
  ClipperLib::IntPoint bbox_max{0, 0};

  double area(const IntFrame& frame) const { return lattice_area / (frame.scale * frame.scale); }
  bool contains(const IntFrame& frame, Point p) const;
  std::vector<Ring> rings(const IntFrame& frame) const;
};

struct Shadow {
  Region region;
  std::size_t id{0};
};

/// Connected components of F minus the union of the viewpoints' visibility
/// polygons, in canonical order.
struct ShadowSet {
  std::vector<Shadow> shadows;
  std::vector<Point> source_points;

  std::size_t size() const { return shadows.size(); }
  bool empty() const { return shadows.empty(); }
};

ShadowSet shadow_set(const Environment& env, std::span<const Point> points);

/// Same as shadow_set, but reuses already computed visibility polygons.
ShadowSet shadow_set_from(const Environment& env, std::span<const VisPolygon> polygons);

/// Splits a clipper PolyTree into connected regions, dropping any below `area_floor`,
/// sorted canonically by their lexicographically smallest vertex.
std::vector<Region> regions_from_tree(const ClipperLib::PolyTree& tree, double area_floor);

/// Lattice area of the intersection of two regions.
double overlap_area(const Region& a, const Region& b);

ClipperLib::Path to_lattice(const IntFrame& frame, const Ring& ring);

}  // namespace rpe
