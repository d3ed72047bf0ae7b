#include <algorithm>
#include <cmath>
#include <tuple>

#include "rpe/geometry.hpp"

namespace rpe {

namespace {

void collect(const ClipperLib::PolyNode& outer, double area_floor, std::vector<Region>& out) {
  Region region;
  region.paths.push_back(outer.Contour);
  double area = std::abs(ClipperLib::Area(outer.Contour));
  for (const ClipperLib::PolyNode* hole : outer.Childs) {
    region.paths.push_back(hole->Contour);
    area -= std::abs(ClipperLib::Area(hole->Contour));
    for (const ClipperLib::PolyNode* island : hole->Childs) collect(*island, area_floor, out);
  }
  if (area <= area_floor || outer.Contour.empty()) return;
  region.lattice_area = area;
  region.min_vertex = outer.Contour.front();
  region.bbox_min = region.bbox_max = outer.Contour.front();
  for (const auto& p : outer.Contour) {
    if (std::tie(p.X, p.Y) < std::tie(region.min_vertex.X, region.min_vertex.Y)) region.min_vertex = p;
    region.bbox_min.X = std::min(region.bbox_min.X, p.X);
    region.bbox_min.Y = std::min(region.bbox_min.Y, p.Y);
    region.bbox_max.X = std::max(region.bbox_max.X, p.X);
    region.bbox_max.Y = std::max(region.bbox_max.Y, p.Y);
  }
  out.push_back(std::move(region));
}

}  // namespace

bool Region::contains(const IntFrame& frame, Point p) const {
  const ClipperLib::IntPoint ip = frame.to_int(p);
  if (paths.empty() || ClipperLib::PointInPolygon(ip, paths[0]) == 0) return false;
  for (std::size_t k = 1; k < paths.size(); ++k) {
    if (ClipperLib::PointInPolygon(ip, paths[k]) == 1) return false;
  }
  return true;
}

std::vector<Ring> Region::rings(const IntFrame& frame) const {
  std::vector<Ring> out;
  for (const auto& path : paths) {
    Ring ring;
    ring.reserve(path.size());
    for (const auto& p : path) ring.push_back(frame.to_real(p));
    out.push_back(std::move(ring));
  }
  return out;
}

std::vector<Region> regions_from_tree(const ClipperLib::PolyTree& tree, double area_floor) {
  std::vector<Region> out;
  for (const ClipperLib::PolyNode* node : tree.Childs) collect(*node, area_floor, out);
  std::sort(out.begin(), out.end(), [](const Region& a, const Region& b) {
    return std::tie(a.min_vertex.X, a.min_vertex.Y, a.lattice_area) <
           std::tie(b.min_vertex.X, b.min_vertex.Y, b.lattice_area);
  });
  return out;
}

double overlap_area(const Region& a, const Region& b) {
  if (a.bbox_max.X < b.bbox_min.X || b.bbox_max.X < a.bbox_min.X || a.bbox_max.Y < b.bbox_min.Y ||
      b.bbox_max.Y < a.bbox_min.Y) {
    return 0.0;
  }
  ClipperLib::Clipper clipper;
  clipper.AddPaths(a.paths, ClipperLib::ptSubject, true);
  clipper.AddPaths(b.paths, ClipperLib::ptClip, true);
  ClipperLib::Paths result;
  clipper.Execute(ClipperLib::ctIntersection, result, ClipperLib::pftEvenOdd, ClipperLib::pftEvenOdd);
  double area = 0.0;
  for (const auto& path : result) area += ClipperLib::Area(path);
  return std::abs(area);
}

ShadowSet shadow_set_from(const Environment& env, std::span<const VisPolygon> polygons) {
  ClipperLib::Clipper clipper;
  clipper.AddPaths(env.int_paths(), ClipperLib::ptSubject, true);
  if (!polygons.empty()) {
    ClipperLib::ClipperOffset offset;
    for (const VisPolygon& poly : polygons) {
      if (poly.boundary.size() < 3) continue;
      offset.AddPath(to_lattice(env.frame(), poly.boundary), ClipperLib::jtMiter, ClipperLib::etClosedPolygon);
    }
    ClipperLib::Paths inflated;
    offset.Execute(inflated, env.inflation());
    clipper.AddPaths(inflated, ClipperLib::ptClip, true);
  }
  ClipperLib::PolyTree tree;
  clipper.Execute(ClipperLib::ctDifference, tree, ClipperLib::pftEvenOdd, ClipperLib::pftNonZero);

  ShadowSet out;
  auto regions = regions_from_tree(tree, env.area_floor());
  out.shadows.reserve(regions.size());
  for (std::size_t i = 0; i < regions.size(); ++i) out.shadows.push_back(Shadow{std::move(regions[i]), i});
  out.source_points.reserve(polygons.size());
  for (const VisPolygon& poly : polygons) out.source_points.push_back(poly.viewpoint);
  return out;
}

ShadowSet shadow_set(const Environment& env, std::span<const Point> points) {
  std::vector<VisPolygon> polygons;
  polygons.reserve(points.size());
  for (const Point& p : points) {
    if (!contains_point(env, p)) {
      throw GeometryError(GeometryErrc::PointOutside, "PointOutside: (" + std::to_string(p.x) + ", " +
                                                          std::to_string(p.y) + ") is not in F");
    }
    polygons.push_back(visibility_polygon(env, p));
  }
  return shadow_set_from(env, polygons);
}

}  // namespace rpe
