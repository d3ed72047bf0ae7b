#include "rpe/grid_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace rpe {

namespace {

// Direction d and 7 - d are opposite.
constexpr int kStep[8][2] = {{-1, -1}, {0, -1}, {1, -1}, {-1, 0}, {1, 0}, {-1, 1}, {0, 1}, {1, 1}};

// Closed segment test: touching counts.
bool segments_meet(Point a, Point b, Point c, Point d) {
  const double d1 = cross(b - a, c - a), d2 = cross(b - a, d - a);
  const double d3 = cross(d - c, a - c), d4 = cross(d - c, b - c);
  if (((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) && ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0))) return true;
  auto on = [](Point p, Point q, Point r, double o) {
    return o == 0 && std::min(p.x, q.x) <= r.x && r.x <= std::max(p.x, q.x) && std::min(p.y, q.y) <= r.y &&
           r.y <= std::max(p.y, q.y);
  };
  return on(a, b, c, d1) || on(a, b, d, d2) || on(c, d, a, d3) || on(c, d, b, d4);
}

}  // namespace

ContaminationGrid::ContaminationGrid(const Environment& env, int resolution)
    : env_(&env), nx_(resolution), ny_(resolution) {
  if (resolution < 2) throw std::invalid_argument("grid resolution must be at least 2");
  const Box b = env.bounds();
  x0_ = b.min_x;
  y0_ = b.min_y;
  dx_ = b.width() / nx_;
  dy_ = b.height() / ny_;
  free_.assign(static_cast<std::size_t>(nx_) * ny_, 0);
  // Centres on the boundary are dropped: scanline fill cannot classify them.
  const double margin = 1e-6 * env.diameter();
  for (std::size_t c = 0; c < free_.size(); ++c) {
    const Point p = center(c);
    bool inside = contains_point(env, p);
    for (const Edge& e : env.edges()) {
      if (!inside) break;
      inside = distance_to_segment(p, e.a, e.b) > margin;
    }
    free_[c] = inside ? 1 : 0;
    free_count_ += free_[c];
  }
  // Neighbours link only when the segment between their centres stays in F,
  // so walls thinner than a cell do not leak.
  links_.assign(free_.size(), 0);
  for (std::size_t c = 0; c < free_.size(); ++c) {
    if (!free_[c]) continue;
    const int i = static_cast<int>(c % nx_);
    const int j = static_cast<int>(c / nx_);
    for (int d = 0; d < 8; ++d) {
      const int a = i + kStep[d][0];
      const int b = j + kStep[d][1];
      if (a < 0 || b < 0 || a >= nx_ || b >= ny_) continue;
      const std::size_t nb = static_cast<std::size_t>(b) * nx_ + a;
      if (nb < c) {
        if (links_[nb] & (1u << (7 - d))) links_[c] |= static_cast<std::uint8_t>(1u << d);
        continue;
      }
      if (free_[nb] && contains_segment(env, center(c), center(nb))) links_[c] |= static_cast<std::uint8_t>(1u << d);
    }
  }
}

Point ContaminationGrid::center(std::size_t cell) const {
  const auto i = static_cast<int>(cell % nx_);
  const auto j = static_cast<int>(cell / nx_);
  return {x0_ + (i + 0.5) * dx_, y0_ + (j + 0.5) * dy_};
}

void ContaminationGrid::rasterize(const Ring& polygon, Mask& out) const {
  std::vector<double> xs;
  const std::size_t m = polygon.size();
  for (int j = 0; j < ny_; ++j) {
    const double y = y0_ + (j + 0.5) * dy_;
    xs.clear();
    for (std::size_t k = 0; k < m; ++k) {
      const Point a = polygon[k];
      const Point b = polygon[(k + 1) % m];
      if ((a.y > y) == (b.y > y)) continue;
      xs.push_back(a.x + (y - a.y) * (b.x - a.x) / (b.y - a.y));
    }
    std::sort(xs.begin(), xs.end());
    for (std::size_t k = 0; k + 1 < xs.size(); k += 2) {
      const int lo = std::max(0, static_cast<int>(std::ceil((xs[k] - x0_) / dx_ - 0.5)));
      const int hi = std::min(nx_ - 1, static_cast<int>(std::floor((xs[k + 1] - x0_) / dx_ - 0.5)));
      for (int i = lo; i <= hi; ++i) out[static_cast<std::size_t>(j) * nx_ + i] = 1;
    }
  }
}

template <class Fn>
void ContaminationGrid::for_each_window_cell(const VisPolygon& polygon, Fn&& fn) const {
  const double tol = 10.0 * env_->epsilon();
  auto on_wall = [&](Point p, Point q) {
    for (const Edge& e : env_->edges()) {
      if (distance_to_segment(p, e.a, e.b) <= tol && distance_to_segment(q, e.a, e.b) <= tol) return true;
    }
    return false;
  };
  const Ring& ring = polygon.boundary;
  for (std::size_t k = 0; k < ring.size(); ++k) {
    const Point p = ring[k];
    const Point q = ring[(k + 1) % ring.size()];
    if (on_wall(p, q)) continue;
    // Grid traversal in cell units.
    const double u0 = (p.x - x0_) / dx_, v0 = (p.y - y0_) / dy_;
    const double u1 = (q.x - x0_) / dx_, v1 = (q.y - y0_) / dy_;
    int i = std::clamp(static_cast<int>(std::floor(u0)), 0, nx_ - 1);
    int j = std::clamp(static_cast<int>(std::floor(v0)), 0, ny_ - 1);
    const int i_end = std::clamp(static_cast<int>(std::floor(u1)), 0, nx_ - 1);
    const int j_end = std::clamp(static_cast<int>(std::floor(v1)), 0, ny_ - 1);
    const double du = u1 - u0, dv = v1 - v0;
    const int si = du > 0 ? 1 : -1, sj = dv > 0 ? 1 : -1;
    const double inf = std::numeric_limits<double>::infinity();
    const double step_u = du != 0 ? std::abs(1.0 / du) : inf;
    const double step_v = dv != 0 ? std::abs(1.0 / dv) : inf;
    double next_u = du != 0 ? ((du > 0 ? std::floor(u0) + 1 - u0 : u0 - std::floor(u0)) * step_u) : inf;
    double next_v = dv != 0 ? ((dv > 0 ? std::floor(v0) + 1 - v0 : v0 - std::floor(v0)) * step_v) : inf;
    const int limit = std::abs(i_end - i) + std::abs(j_end - j) + 2;
    for (int n = 0; n <= limit; ++n) {
      fn(static_cast<std::size_t>(j) * nx_ + i, p, q);
      if (i == i_end && j == j_end) break;
      if (next_u < next_v) {
        next_u += step_u;
        i = std::clamp(i + si, 0, nx_ - 1);
      } else {
        next_v += step_v;
        j = std::clamp(j + sj, 0, ny_ - 1);
      }
    }
  }
}

void ContaminationGrid::trace_windows(const VisPolygon& polygon, Mask& out) const {
  for_each_window_cell(polygon, [&](std::size_t c, Point, Point) { out[c] = 1; });
}

Mask ContaminationGrid::unseen(std::span<const Point> viewpoints, SeenRule rule) const {
  return observe(viewpoints, rule).unseen;
}

Observation ContaminationGrid::observe(std::span<const Point> viewpoints, SeenRule rule) const {
  Observation out;
  Mask seen(free_.size(), 0);
  if (rule == SeenRule::Barrier) out.cuts.assign(free_.size(), 0);
  for (const Point& q : viewpoints) {
    const VisPolygon v = visibility_polygon(*env_, q);
    if (rule == SeenRule::Centre || rule == SeenRule::Barrier) {
      rasterize(v.boundary, seen);
      if (rule == SeenRule::Centre) continue;
      // Any intersection of a link with a window edge lies in one of the
      // link's two cells, so scanning the traversed cells finds them all.
      for_each_window_cell(v, [&](std::size_t c, Point p, Point q2) {
        const int i = static_cast<int>(c % nx_);
        const int j = static_cast<int>(c / nx_);
        for (int d = 0; d < 8; ++d) {
          if (!(links_[c] & (1u << d)) || (out.cuts[c] & (1u << d))) continue;
          const std::size_t nb = static_cast<std::size_t>(j + kStep[d][1]) * nx_ + (i + kStep[d][0]);
          if (!segments_meet(center(c), center(nb), p, q2)) continue;
          out.cuts[c] |= static_cast<std::uint8_t>(1u << d);
          out.cuts[nb] |= static_cast<std::uint8_t>(1u << (7 - d));
        }
      });
      continue;
    }
    Mask inside(free_.size(), 0), windows(free_.size(), 0);
    rasterize(v.boundary, inside);
    trace_windows(v, windows);
    for (std::size_t c = 0; c < seen.size(); ++c) {
      const bool hit = rule == SeenRule::Touch ? (inside[c] || windows[c]) : (inside[c] && !windows[c]);
      seen[c] = seen[c] || hit;
    }
  }
  out.unseen.assign(free_.size(), 0);
  for (std::size_t c = 0; c < seen.size(); ++c) out.unseen[c] = free_[c] && !seen[c];
  return out;
}

std::vector<int> ContaminationGrid::components(const Mask& mask, int* count) const {
  std::vector<int> id(mask.size(), -1);
  std::vector<std::size_t> stack;
  int next = 0;
  for (std::size_t s = 0; s < mask.size(); ++s) {
    if (!mask[s] || id[s] >= 0) continue;
    id[s] = next;
    stack.push_back(s);
    while (!stack.empty()) {
      const std::size_t c = stack.back();
      stack.pop_back();
      const int i = static_cast<int>(c % nx_);
      const int j = static_cast<int>(c / nx_);
      for (int d = 0; d < 8; ++d) {
        if (!(links_[c] & (1u << d))) continue;
        const std::size_t nb = static_cast<std::size_t>(j + kStep[d][1]) * nx_ + (i + kStep[d][0]);
        if (mask[nb] && id[nb] < 0) {
          id[nb] = next;
          stack.push_back(nb);
        }
      }
    }
    ++next;
  }
  if (count) *count = next;
  return id;
}

Mask ContaminationGrid::spread(const Mask& contaminated, const Mask& unseen,
                               const std::vector<std::uint8_t>* cuts) const {
  Mask out(unseen.size(), 0);
  std::vector<std::size_t> stack;
  for (std::size_t c = 0; c < out.size(); ++c) {
    if (contaminated[c] && unseen[c] && !out[c]) {
      out[c] = 1;
      stack.push_back(c);
    }
  }
  while (!stack.empty()) {
    const std::size_t c = stack.back();
    stack.pop_back();
    const int i = static_cast<int>(c % nx_);
    const int j = static_cast<int>(c / nx_);
    for (int d = 0; d < 8; ++d) {
      if (!(links_[c] & (1u << d))) continue;
      if (cuts && ((*cuts)[c] & (1u << d))) continue;
      const std::size_t nb = static_cast<std::size_t>(j + kStep[d][1]) * nx_ + (i + kStep[d][0]);
      if (unseen[nb] && !out[nb]) {
        out[nb] = 1;
        stack.push_back(nb);
      }
    }
  }
  return out;
}

Mask simulate_motion(const ContaminationGrid& grid, Mask contaminated, std::span<const Point> from,
                     std::span<const Point> to, const GridMotionOptions& options) {
  if (from.size() != to.size()) throw std::invalid_argument("motion endpoints differ in length");
  int steps = 0;
  if (options.fixed_steps) {
    steps = std::max(1, *options.fixed_steps);
  } else {
    const Box b = grid.env().bounds();
    const double cell = std::min(b.width() / grid.nx(), b.height() / grid.ny());
    double longest = 0.0;
    for (std::size_t j = 0; j < from.size(); ++j) longest = std::max(longest, distance(from[j], to[j]));
    steps = static_cast<int>(std::ceil(longest / (cell * options.cell_fraction)));
    steps = std::clamp(steps, options.min_steps, options.max_steps);
  }
  std::vector<Point> pts(from.size());
  for (int k = 1; k <= steps; ++k) {
    if (std::find(contaminated.begin(), contaminated.end(), std::uint8_t{1}) == contaminated.end()) break;
    const double t = k == steps ? 1.0 : static_cast<double>(k) / steps;
    for (std::size_t j = 0; j < pts.size(); ++j) pts[j] = lerp(from[j], to[j], t);
    const Observation seen = grid.observe(pts, options.rule);
    contaminated = grid.spread(contaminated, seen.unseen, seen.cuts.empty() ? nullptr : &seen.cuts);
  }
  return contaminated;
}

std::size_t count(const Mask& mask) {
  return static_cast<std::size_t>(std::count(mask.begin(), mask.end(), std::uint8_t{1}));
}

}  // namespace rpe
