#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "rpe/geometry.hpp"

namespace rpe {

using Mask = std::vector<std::uint8_t>;

/// When a cell counts as seen by a visibility polygon.
enum class SeenRule {
  Centre,  // its centre is inside
  Touch,   // the polygon reaches any part of it
  Whole,   // it lies entirely inside
  Barrier, // as Centre, and window edges also cut links between unseen cells
};

/// Unseen cells plus, for the Barrier rule, the links crossed by a window edge
/// (bit d of cuts[c] blocks the step from c in direction d).
struct Observation {
  Mask unseen;
  std::vector<std::uint8_t> cuts;
};

/// Raster model of F for brute-force contamination tracking. A cell belongs to F
/// when its centre lies in the interior of F; evaders move between 8-neighbouring
/// unseen cells whose centres see each other.
class ContaminationGrid {
 public:
  ContaminationGrid(const Environment& env, int resolution);
  ContaminationGrid(Environment&&, int) = delete;

  const Environment& env() const { return *env_; }
  int nx() const { return nx_; }
  int ny() const { return ny_; }
  std::size_t cells() const { return free_.size(); }
  Point center(std::size_t cell) const;
  bool free(std::size_t cell) const { return free_[cell] != 0; }
  std::size_t free_count() const { return free_count_; }

  /// Free cells seen by none of the viewpoints.
  Mask unseen(std::span<const Point> viewpoints, SeenRule rule = SeenRule::Centre) const;

  Observation observe(std::span<const Point> viewpoints, SeenRule rule) const;

  /// Marks cells whose centre lies in the polygon (scanline fill).
  void rasterize(const Ring& polygon, Mask& out) const;

  /// Marks every cell crossed by the polygon's window edges, i.e. the edges
  /// that do not run along the boundary of F.
  void trace_windows(const VisPolygon& polygon, Mask& out) const;

  /// 8-connected component id per cell of `mask`, -1 outside it.
  std::vector<int> components(const Mask& mask, int* count = nullptr) const;

  /// Contamination after the unseen region changes to `unseen`: every component
  /// of `unseen` that holds a contaminated cell becomes fully contaminated.
  Mask spread(const Mask& contaminated, const Mask& unseen, const std::vector<std::uint8_t>* cuts = nullptr) const;

 private:
  template <class Fn>
  void for_each_window_cell(const VisPolygon& polygon, Fn&& fn) const;

  const Environment* env_;
  int nx_;
  int ny_;
  double x0_;
  double y0_;
  double dx_;
  double dy_;
  Mask free_;
  std::vector<std::uint8_t> links_;  // bit d: edge to neighbour in direction d
  std::size_t free_count_{0};
};

struct GridMotionOptions {
  std::optional<int> fixed_steps;  // overrides the adaptive step count
  double cell_fraction{0.25};      // largest per-step displacement, in cells
  int min_steps{16};
  int max_steps{20000};
  SeenRule rule{SeenRule::Barrier};
};

/// Steps the straight-line joint motion and carries contamination through each
/// intermediate unseen region. Returns contamination at the final instant.
Mask simulate_motion(const ContaminationGrid& grid, Mask contaminated, std::span<const Point> from,
                     std::span<const Point> to, const GridMotionOptions& options = {});

std::size_t count(const Mask& mask);

}  // namespace rpe
