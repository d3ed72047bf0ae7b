#include "rpe/checker.hpp"

#include <stdexcept>
#include <string>

namespace rpe {

bool CheckReport::passed() const {
  if (verdicts.empty()) return false;
  for (const ExclusionVerdict& v : verdicts) {
    if (!v.passed) return false;
  }
  return true;
}

std::optional<std::size_t> CheckReport::first_failure() const {
  for (const ExclusionVerdict& v : verdicts) {
    if (!v.passed) return v.excluded;
  }
  return std::nullopt;
}

namespace {

ExclusionVerdict run(const ContaminationGrid& grid, const Solution& solution, std::optional<std::size_t> excluded,
                     const GridMotionOptions& motion) {
  auto team = [&](const Jpc& jpc) {
    return excluded ? jpc.without(*excluded) : jpc.positions;
  };
  std::vector<Point> prev = team(solution.waypoints.front());
  Mask dirty = grid.unseen(prev);
  for (std::size_t w = 1; w < solution.waypoints.size(); ++w) {
    const std::vector<Point> next = team(solution.waypoints[w]);
    dirty = simulate_motion(grid, std::move(dirty), prev, next, motion);
    prev = next;
  }
  ExclusionVerdict v;
  v.excluded = excluded;
  v.residual_cells = count(dirty);
  v.passed = v.residual_cells == 0;
  return v;
}

}  // namespace

CheckReport check_solution(const Environment& env, const Solution& solution, int k, const CheckOptions& options) {
  if (k != 0 && k != 1) throw std::invalid_argument("only k = 0 and k = 1 are supported, got " + std::to_string(k));
  if (solution.waypoints.empty()) throw std::invalid_argument("solution has no waypoints");
  const std::size_t n = solution.waypoints.front().size();
  for (const Jpc& w : solution.waypoints) {
    if (w.size() != n) throw std::invalid_argument("waypoints disagree on the number of pursuers");
  }
  if (k == 1 && n < 2) throw std::invalid_argument("a 1-robust check needs at least 2 pursuers");

  const ContaminationGrid grid(env, options.grid);
  CheckReport report;
  report.free_cells = grid.free_count();
  if (k == 0) {
    report.verdicts.push_back(run(grid, solution, std::nullopt, options.motion));
  } else {
    for (std::size_t i = 0; i < n; ++i) report.verdicts.push_back(run(grid, solution, i, options.motion));
  }
  return report;
}

}  // namespace rpe
