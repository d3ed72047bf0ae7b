#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "rpe/grid_oracle.hpp"
#include "rpe/rspeg.hpp"

namespace rpe {

struct CheckOptions {
  int grid{200};
  GridMotionOptions motion;
};

struct ExclusionVerdict {
  std::optional<std::size_t> excluded;  // absent when the whole team is simulated
  bool passed{false};
  std::size_t residual_cells{0};  // contaminated cells at the final waypoint
};

struct CheckReport {
  std::vector<ExclusionVerdict> verdicts;
  std::size_t free_cells{0};

  bool passed() const;
  /// First excluded pursuer whose run leaves contamination behind.
  std::optional<std::size_t> first_failure() const;
};

/// Replays the waypoint path on a raster of F with every unseen cell initially
/// contaminated. For k = 1 each pursuer is removed in turn; k = 0 runs the full team.
CheckReport check_solution(const Environment& env, const Solution& solution, int k = 1,
                           const CheckOptions& options = {});

}  // namespace rpe
