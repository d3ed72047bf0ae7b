#include <gtest/gtest.h>

#include "rpe/checker.hpp"
#include "rpe/grid_oracle.hpp"
#include "support.hpp"

namespace rpe {
namespace {

using test::load_env;

TEST(ContaminationGrid, FreeCellsTrackArea) {
  const Environment env = load_env("l_room");
  const ContaminationGrid grid(env, 200);
  const double cell_area = (env.bounds().width() / grid.nx()) * (env.bounds().height() / grid.ny());
  EXPECT_NEAR(grid.free_count() * cell_area, env.area(), 0.02 * env.area());
}

TEST(ContaminationGrid, NoViewersLeaveEverythingUnseen) {
  const Environment env = load_env("two_holes");
  const ContaminationGrid grid(env, 100);
  EXPECT_EQ(count(grid.unseen({})), grid.free_count());
}

TEST(ContaminationGrid, ConvexViewerSeesEveryCell) {
  const Environment env = load_env("convex_room");
  const ContaminationGrid grid(env, 100);
  const std::vector<Point> pts{{2.0, 1.5}};
  EXPECT_EQ(count(grid.unseen(pts)), 0u);
}

TEST(ContaminationGrid, SeenRulesAreNested) {
  const Environment env = load_env("hooked_hole");
  const ContaminationGrid grid(env, 150);
  const std::vector<Point> pts{{0.5, 0.5}, {9.0, 5.0}};
  const Mask touch = grid.unseen(pts, SeenRule::Touch);
  const Mask centre = grid.unseen(pts, SeenRule::Centre);
  const Mask whole = grid.unseen(pts, SeenRule::Whole);
  for (std::size_t c = 0; c < grid.cells(); ++c) {
    EXPECT_LE(touch[c], centre[c]);
    EXPECT_LE(centre[c], whole[c]);
  }
  EXPECT_LT(count(touch), count(whole));
}

TEST(ContaminationGrid, SpreadFillsOnlyTouchedComponents) {
  const Environment env = test::unit_square({test::square(0.4, 0.4, 0.6, 0.6)});
  const ContaminationGrid grid(env, 100);
  const std::vector<Point> pts{{0.5, 0.1}, {0.5, 0.9}};
  const Mask unseen = grid.unseen(pts);
  int n = 0;
  const auto comp = grid.components(unseen, &n);
  ASSERT_EQ(n, 2);
  Mask seed(grid.cells(), 0);
  for (std::size_t c = 0; c < grid.cells(); ++c) {
    if (comp[c] == 0) {
      seed[c] = 1;
      break;
    }
  }
  const Mask after = grid.spread(seed, unseen);
  for (std::size_t c = 0; c < grid.cells(); ++c) EXPECT_EQ(after[c] != 0, comp[c] == 0);
}

TEST(CheckSolution, ConvexSingleWaypointPassesBothExclusions) {
  const Environment env = load_env("convex_room");
  const Solution s{{Jpc{{{1, 1}, {2, 2}}}}};
  const CheckReport r = check_solution(env, s);
  ASSERT_EQ(r.verdicts.size(), 2u);
  EXPECT_TRUE(r.passed());
}

// Pursuer 1 alone sweeps the corner; pursuer 0 never leaves leg A.
Solution lone_sweeper() {
  return Solution{{Jpc{{{3.9, 0.5}, {2.0, 0.1}}}, Jpc{{{3.9, 0.5}, {0.1, 1.5}}}}};
}

TEST(CheckSolution, PocketVisitedByOnePursuerFailsItsExclusion) {
  const CheckReport r = check_solution(load_env("l_room"), lone_sweeper());
  ASSERT_EQ(r.verdicts.size(), 2u);
  EXPECT_TRUE(r.verdicts[0].passed);
  EXPECT_FALSE(r.verdicts[1].passed);
  EXPECT_GT(r.verdicts[1].residual_cells, 0u);
  EXPECT_EQ(r.first_failure(), 1u);
  EXPECT_FALSE(r.passed());
}

TEST(CheckSolution, FullTeamStillClearsTheRoom) {
  const CheckReport r = check_solution(load_env("l_room"), lone_sweeper(), 0);
  ASSERT_EQ(r.verdicts.size(), 1u);
  EXPECT_FALSE(r.verdicts[0].excluded.has_value());
  EXPECT_TRUE(r.passed());
}

TEST(CheckSolution, OnlyKZeroAndOneAreSupported) {
  EXPECT_THROW(check_solution(load_env("l_room"), lone_sweeper(), 2), std::invalid_argument);
}

TEST(CheckSolution, RaggedWaypointsAreRejected) {
  const Solution s{{Jpc{{{3.9, 0.5}, {2.0, 0.1}}}, Jpc{{{3.9, 0.5}}}}};
  EXPECT_THROW(check_solution(load_env("l_room"), s), std::invalid_argument);
}

}  // namespace
}  // namespace rpe
