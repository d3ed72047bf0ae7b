#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "rpe/shadows.hpp"
#include "support.hpp"

namespace rpe {
namespace {

using test::load_env;

ShadowLabel L(const char* bits) { return ShadowLabel::parse(bits); }

TEST(Dominates, MoreClearedLabelDominates) { EXPECT_TRUE(dominates(L("010"), L("011"))); }

TEST(Dominates, EqualLabelsDoNotDominate) { EXPECT_FALSE(dominates(L("011"), L("011"))); }

TEST(Dominates, IncomparableLabels) {
  EXPECT_FALSE(dominates(L("100"), L("011")));
  EXPECT_FALSE(dominates(L("011"), L("100")));
}

TEST(Dominates, LengthMismatchThrows) {
  try {
    dominates(L("01"), L("011"));
    FAIL();
  } catch (const ShadowsError& e) {
    EXPECT_EQ(e.code(), ShadowsErrc::LengthMismatch);
  }
}

TEST(Dominates, StrictPartialOrderOnRandomLabels) {
  std::mt19937_64 rng(1);
  std::uniform_int_distribution<std::size_t> len(0, 6);
  for (int t = 0; t < 2000; ++t) {
    const std::size_t n = len(rng);
    const ShadowLabel a = test::random_label(n, rng), b = test::random_label(n, rng), c = test::random_label(n, rng);
    EXPECT_FALSE(dominates(a, a));
    EXPECT_FALSE(dominates(a, b) && dominates(b, a));
    if (dominates(a, b) && dominates(b, c)) EXPECT_TRUE(dominates(a, c));
  }
}

TEST(ShadowLabelBits, ParseAndPrintRoundTrip) {
  const ShadowLabel l = L("0110100000000000000000000000000000000000000000000000000000000000011");
  EXPECT_EQ(l.str(), "0110100000000000000000000000000000000000000000000000000000000000011");
  EXPECT_EQ(l.count(), 5u);
  EXPECT_FALSE(l.all_clear());
  EXPECT_TRUE(ShadowLabel::cleared(70).all_clear());
  EXPECT_TRUE(ShadowLabel().all_clear());
}

TEST(Propagate, ClearLabelStaysClear) {
  InfluenceRelation r(3, 2);
  r.set(0, 1);
  r.set(2, 0);
  EXPECT_EQ(propagate(L("000"), r), L("00"));
}

TEST(Propagate, FullRelationKeepsEverythingContaminated) {
  InfluenceRelation r(3, 3);
  for (std::size_t a = 0; a < 3; ++a) {
    for (std::size_t b = 0; b < 3; ++b) r.set(a, b);
  }
  EXPECT_EQ(propagate(L("111"), r), L("111"));
}

TEST(Propagate, MatrixApplicationByHand) {
  InfluenceRelation r(2, 2);
  r.set(0, 1);
  r.set(1, 0);
  EXPECT_EQ(propagate(L("10"), r), L("01"));
}

TEST(Propagate, LengthMismatchThrows) {
  EXPECT_THROW(propagate(L("10"), InfluenceRelation(3, 2)), ShadowsError);
}

InfluenceRelation random_relation(std::size_t rows, std::size_t cols, std::mt19937_64& rng) {
  InfluenceRelation r(rows, cols);
  std::bernoulli_distribution coin(0.35);
  for (std::size_t a = 0; a < rows; ++a) {
    for (std::size_t b = 0; b < cols; ++b) r.set(a, b, coin(rng));
  }
  return r;
}

TEST(Propagate, MonotoneUnderDominance) {
  std::mt19937_64 rng(2);
  std::uniform_int_distribution<std::size_t> len(1, 8);
  for (int t = 0; t < 2000; ++t) {
    const std::size_t rows = len(rng), cols = len(rng);
    const InfluenceRelation r = random_relation(rows, cols, rng);
    const ShadowLabel m = test::random_label(rows, rng);
    ShadowLabel l = m;
    for (std::size_t i = 0; i < rows; ++i) {
      if (rng() % 2) l.set(i, false);
    }
    if (!dominates(l, m)) continue;
    const ShadowLabel pl = propagate(l, r), pm = propagate(m, r);
    EXPECT_TRUE(pl == pm || dominates(pl, pm));
  }
}

TEST(Propagate, IdentityRelationPreservesLabels) {
  std::mt19937_64 rng(3);
  for (std::size_t n = 0; n < 10; ++n) {
    const ShadowLabel l = test::random_label(n, rng);
    EXPECT_EQ(propagate(l, InfluenceRelation::identity(n)), l);
  }
}

// Square room with a centred pillar. Viewers directly below and above the pillar
// leave one thin shadow on each side of it; the lower viewer alone leaves a
// single shadow behind the pillar that contains both.
struct Pillar {
  Environment env = test::unit_square({test::square(0.4, 0.4, 0.6, 0.6)});
  std::vector<Point> both{{0.5, 0.1}, {0.5, 0.9}};
  std::vector<Point> lower{{0.5, 0.1}};
};

TEST(ClassifyEvents, NoMotionMeansEveryShadowPersists) {
  const Pillar p;
  const ShadowSet s = shadow_set(p.env, p.both);
  ASSERT_EQ(s.size(), 2u);
  const auto events = classify_events(p.env, s, s);
  ASSERT_EQ(events.size(), 2u);
  for (std::size_t b = 0; b < events.size(); ++b) {
    EXPECT_EQ(events[b].kind, EventKind::Persisted);
    EXPECT_EQ(events[b].prev, std::vector<std::size_t>{b});
  }
}

TEST(ClassifyEvents, TwoShadowsInsideOneMerge) {
  const Pillar p;
  const ShadowSet prev = shadow_set(p.env, p.both), next = shadow_set(p.env, p.lower);
  ASSERT_EQ(prev.size(), 2u);
  ASSERT_EQ(next.size(), 1u);
  const auto events = classify_events(p.env, prev, next);
  ASSERT_EQ(events.size(), 1u);
  EXPECT_EQ(events[0].kind, EventKind::Merged);
  EXPECT_EQ(events[0].prev, (std::vector<std::size_t>{0, 1}));
}

TEST(ClassifyEvents, OneShadowOverTwoSplits) {
  const Pillar p;
  const ShadowSet prev = shadow_set(p.env, p.lower), next = shadow_set(p.env, p.both);
  const auto events = classify_events(p.env, prev, next);
  ASSERT_EQ(events.size(), 2u);
  for (const auto& e : events) {
    EXPECT_EQ(e.kind, EventKind::Split);
    EXPECT_EQ(e.prev, std::vector<std::size_t>{0});
  }
}

TEST(ClassifyEvents, VanishedShadowDisappears) {
  const Environment env = load_env("l_room");
  const std::vector<Point> leg{{3.5, 0.5}}, corner{{0.5, 0.5}};
  const auto events = classify_events(env, shadow_set(env, leg), shadow_set(env, corner));
  ASSERT_EQ(events.size(), 1u);
  EXPECT_EQ(events[0].kind, EventKind::Disappeared);
  EXPECT_FALSE(events[0].next.has_value());
}

TEST(InfluenceRelation, ZeroLengthMotionIsIdentity) {
  std::mt19937_64 rng(4);
  for (const auto& name : test::env_names()) {
    const Environment env = load_env(name);
    const std::vector<Point> pts{test::random_point_in(env, rng), test::random_point_in(env, rng)};
    const InfluenceRelation r = influence_relation(env, pts, pts);
    EXPECT_EQ(r, InfluenceRelation::identity(shadow_set(env, pts).size())) << name;
  }
}

TEST(InfluenceRelation, ConvexRoomHasNoShadows) {
  const Environment env = load_env("convex_room");
  const std::vector<Point> a{{1, 1}}, b{{3, 2}};
  const InfluenceRelation r = influence_relation(env, a, b);
  EXPECT_EQ(r.rows, 0u);
  EXPECT_EQ(r.cols, 0u);
}

TEST(InfluenceRelation, InfeasibleMotionThrows) {
  const Environment env = load_env("l_room");
  const std::vector<Point> a{{3.5, 0.5}}, b{{0.5, 3.5}};
  try {
    influence_relation(env, a, b);
    FAIL();
  } catch (const ShadowsError& e) {
    EXPECT_EQ(e.code(), ShadowsErrc::InfeasibleEdge);
  }
}

TEST(InfluenceRelation, LRoomShadowAppearingBehindPursuerStartsClear) {
  const Environment env = load_env("l_room");
  // The corner square sees the whole room; walking up leg B leaves a fresh
  // shadow at the far end of leg A that no earlier shadow feeds.
  const std::vector<Point> corner{{0.8, 0.5}}, up{{0.5, 3.5}};
  const InfluenceRelation r = influence_relation(env, corner, up);
  EXPECT_EQ(r.rows, 0u);
  EXPECT_EQ(r.cols, 1u);
  // Sliding along leg A never lets the leg B shadow vanish.
  const std::vector<Point> a{{3.5, 0.5}}, b{{2.0, 0.2}};
  const InfluenceRelation s = influence_relation(env, a, b);
  ASSERT_EQ(s.rows, 1u);
  ASSERT_EQ(s.cols, 1u);
  EXPECT_TRUE(s.at(0, 0));
}

TEST(InfluenceRelation, AgreesWithBracketingGridOracle) {
  std::mt19937_64 rng(5);
  for (const std::string name : {"l_room", "hooked_hole"}) {
    const Environment env = load_env(name);
    const ContaminationGrid grid(env, 150);
    int edges = 0;
    while (edges < 6) {
      const std::vector<Point> from{test::random_point_in(env, rng)}, to{test::random_point_in(env, rng)};
      if (!contains_segment(env, from[0], to[0])) continue;
      ++edges;
      const InfluenceRelation r = influence_relation(env, from, to);
      const test::Bracket o = test::bracket_relation(grid, shadow_set(env, from), shadow_set(env, to), from, to, 100);
      ASSERT_EQ(r.rows, o.rows);
      ASSERT_EQ(r.cols, o.cols);
      for (std::size_t a = 0; a < r.rows; ++a) {
        for (std::size_t b = 0; b < r.cols; ++b) {
          const auto& e = o.at(a, b);
          if (!e.resolved) continue;
          EXPECT_FALSE(r.at(a, b) && !e.hi) << name << " (" << a << "," << b << ")";
          EXPECT_FALSE(!r.at(a, b) && e.lo) << name << " (" << a << "," << b << ")";
        }
      }
    }
  }
}

TEST(InfluenceRelation, ReportsBisectionStats) {
  const Environment env = load_env("hooked_hole");
  const std::vector<Point> a{{0.5, 0.5}, {9.0, 5.0}}, b{{0.5, 9.5}, {9.0, 2.0}};
  ASSERT_TRUE(contains_segment(env, a[0], b[0]));
  RelationStats stats;
  influence_relation(env, a, b, {}, {}, &stats);
  EXPECT_GE(stats.shadow_sets, 33u);
}

TEST(InfluenceRelation, ExpiredDeadlineThrowsTimeout) {
  const Environment env = load_env("l_room");
  const std::vector<Point> a{{3.5, 0.5}}, b{{2.0, 0.2}};
  EXPECT_THROW(influence_relation(env, a, b, {}, Deadline::after(-1.0)), TimeoutError);
}

}  // namespace
}  // namespace rpe
