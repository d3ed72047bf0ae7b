#include <gtest/gtest.h>

#include <algorithm>
#include <map>
#include <set>

#include "rpe/sampling.hpp"
#include "support.hpp"

namespace rpe {
namespace {

using test::load_env;

// Eleven-point web drawn in the hooked-hole frame: guards p1..p6 then
// connectors q1..q5, with the DFS tree of the worked walk example.
struct WorkedWeb {
  Web web{{{3.84, 1.764}, {9.06954, 5.785}, {1.82804, 8.2682}, {6.9038, 5.572}, {4.39675, 6.20912}, {5.8324, 7.5966}},
          {{8.1833, 2.14469}, {0.410033, 2.0689}, {7.85585, 9.71485}, {4.48226, 8.02311}, {5.3225, 4.57663}}};
  enum : std::size_t { p1, p2, p3, p4, p5, p6, q1, q2, q3, q4, q5 };
  VisibilityGraph tree = VisibilityGraph::from_edges(
      11, {{p4, q5}, {q5, p5}, {p5, q4}, {q4, p3}, {p3, q2}, {q2, p1}, {p1, q1}, {q1, p2}, {p2, q3}, {q3, p6}, {q3, p3}});
};

TEST(DfsWalk, SingleVertex) {
  const auto g = VisibilityGraph::from_edges(1, {});
  EXPECT_EQ(dfs_walk(g, 0), std::vector<std::size_t>{0});
}

TEST(DfsWalk, PathGraphOmitsFinalReturnToRoot) {
  const auto g = VisibilityGraph::from_edges(3, {{0, 1}, {1, 2}});
  EXPECT_EQ(dfs_walk(g, 0), (std::vector<std::size_t>{0, 1, 2, 1}));
}

TEST(DfsWalk, WorkedWebHasLengthTwenty) {
  const WorkedWeb w;
  using W = WorkedWeb;
  const std::vector<std::size_t> expected{W::p6, W::q3, W::p2, W::q1, W::p1, W::q2, W::p3, W::q4, W::p5, W::q5,
                                          W::p4, W::q5, W::p5, W::q4, W::p3, W::q2, W::p1, W::q1, W::p2, W::q3};
  const auto walk = dfs_walk(w.tree, W::p6);
  EXPECT_EQ(walk, expected);
  EXPECT_EQ(walk.size(), 20u);
}

TEST(DfsWalk, WorkedWebRcsSamples) {
  const WorkedWeb w;
  using W = WorkedWeb;
  const auto walk = dfs_walk(w.tree, W::p6);
  const std::size_t d = walk.size();
  EXPECT_EQ(rcs_spacing(d, 3), 7u);
  auto sample = [&](std::size_t k) {
    std::vector<std::size_t> s;
    for (std::size_t i = 0; i < 3; ++i) s.push_back(walk[rcs_index(d, 3, i, k)]);
    return s;
  };
  EXPECT_EQ(sample(0), (std::vector<std::size_t>{W::p6, W::q4, W::p3}));
  EXPECT_EQ(sample(1), (std::vector<std::size_t>{W::q3, W::p5, W::q2}));
  EXPECT_EQ(sample(2), (std::vector<std::size_t>{W::p2, W::q5, W::p1}));
}

TEST(DfsWalk, WorkedWebTreeEdgesAreVisible) {
  const WorkedWeb w;
  const Environment env = load_env("hooked_hole");
  const auto pts = w.web.points();
  for (std::size_t a = 0; a < w.tree.size(); ++a) {
    for (std::size_t b : w.tree.adjacency[a]) EXPECT_TRUE(contains_segment(env, pts[a], pts[b])) << a << "-" << b;
  }
  const VisibilityGraph full = build_visibility_graph(env, w.web);
  EXPECT_EQ(dfs_walk(full, WorkedWeb::p6).size(), 20u);
}

TEST(Rcs, SpacingAndSampleCount) {
  EXPECT_EQ(rcs_spacing(20, 3), 7u);
  EXPECT_EQ(rcs_sample_count(20, 3), 15u);
  EXPECT_EQ(rcs_spacing(5, 5), 1u);
  std::set<std::size_t> first;
  for (std::size_t i = 0; i < 5; ++i) first.insert(rcs_index(5, 5, i, 0));
  EXPECT_EQ(first.size(), 5u);
}

TEST(Rcs, FirstSampleIndices) {
  EXPECT_EQ(rcs_index(20, 3, 0, 0), 0u);
  EXPECT_EQ(rcs_index(20, 3, 1, 0), 7u);
  EXPECT_EQ(rcs_index(20, 3, 2, 0), 14u);
  EXPECT_EQ(rcs_index(20, 3, 2, 7), 1u);
}

TEST(Rcs, EveryWalkIndexIsVisitedByTwoRobots) {
  for (std::size_t d = 1; d <= 60; ++d) {
    for (std::size_t n = 2; n <= 6; ++n) {
      std::vector<std::set<std::size_t>> robots(d);
      for (std::size_t k = 0; k < rcs_sample_count(d, n); ++k) {
        for (std::size_t i = 0; i < n; ++i) robots[rcs_index(d, n, i, k)].insert(i);
      }
      for (std::size_t j = 0; j < d; ++j) {
        // A one-point walk can only host one robot per position, but every robot sits on it.
        EXPECT_GE(robots[j].size(), std::min<std::size_t>(2, n)) << "d=" << d << " n=" << n << " j=" << j;
      }
    }
  }
}

TEST(Web, ConvexRoomNeedsOneGuard) {
  const Environment env = load_env("convex_room");
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const Web w = build_web(env, seed);
    EXPECT_EQ(w.guards.size(), 1u);
    EXPECT_TRUE(w.connectors.empty());
    const VisibilityGraph g = build_visibility_graph(env, w);
    EXPECT_EQ(g.edge_count(), 0u);
    EXPECT_EQ(dfs_walk(g, 0).size(), 1u);
  }
}

TEST(Web, LRoomHasAtMostTwoGuardsAndOneConnector) {
  const Environment env = load_env("l_room");
  std::size_t two = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Web w = build_web(env, seed);
    ASSERT_LE(w.guards.size(), 2u);
    EXPECT_EQ(w.connectors.size(), w.guards.size() - 1);
    if (w.guards.size() == 2) {
      ++two;
      const Point q = w.connectors[0];
      EXPECT_TRUE(contains_segment(env, q, w.guards[0]));
      EXPECT_TRUE(contains_segment(env, q, w.guards[1]));
      const VisibilityGraph g = build_visibility_graph(env, w);
      EXPECT_EQ(g.adjacency[2], (std::vector<std::size_t>{0, 1}));
    }
  }
  EXPECT_GT(two, 10u);
}

TEST(Web, GuardsCoverTheCoverageGrid) {
  for (const auto& name : test::env_names()) {
    const Environment env = load_env(name);
    const Web w = build_web(env, 3);
    std::vector<VisPolygon> views;
    for (const Point& p : w.guards) views.push_back(visibility_polygon(env, p));
    const ContaminationGrid grid(env, 200);
    std::size_t missed = 0;
    for (std::size_t c = 0; c < grid.cells(); ++c) {
      if (!grid.free(c)) continue;
      const Point p = grid.center(c);
      bool interior = true;
      for (const Edge& e : env.edges()) interior = interior && distance_to_segment(p, e.a, e.b) > env.epsilon();
      if (!interior) continue;
      if (std::none_of(views.begin(), views.end(), [&](const auto& v) { return v.contains(p, env.epsilon()); })) {
        ++missed;
      }
    }
    EXPECT_EQ(missed, 0u) << name;
  }
}

TEST(Web, ConnectorsWitnessAGuardPairAndAreSparse) {
  for (const auto& name : test::env_names()) {
    const Environment env = load_env(name);
    const Web w = build_web(env, 4);
    std::set<std::pair<std::size_t, std::size_t>> witnessed;
    for (const Point& q : w.connectors) {
      std::vector<std::size_t> seen_by;
      for (std::size_t i = 0; i < w.guards.size(); ++i) {
        if (contains_segment(env, q, w.guards[i])) seen_by.push_back(i);
      }
      EXPECT_GE(seen_by.size(), 2u) << name;
    }
  }
}

TEST(Web, SparseWebIsSmallerOnWingRooms) {
  const Environment env = load_env("wing_rooms");
  WebOptions dense;
  dense.sparse = false;
  std::size_t fewer = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Web s = build_web(env, seed), d = build_web(env, seed, dense);
    EXPECT_EQ(s.guards, d.guards);
    EXPECT_LE(s.size(), d.size());
    fewer += s.size() < d.size() ? 1 : 0;
  }
  EXPECT_GT(fewer, 0u);
}

TEST(Web, VisibilityGraphIsConnectedAcrossSeeds) {
  for (const auto& name : test::env_names()) {
    const Environment env = load_env(name);
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
      const Web w = build_web(env, seed);
      const VisibilityGraph g = build_visibility_graph(env, w);
      EXPECT_TRUE(g.connected()) << name << " seed " << seed;
      const auto walk = dfs_walk(g, pick_walk_root(g.size(), seed));
      std::set<std::size_t> covered(walk.begin(), walk.end());
      EXPECT_EQ(covered.size(), g.size()) << name << " seed " << seed;
      EXPECT_EQ(walk.size(), std::max<std::size_t>(1, 2 * (g.size() - 1)));
    }
  }
}

TEST(Web, DisconnectedGraphIsReported) {
  const auto g = VisibilityGraph::from_edges(3, {{0, 1}});
  EXPECT_FALSE(g.connected());
}

TEST(Web, SameSeedSameWeb) {
  const Environment env = load_env("two_holes");
  const Web a = build_web(env, 9), b = build_web(env, 9);
  EXPECT_EQ(a.guards, b.guards);
  EXPECT_EQ(a.connectors, b.connectors);
}

TEST(SampleStream, RcsStepsAreWalkEdges) {
  for (const std::string name : {"wing_rooms", "hooked_hole"}) {
    const Environment env = load_env(name);
    SampleStream s(env, SamplerKind::Rcs, 3, 1);
    Jpc prev = s.next();
    std::size_t web = s.webs_built();
    for (int t = 0; t < 60; ++t) {
      const Jpc cur = s.next();
      if (s.webs_built() == web) {
        for (std::size_t i = 0; i < 3; ++i) {
          EXPECT_TRUE(contains_segment(env, prev.positions[i], cur.positions[i])) << name;
        }
      }
      web = s.webs_built();
      prev = cur;
    }
  }
}

TEST(SampleStream, RcsFirstSampleFollowsTheWalk) {
  const Environment env = load_env("two_holes");
  SampleStream s(env, SamplerKind::Rcs, 3, 5);
  const Jpc first = s.next();
  const auto pts = s.web().points();
  const auto& walk = s.walk();
  for (std::size_t i = 0; i < 3; ++i) EXPECT_EQ(first.positions[i], pts[walk[rcs_index(walk.size(), 3, i, 0)]]);
}

TEST(SampleStream, RcsMovesToANewWebWhenExhausted) {
  const Environment env = load_env("l_room");
  SampleStream s(env, SamplerKind::Rcs, 2, 0);
  s.next();
  const std::size_t budget = rcs_sample_count(s.walk().size(), 2);
  for (std::size_t k = 1; k < budget; ++k) s.next();
  EXPECT_EQ(s.webs_built(), 1u);
  s.next();
  EXPECT_EQ(s.webs_built(), 2u);
}

TEST(SampleStream, WsOnSinglePointWebRepeatsThatPoint) {
  const Environment env = load_env("convex_room");
  SampleStream s(env, SamplerKind::Ws, 2, 0);
  for (int t = 0; t < 20; ++t) {
    const Jpc j = s.next();
    EXPECT_EQ(j.positions[0], j.positions[1]);
    EXPECT_EQ(j.positions[0], s.web().guards[0]);
  }
}

TEST(SampleStream, WsDrawsWebPointsUniformly) {
  const Environment env = load_env("l_room");
  SampleStream s(env, SamplerKind::Ws, 1, 0);
  std::map<std::size_t, std::size_t> hits;
  std::size_t total = 0;
  while (total < 3000) {
    const Jpc j = s.next();
    const auto pts = s.web().points();
    if (pts.size() != 3) continue;
    const auto it = std::find(pts.begin(), pts.end(), j.positions[0]);
    ASSERT_NE(it, pts.end());
    ++hits[static_cast<std::size_t>(it - pts.begin())];
    ++total;
  }
  for (std::size_t k = 0; k < 3; ++k) EXPECT_NEAR(hits[k] / 3000.0, 1.0 / 3.0, 0.03) << k;
}

TEST(SampleStream, SameSeedSameStream) {
  const Environment env = load_env("hooked_hole");
  for (SamplerKind kind : {SamplerKind::Rcs, SamplerKind::Ws}) {
    SampleStream a(env, kind, 3, 42), b(env, kind, 3, 42);
    for (int t = 0; t < 40; ++t) EXPECT_EQ(a.next(), b.next());
  }
}

TEST(SampleStream, TeamSizeLimits) {
  const Environment env = load_env("l_room");
  EXPECT_THROW(SampleStream(env, SamplerKind::Rcs, 1, 0), std::invalid_argument);
  EXPECT_THROW(SampleStream(env, SamplerKind::Ws, 0, 0), std::invalid_argument);
}

TEST(SamplerKindNames, RoundTrip) {
  EXPECT_EQ(parse_sampler("rcs"), SamplerKind::Rcs);
  EXPECT_EQ(parse_sampler("ws"), SamplerKind::Ws);
  EXPECT_STREQ(to_string(SamplerKind::Ws), "ws");
  EXPECT_THROW(parse_sampler("grid"), std::invalid_argument);
}

}  // namespace
}  // namespace rpe
