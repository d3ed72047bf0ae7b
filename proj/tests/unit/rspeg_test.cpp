#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "rpe/checker.hpp"
#include "rpe/rspeg.hpp"
#include "support.hpp"

namespace rpe {
namespace {

using test::load_env;

Jpc random_jpc(const Environment& env, std::size_t n, std::mt19937_64& rng) {
  Jpc j;
  for (std::size_t i = 0; i < n; ++i) j.positions.push_back(test::random_point_in(env, rng));
  return j;
}

// Both pursuers low in leg A, then both low in leg B; each straight motion cuts
// through the corner square, from which the whole room is visible.
const Jpc kLegA{{{2.0, 0.1}, {2.2, 0.1}}};
const Jpc kLegB{{{0.1, 1.5}, {0.12, 1.5}}};

std::vector<FailureLabel> live(const Rspeg& g, VertexId v) {
  std::vector<FailureLabel> out;
  for (LabelId id : g.vertices()[v].labels) out.push_back(g.labels()[id].label);
  std::sort(out.begin(), out.end());
  return out;
}

void expect_antichains(const Rspeg& g) {
  for (VertexId v = 0; v < g.vertices().size(); ++v) {
    const auto labels = live(g, v);
    for (std::size_t a = 0; a < labels.size(); ++a) {
      for (std::size_t b = 0; b < labels.size(); ++b) {
        if (a != b) {
          ASSERT_FALSE(covers(labels[a], labels[b])) << "vertex " << v;
        }
      }
    }
  }
}

TEST(FailureLabelOrder, CoversIsComponentwise) {
  const FailureLabel a{{ShadowLabel::parse("01"), ShadowLabel::parse("1")}};
  const FailureLabel b{{ShadowLabel::parse("11"), ShadowLabel::parse("1")}};
  const FailureLabel c{{ShadowLabel::parse("10"), ShadowLabel::parse("0")}};
  EXPECT_TRUE(covers(a, b));
  EXPECT_TRUE(dominates(a, b));
  EXPECT_TRUE(covers(a, a));
  EXPECT_FALSE(dominates(a, a));
  EXPECT_FALSE(covers(a, c));
  EXPECT_FALSE(covers(c, a));
  EXPECT_EQ(a.str(), "01|1");
}

TEST(FailureLabelOrder, MismatchedSublabelsThrow) {
  const FailureLabel a{{ShadowLabel::parse("01")}};
  const FailureLabel b{{ShadowLabel::parse("011")}};
  EXPECT_THROW(covers(a, b), ShadowsError);
}

TEST(Rspeg, SinglePursuerIsInvalid) {
  try {
    const Environment env = load_env("l_room");
    Rspeg g(env, Jpc{{{0.5, 0.5}}});
    FAIL();
  } catch (const RspegError& e) {
    EXPECT_EQ(e.code(), RspegErrc::InvalidJpc);
  }
}

TEST(Rspeg, PositionOutsideIsInvalid) {
  try {
    const Environment env = load_env("l_room");
    Rspeg g(env, Jpc{{{0.5, 0.5}, {3.0, 3.0}}});
    FAIL();
  } catch (const RspegError& e) {
    EXPECT_EQ(e.code(), RspegErrc::InvalidJpc);
  }
}

TEST(Rspeg, SampleWithWrongTeamSizeIsInvalid) {
  const Environment env = load_env("l_room");
  Rspeg g(env, kLegA);
  EXPECT_THROW(g.add_sample(Jpc{{{0.5, 0.5}, {0.5, 0.6}, {0.5, 0.7}}}), RspegError);
}

TEST(Rspeg, ConvexRootIsAlreadyASolution) {
  const Environment env = load_env("convex_room");
  Rspeg g(env, Jpc{{{1, 1}, {2, 2}}});
  ASSERT_EQ(g.labels().size(), 1u);
  const FailureLabel& root = g.labels()[0].label;
  ASSERT_EQ(root.sub.size(), 2u);
  EXPECT_EQ(root.sub[0].size(), 0u);
  EXPECT_EQ(root.sub[1].size(), 0u);
  const auto clear = g.find_all_clear();
  ASSERT_TRUE(clear.has_value());
  EXPECT_EQ(g.extract_solution(clear->vertex, clear->label).waypoints.size(), 1u);
}

TEST(Rspeg, RootLabelIsFullyContaminated) {
  const Environment env = load_env("l_room");
  Rspeg g(env, kLegA);
  const FailureLabel& root = g.labels()[0].label;
  ASSERT_EQ(root.sub.size(), 2u);
  for (std::size_t i = 0; i < 2; ++i) {
    const std::vector<Point> others = kLegA.without(i);
    EXPECT_EQ(root.sub[i].size(), shadow_set(env, others).size());
    EXPECT_EQ(root.sub[i], ShadowLabel::parse("1"));
  }
  EXPECT_FALSE(g.find_all_clear().has_value());
}

TEST(Rspeg, LRoomSweepFromLegAToLegBSolves) {
  const Environment env = load_env("l_room");
  Rspeg g(env, kLegA);
  const AddReport r = g.add_sample(kLegB);
  EXPECT_EQ(r.new_edges.size(), 2u);
  ASSERT_TRUE(r.all_clear.has_value());
  const Solution s = g.extract_solution(r.all_clear->vertex, r.all_clear->label);
  ASSERT_EQ(s.waypoints.size(), 2u);
  EXPECT_EQ(s.waypoints[0], kLegA);
  EXPECT_EQ(s.waypoints[1], kLegB);
  EXPECT_TRUE(check_solution(env, s).passed());
}

TEST(Rspeg, ExtractionRejectsContaminatedLabels) {
  const Environment env = load_env("l_room");
  Rspeg g(env, kLegA);
  try {
    g.extract_solution(0, 0);
    FAIL();
  } catch (const RspegError& e) {
    EXPECT_EQ(e.code(), RspegErrc::NotAllClear);
  }
}

TEST(Rspeg, ExtractionRejectsLabelAtAnotherVertex) {
  const Environment env = load_env("l_room");
  Rspeg g(env, kLegA);
  const AddReport r = g.add_sample(kLegB);
  ASSERT_TRUE(r.all_clear.has_value());
  try {
    g.extract_solution(0, r.all_clear->label);
    FAIL();
  } catch (const RspegError& e) {
    EXPECT_EQ(e.code(), RspegErrc::BrokenProvenance);
  }
}

TEST(Rspeg, DuplicateSampleAddsNothingNew) {
  const Environment env = load_env("hooked_hole");
  const Jpc root{{{0.5, 0.5}, {9.0, 5.0}}};
  Rspeg g(env, root);
  const auto before = live(g, 0);
  const AddReport r = g.add_sample(root);
  EXPECT_EQ(r.new_edges.size(), 2u);
  for (EdgeId e : r.new_edges) {
    for (std::size_t i = 0; i < 2; ++i) {
      const auto& rel = g.edges()[e].relations[i];
      EXPECT_EQ(rel, InfluenceRelation::identity(rel.rows));
    }
  }
  EXPECT_EQ(live(g, 0), before);
  EXPECT_EQ(live(g, 1), before);
}

TEST(Rspeg, EdgesFollowCoordinatewiseFeasibility) {
  const Environment env = load_env("two_holes");
  std::mt19937_64 rng(7);
  Rspeg g(env, random_jpc(env, 2, rng));
  for (int t = 0; t < 12; ++t) g.add_sample(random_jpc(env, 2, rng));
  const auto& vs = g.vertices();
  std::size_t expected = 0;
  for (VertexId a = 0; a < vs.size(); ++a) {
    for (VertexId b = a + 1; b < vs.size(); ++b) {
      bool ok = true;
      for (std::size_t i = 0; i < 2; ++i) ok = ok && contains_segment(env, vs[a].jpc.positions[i], vs[b].jpc.positions[i]);
      expected += ok ? 2 : 0;
    }
  }
  EXPECT_EQ(g.edges().size() + g.counters().skipped_edges * 2, expected);
  for (const GraphEdge& e : g.edges()) {
    EXPECT_EQ(e.relations.size(), 2u);
    for (std::size_t i = 0; i < 2; ++i) {
      EXPECT_TRUE(contains_segment(env, vs[e.from].jpc.positions[i], vs[e.to].jpc.positions[i]));
    }
  }
}

TEST(Rspeg, AntichainInvariantAfterEverySample) {
  for (const std::string name : {"l_room", "hooked_hole", "two_holes"}) {
    const Environment env = load_env(name);
    std::mt19937_64 rng(11);
    Rspeg g(env, random_jpc(env, 3, rng));
    for (int t = 0; t < 15; ++t) {
      g.add_sample(random_jpc(env, 3, rng));
      expect_antichains(g);
    }
  }
}

TEST(Rspeg, CachedPropagationMatchesRecomputation) {
  const Environment env = load_env("hooked_hole");
  std::mt19937_64 rng(13);
  Rspeg g(env, random_jpc(env, 2, rng));
  for (int t = 0; t < 10; ++t) g.add_sample(random_jpc(env, 2, rng));
  ASSERT_FALSE(g.edges().empty());
  std::size_t probes = 0;
  for (EdgeId e = 0; e < g.edges().size() && probes < 60; ++e) {
    const Vertex& from = g.vertices()[g.edges()[e].from];
    FailureLabel l;
    for (std::size_t i = 0; i < 2; ++i) l.sub.push_back(test::random_label(from.leave_one_out[i].size(), rng));
    const FailureLabel cached = g.propagate_across(e, l);
    FailureLabel fresh;
    for (std::size_t i = 0; i < 2; ++i) fresh.sub.push_back(propagate(l.sub[i], g.compute_relation(e, i)));
    EXPECT_EQ(cached, fresh) << "edge " << e;
    ++probes;
  }
}

TEST(Rspeg, StoredAntichainsAreTheFixpoint) {
  for (const std::string name : {"l_room", "two_holes"}) {
    const Environment env = load_env(name);
    std::mt19937_64 rng(17);
    Rspeg g(env, random_jpc(env, 2, rng));
    for (int t = 0; t < 10; ++t) g.add_sample(random_jpc(env, 2, rng));
    auto fix = g.recompute_fixpoint();
    for (VertexId v = 0; v < g.vertices().size(); ++v) {
      std::sort(fix[v].begin(), fix[v].end());
      EXPECT_EQ(fix[v], live(g, v)) << name << " vertex " << v;
    }
  }
}

TEST(Rspeg, ProvenanceChainsReachTheRoot) {
  const Environment env = load_env("hooked_hole");
  std::mt19937_64 rng(19);
  Rspeg g(env, random_jpc(env, 2, rng));
  for (int t = 0; t < 10; ++t) g.add_sample(random_jpc(env, 2, rng));
  for (LabelId id = 0; id < g.labels().size(); ++id) {
    LabelRef cur{g.labels()[id].vertex, id};
    std::size_t hops = 0;
    while (g.labels()[cur.label].pred && hops <= g.labels().size()) {
      const LabelRef p = *g.labels()[cur.label].pred;
      bool linked = false;
      for (EdgeId e : g.vertices()[cur.vertex].in_edges) linked = linked || g.edges()[e].from == p.vertex;
      EXPECT_TRUE(linked);
      cur = p;
      ++hops;
    }
    EXPECT_EQ(cur.vertex, g.root());
  }
}

TEST(Rspeg, CachingOnOrOffGivesTheSameLabels) {
  const Environment env = load_env("l_room");
  std::mt19937_64 rng(23);
  std::vector<Jpc> samples;
  for (int t = 0; t < 10; ++t) samples.push_back(random_jpc(env, 2, rng));
  GraphOptions naive;
  naive.cache_relations = false;
  Rspeg cached(env, samples[0]), plain(env, samples[0], naive);
  for (std::size_t t = 1; t < samples.size(); ++t) {
    cached.add_sample(samples[t]);
    plain.add_sample(samples[t]);
  }
  ASSERT_EQ(cached.vertices().size(), plain.vertices().size());
  ASSERT_EQ(cached.edges().size(), plain.edges().size());
  for (VertexId v = 0; v < cached.vertices().size(); ++v) EXPECT_EQ(live(cached, v), live(plain, v));
  for (const GraphEdge& e : plain.edges()) EXPECT_TRUE(e.relations.empty());
  EXPECT_LE(cached.counters().relations_computed, plain.counters().relations_computed);
}

TEST(Rspeg, ExpiredDeadlineLeavesGraphConsistent) {
  const Environment env = load_env("hooked_hole");
  Rspeg g(env, Jpc{{{0.5, 0.5}, {9.0, 5.0}}});
  EXPECT_THROW(g.add_sample(Jpc{{{0.6, 0.5}, {9.0, 5.1}}}, Deadline::after(-1.0)), TimeoutError);
  expect_antichains(g);
  for (const GraphEdge& e : g.edges()) {
    EXPECT_LT(e.from, g.vertices().size());
    EXPECT_LT(e.to, g.vertices().size());
  }
}

}  // namespace
}  // namespace rpe
