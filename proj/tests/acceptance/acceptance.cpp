// Acceptance suite: one PASS/FAIL line per criterion. Thresholds are fixed
// below. Pass criterion numbers as arguments to run a subset.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "rpe/checker.hpp"
#include "rpe/planner.hpp"
#include "rpe/rspeg.hpp"
#include "rpe/sampling.hpp"
#include "rpe/shadows.hpp"
#include "support.hpp"

namespace rpe {
namespace {

using test::load_env;

constexpr double kTimeout = 600.0;

// 1
constexpr std::size_t kCacheProbes = 1000;
// 2
constexpr int kSpeedupTrials = 10;
constexpr double kSpeedupFactor = 0.5;
// 3
const std::vector<std::pair<std::string, int>> kGateSweep{
    {"l_room", 13}, {"wing_rooms", 13}, {"hooked_hole", 12}, {"two_holes", 12}};
// 4
constexpr int kSuccessTrials = 50;
constexpr double kSuccessRate = 0.9;
// 5
constexpr int kDirectionTrials = 20;
constexpr double kDirectionSlack = 1.1;
const std::vector<std::string> kWithHoles{"wing_rooms", "hooked_hole", "two_holes"};
// 6
constexpr int kCoverageWebs = 3;
// 8
constexpr int kProbeGrid = 200;
constexpr int kViewpoints = 50;
// 9
constexpr int kOracleEdges = 50;
constexpr int kOracleGrid = 150;
constexpr int kOracleSteps = 400;
constexpr double kAmbiguousLimit = 0.05;
constexpr double kDecidedFloor = 0.9;
// 10
constexpr int kOrderCases = 10000;
constexpr int kFuzzSamples = 1000;

struct Line {
  int id;
  std::string name;
  bool pass;
  std::string detail;
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t).count();
}

// Planner trials, shared between criteria.

struct Trial {
  bool solved{false};
  bool timed_out{false};
  bool unsound{false};
  std::string error;
  double elapsed_s{0.0};
  double validation_s{0.0};
};

class Trials {
 public:
  const Trial& get(const std::string& env_name, SamplerKind sampler, std::uint64_t seed, bool caching) {
    const auto key = std::make_tuple(env_name, sampler, seed, caching);
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
    const Environment& env = environment(env_name);
    PlanConfig config;
    config.n = 3;
    config.sampler = sampler;
    config.seed = seed;
    config.timeout_s = kTimeout;
    config.caching = caching;
    Trial t;
    const auto start = std::chrono::steady_clock::now();
    try {
      const PlanResult r = plan(env, config);
      t.elapsed_s = r.stats.elapsed_s;
      t.validation_s = r.stats.validation_s;
      t.solved = r.outcome == Outcome::Solution;
      t.timed_out = r.outcome == Outcome::Timeout;
    } catch (const SoundnessError& e) {
      t.unsound = true;
      t.error = e.what();
      t.elapsed_s = kTimeout;
    } catch (const std::exception& e) {
      t.error = e.what();
      t.elapsed_s = kTimeout;
    }
    std::cerr << "  trial " << env_name << " " << to_string(sampler) << " seed=" << seed
              << (caching ? "" : " naive") << ": "
              << (t.solved ? "solution" : t.timed_out ? "timeout" : "error " + t.error) << " plan "
              << fmt("%.2f", t.elapsed_s) << " s, total " << fmt("%.2f", seconds_since(start)) << " s" << std::endl;
    return cache_.emplace(key, t).first->second;
  }

  // Every trial run so far that returned or attempted a solution.
  std::size_t solutions() const {
    std::size_t n = 0;
    for (const auto& [k, t] : cache_) n += (t.solved || t.unsound) ? 1 : 0;
    return n;
  }
  std::size_t unsound() const {
    std::size_t n = 0;
    for (const auto& [k, t] : cache_) n += t.unsound ? 1 : 0;
    return n;
  }

 private:
  const Environment& environment(const std::string& name) {
    auto it = envs_.find(name);
    if (it == envs_.end()) it = envs_.emplace(name, load_env(name)).first;
    return it->second;
  }

  std::map<std::string, Environment> envs_;
  std::map<std::tuple<std::string, SamplerKind, std::uint64_t, bool>, Trial> cache_;
};

// Time charged to a trial: planning time, or the timeout when it did not solve.
double charged(const Trial& t) { return t.solved ? t.elapsed_s : kTimeout; }

Line cache_equivalence() {
  std::size_t probes = 0, mismatches = 0;
  const std::size_t per_env = kCacheProbes / test::nonconvex_env_names().size();
  std::uint64_t seed = 0;
  for (const std::string& name : test::nonconvex_env_names()) {
    const Environment env = load_env(name);
    SampleStream stream(env, SamplerKind::Rcs, 2, seed);
    Rspeg g(env, stream.next());
    for (int s = 0; s < 14; ++s) g.add_sample(stream.next());
    std::mt19937_64 rng(100 + seed++);
    if (g.edges().empty()) return {1, "cache equivalence", false, name + " produced no edges"};
    std::uniform_int_distribution<EdgeId> pick(0, g.edges().size() - 1);
    for (std::size_t p = 0; p < per_env; ++p) {
      const EdgeId e = pick(rng);
      const Vertex& from = g.vertices()[g.edges()[e].from];
      FailureLabel l;
      for (std::size_t i = 0; i < 2; ++i) l.sub.push_back(test::random_label(from.leave_one_out[i].size(), rng));
      const FailureLabel cached = g.propagate_across(e, l);
      FailureLabel fresh;
      for (std::size_t i = 0; i < 2; ++i) fresh.sub.push_back(propagate(l.sub[i], g.compute_relation(e, i)));
      ++probes;
      mismatches += cached == fresh ? 0 : 1;
    }
  }
  std::ostringstream d;
  d << probes << " probes over " << test::nonconvex_env_names().size() << " environments, " << mismatches
    << " mismatches";
  return {1, "cache equivalence", probes >= kCacheProbes && mismatches == 0, d.str()};
}

Line caching_speedup(Trials& trials) {
  double cached = 0.0, naive = 0.0;
  for (int s = 0; s < kSpeedupTrials; ++s) {
    cached += charged(trials.get("hooked_hole", SamplerKind::Rcs, s, true));
    naive += charged(trials.get("hooked_hole", SamplerKind::Rcs, s, false));
  }
  cached /= kSpeedupTrials;
  naive /= kSpeedupTrials;
  std::ostringstream d;
  d << "hooked_hole n=3 rcs, " << kSpeedupTrials << " trials: cached mean " << fmt("%.2f", cached)
    << " s, naive mean " << fmt("%.2f", naive) << " s, ratio " << fmt("%.3f", cached / naive) << " (limit "
    << kSpeedupFactor << ")";
  return {2, "caching speedup", cached < kSpeedupFactor * naive, d.str()};
}

Line robustness_gate(Trials& trials) {
  std::size_t runs = 0, solved = 0, failed = 0;
  for (const auto& [name, count] : kGateSweep) {
    for (int s = 0; s < count; ++s) {
      const Trial& t = trials.get(name, SamplerKind::Rcs, s, true);
      ++runs;
      solved += t.solved ? 1 : 0;
      failed += t.unsound ? 1 : 0;
    }
  }
  std::ostringstream d;
  d << runs << " trials, " << solved << " validated solutions, " << failed << " failed the check";
  return {3, "robustness gate", runs == 50 && solved > 0 && failed == 0, d.str()};
}

Line success_rate(Trials& trials) {
  int solved = 0;
  double total = 0.0;
  for (int s = 0; s < kSuccessTrials; ++s) {
    const Trial& t = trials.get("hooked_hole", SamplerKind::Rcs, s, true);
    solved += t.solved ? 1 : 0;
    total += charged(t);
  }
  const double rate = static_cast<double>(solved) / kSuccessTrials;
  std::ostringstream d;
  d << "hooked_hole n=3 rcs: " << solved << "/" << kSuccessTrials << " solved (" << fmt("%.0f", 100 * rate)
    << "%), mean time " << fmt("%.2f", total / kSuccessTrials) << " s";
  return {4, "success rate", rate >= kSuccessRate, d.str()};
}

Line sampler_direction(Trials& trials) {
  bool pass = true;
  std::ostringstream d;
  for (const std::string& name : kWithHoles) {
    double rcs = 0.0, ws = 0.0;
    int rcs_solved = 0, ws_solved = 0;
    for (int s = 0; s < kDirectionTrials; ++s) {
      const Trial& a = trials.get(name, SamplerKind::Rcs, s, true);
      const Trial& b = trials.get(name, SamplerKind::Ws, s, true);
      rcs += charged(a);
      ws += charged(b);
      rcs_solved += a.solved ? 1 : 0;
      ws_solved += b.solved ? 1 : 0;
    }
    rcs /= kDirectionTrials;
    ws /= kDirectionTrials;
    pass = pass && rcs <= kDirectionSlack * ws;
    d << (name == kWithHoles.front() ? "" : "; ") << name << " rcs " << fmt("%.2f", rcs) << " s (" << rcs_solved
      << " solved) vs ws " << fmt("%.2f", ws) << " s (" << ws_solved << " solved)";
  }
  return {5, "rcs vs ws", pass, d.str()};
}

Line double_coverage() {
  std::size_t walks = 0, indices = 0, exceptions = 0;
  for (const std::string& name : test::env_names()) {
    const Environment env = load_env(name);
    for (std::size_t n = 2; n <= 6; ++n) {
      SampleStream stream(env, SamplerKind::Rcs, n, 0);
      for (int w = 0; w < kCoverageWebs; ++w) {
        Jpc first = stream.next();
        const std::vector<std::size_t> walk = stream.walk();
        const std::vector<Point> pts = stream.web().points();
        const std::size_t d = walk.size();
        std::vector<std::set<std::size_t>> robots(d);
        for (std::size_t k = 0; k < rcs_sample_count(d, n); ++k) {
          const Jpc j = k == 0 ? first : stream.next();
          for (std::size_t i = 0; i < n; ++i) {
            const std::size_t idx = rcs_index(d, n, i, k);
            // The emitted configuration must be the enumerated one.
            if (!(j.positions[i] == pts[walk[idx]])) ++exceptions;
            robots[idx].insert(i);
          }
        }
        for (const auto& r : robots) exceptions += r.size() >= 2 ? 0 : 1;
        indices += d;
        ++walks;
      }
    }
  }
  std::ostringstream d;
  d << walks << " walks, " << indices << " walk indices, " << exceptions << " exceptions";
  return {6, "double coverage", exceptions == 0, d.str()};
}

Line worked_web() {
  enum : std::size_t { p1, p2, p3, p4, p5, p6, q1, q2, q3, q4, q5 };
  const VisibilityGraph tree = VisibilityGraph::from_edges(
      11, {{p4, q5}, {q5, p5}, {p5, q4}, {q4, p3}, {p3, q2}, {q2, p1}, {p1, q1}, {q1, p2}, {p2, q3}, {q3, p6}, {q3, p3}});
  const std::vector<std::size_t> walk = dfs_walk(tree, p6);
  const std::size_t d = walk.size();
  const std::size_t spacing = rcs_spacing(d, 3);
  std::ostringstream s;
  s << "d = " << d << ", spacing = " << spacing;
  return {7, "worked web", d == 20 && spacing == 7, s.str()};
}

Line geometry_oracle() {
  std::size_t probes = 0, disagreements = 0, viewpoints = 0;
  std::mt19937_64 rng(8);
  for (const std::string& name : test::env_names()) {
    const Environment env = load_env(name);
    for (int v = 0; v < kViewpoints; ++v) {
      const Point q = test::random_point_in(env, rng);
      const test::ProbeReport r = test::probe_visibility(env, visibility_polygon(env, q), kProbeGrid, env.epsilon());
      probes += r.probes;
      disagreements += r.disagreements;
      ++viewpoints;
    }
  }
  std::ostringstream d;
  d << viewpoints << " viewpoints, " << probes << " probes, " << disagreements << " disagreements";
  return {8, "geometry oracle", disagreements == 0, d.str()};
}

Line event_rule() {
  std::size_t attempts = 0, ambiguous = 0, entries = 0, decided = 0, mismatches = 0;
  std::mt19937_64 rng(9);
  std::ostringstream d;
  for (const std::string& name : test::nonconvex_env_names()) {
    const Environment env = load_env(name);
    const ContaminationGrid grid(env, kOracleGrid);
    int edges = 0;
    while (edges < kOracleEdges) {
      const std::vector<Point> from{test::random_point_in(env, rng)}, to{test::random_point_in(env, rng)};
      if (!contains_segment(env, from[0], to[0])) continue;
      ++attempts;
      InfluenceRelation r;
      try {
        r = influence_relation(env, from, to);
      } catch (const ShadowsError& e) {
        if (e.code() != ShadowsErrc::AmbiguousCorrespondence) throw;
        ++ambiguous;
        continue;
      }
      ++edges;
      const test::Bracket o =
          test::bracket_relation(grid, shadow_set(env, from), shadow_set(env, to), from, to, kOracleSteps);
      for (std::size_t a = 0; a < r.rows; ++a) {
        for (std::size_t b = 0; b < r.cols; ++b) {
          const test::BracketEntry& e = o.at(a, b);
          if (!e.resolved) continue;
          ++entries;
          decided += e.lo == e.hi ? 1 : 0;
          const bool bad = (r.at(a, b) && !e.hi) || (!r.at(a, b) && e.lo);
          if (bad) {
            ++mismatches;
            std::cerr << "  mismatch " << name << " (" << from[0].x << "," << from[0].y << ")->(" << to[0].x << ","
                      << to[0].y << ") entry " << a << "," << b << std::endl;
          }
        }
      }
    }
  }
  const double amb = static_cast<double>(ambiguous) / attempts;
  const double dec = entries ? static_cast<double>(decided) / entries : 0.0;
  d << attempts << " edges sampled, " << ambiguous << " ambiguous (" << fmt("%.1f", 100 * amb) << "%), " << entries
    << " entries, " << fmt("%.1f", 100 * dec) << "% decided by the oracle, " << mismatches << " mismatches";
  return {9, "event rule", mismatches == 0 && amb < kAmbiguousLimit && dec >= kDecidedFloor, d.str()};
}

// Eight rooms above a thin corridor, each reached through a narrow neck, so
// few random pairs of points see each other.
Environment comb() {
  RawEnvironment raw;
  raw.outer = {{0, 0}, {16, 0}, {16, 0.4}};
  for (int i = 7; i >= 0; --i) {
    const double x = 2.0 * i;
    raw.outer.insert(raw.outer.end(), {{x + 0.95, 0.4}, {x + 0.95, 0.7}, {x + 1.6, 0.7}, {x + 1.6, 2.7},
                                       {x, 2.7}, {x, 0.7}, {x + 0.65, 0.7}, {x + 0.65, 0.4}});
  }
  raw.outer.push_back({0, 0.4});
  return Environment::validate(raw);
}

Line order_and_antichain() {
  std::size_t violations = 0;
  std::mt19937_64 rng(10);
  std::uniform_int_distribution<std::size_t> len(0, 8);
  for (int t = 0; t < kOrderCases; ++t) {
    const std::size_t n = len(rng);
    const ShadowLabel a = test::random_label(n, rng), b = test::random_label(n, rng), c = test::random_label(n, rng);
    violations += dominates(a, a) ? 1 : 0;
    violations += dominates(a, b) && dominates(b, a) ? 1 : 0;
    violations += dominates(a, b) && dominates(b, c) && !dominates(a, c) ? 1 : 0;
    FailureLabel x, y, z;
    for (int i = 0; i < 2; ++i) {
      const std::size_t m = len(rng);
      x.sub.push_back(test::random_label(m, rng));
      y.sub.push_back(test::random_label(m, rng));
      z.sub.push_back(test::random_label(m, rng));
    }
    violations += dominates(x, x) ? 1 : 0;
    violations += dominates(x, y) && dominates(y, x) ? 1 : 0;
    violations += dominates(x, y) && dominates(y, z) && !dominates(x, z) ? 1 : 0;
  }

  const Environment env = comb();
  auto random_jpc = [&] {
    Jpc j;
    for (int i = 0; i < 2; ++i) j.positions.push_back(test::random_point_in(env, rng));
    return j;
  };
  Rspeg g(env, random_jpc());
  std::size_t checks = 0;
  for (int s = 0; s < kFuzzSamples; ++s) {
    g.add_sample(random_jpc());
    for (const Vertex& v : g.vertices()) {
      for (LabelId a : v.labels) {
        for (LabelId b : v.labels) {
          if (a != b && covers(g.labels()[a].label, g.labels()[b].label)) ++violations;
        }
      }
    }
    ++checks;
  }
  std::ostringstream d;
  d << kOrderCases << " random triples, " << checks << " antichain checks over " << g.vertices().size()
    << " vertices and " << g.edges().size() << " edges, " << violations << " violations";
  return {10, "dominance and antichains", violations == 0 && checks == kFuzzSamples, d.str()};
}

}  // namespace
}  // namespace rpe

int main(int argc, char** argv) {
  using namespace rpe;
  std::set<int> only;
  for (int i = 1; i < argc; ++i) only.insert(std::atoi(argv[i]));
  auto wanted = [&](int id) { return only.empty() || only.count(id) > 0; };

  Trials trials;
  const std::vector<std::pair<int, std::function<Line()>>> criteria{
      {1, [] { return cache_equivalence(); }},
      {2, [&] { return caching_speedup(trials); }},
      {3, [&] { return robustness_gate(trials); }},
      {4, [&] { return success_rate(trials); }},
      {5, [&] { return sampler_direction(trials); }},
      {6, [] { return double_coverage(); }},
      {7, [] { return worked_web(); }},
      {8, [] { return geometry_oracle(); }},
      {9, [] { return event_rule(); }},
      {10, [] { return order_and_antichain(); }},
  };
  bool all = true;
  std::vector<Line> lines;
  for (const auto& [id, run] : criteria) {
    if (!wanted(id)) continue;
    const auto start = std::chrono::steady_clock::now();
    std::cerr << "criterion " << id << " ..." << std::endl;
    Line l;
    try {
      l = run();
    } catch (const std::exception& e) {
      l = {id, "criterion " + std::to_string(id), false, std::string("exception: ") + e.what()};
    }
    l.detail += " [" + fmt("%.0f", seconds_since(start)) + " s]";
    std::cout << (l.pass ? "PASS" : "FAIL") << " " << l.id << " " << l.name << ": " << l.detail << std::endl;
    all = all && l.pass;
    lines.push_back(l);
  }
  if (trials.solutions() > 0) {
    std::cout << "note: " << trials.solutions() << " planner solutions checked in total, " << trials.unsound()
              << " failed" << std::endl;
  }
  return all ? 0 : 1;
}
