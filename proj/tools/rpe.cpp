#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "rpe/bench.hpp"
#include "rpe/environment_io.hpp"
#include "rpe/serialize.hpp"
#include "rpe/svg.hpp"

namespace {

enum Exit : int { kOk = 0, kInputError = 1, kTimeout = 2, kRobustnessFailure = 3 };

int fail(const std::string& kind, const std::string& message, int code) {
  std::string flat = message;
  for (char& c : flat) {
    if (c == '\n') c = ' ';
  }
  std::cerr << "error: " << kind << ": " << flat << '\n';
  return code;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw rpe::InputError("cannot write " + path);
  out << text;
}

struct SolveArgs {
  std::string env;
  std::size_t n{3};
  std::string sampler{"rcs"};
  std::uint64_t seed{0};
  double timeout{600.0};
  bool no_cache{false};
  int coverage_grid{200};
  std::string out{"solution.json"};
  std::string svg{"solution.svg"};
  std::string dump_graph;
};

int cmd_solve(const SolveArgs& a) {
  const rpe::Environment env = rpe::load_environment(a.env);
  rpe::PlanConfig cfg;
  cfg.n = a.n;
  cfg.sampler = rpe::parse_sampler(a.sampler);
  cfg.seed = a.seed;
  cfg.timeout_s = a.timeout;
  cfg.caching = !a.no_cache;
  cfg.coverage_grid = a.coverage_grid;
  rpe::Planner planner(env, cfg);
  rpe::PlanResult result;
  try {
    result = planner.run();
  } catch (const rpe::SoundnessError& e) {
    return fail("RobustnessFailure", "excluded=" + std::to_string(e.excluded()) + " " + e.what(),
                kRobustnessFailure);
  }
  rpe::write_json(a.out, rpe::plan_to_json(result, cfg));
  if (!a.dump_graph.empty() && planner.graph()) rpe::write_json(a.dump_graph, rpe::graph_to_json(*planner.graph()));
  if (result.outcome == rpe::Outcome::Timeout) {
    return fail("Timeout", "no solution within " + std::to_string(a.timeout) + " s after " +
                               std::to_string(result.stats.samples) + " samples",
                kTimeout);
  }
  if (!a.svg.empty()) {
    rpe::SvgLayers layers;
    layers.solution = &*result.solution;
    write_text(a.svg, rpe::render_svg(env, layers));
  }
  std::cout << "solution: " << result.solution->waypoints.size() << " waypoints, " << result.stats.vertices
            << " vertices, " << result.stats.edges << " edges, " << result.stats.elapsed_s << " s\n";
  return kOk;
}

struct BenchArgs {
  std::vector<std::string> envs;
  std::vector<std::size_t> n{3};
  std::vector<std::string> samplers{"rcs"};
  std::size_t trials{1};
  double timeout{600.0};
  std::uint64_t seed{0};
  bool no_cache{false};
  int coverage_grid{200};
  std::size_t workers{1};
  std::string csv;
  std::string log;
};

int cmd_bench(const BenchArgs& a) {
  rpe::BenchmarkSpec spec;
  for (const auto& e : a.envs) spec.environments.emplace_back(e);
  spec.n_values = a.n;
  for (const auto& s : a.samplers) spec.samplers.push_back(rpe::parse_sampler(s));
  spec.trials = a.trials;
  spec.timeout_s = a.timeout;
  spec.base_seed = a.seed;
  spec.caching = !a.no_cache;
  spec.coverage_grid = a.coverage_grid;
  spec.workers = a.workers;
  for (std::size_t n : spec.n_values) {
    if (n < 2) throw std::invalid_argument("n must be at least 2, got " + std::to_string(n));
  }

  std::optional<std::ofstream> log;
  if (!a.log.empty()) {
    log.emplace(a.log);
    if (!*log) throw rpe::InputError("cannot write " + a.log);
  }
  const auto records = rpe::run_benchmark(spec, [&](const rpe::TrialRecord& r) {
    if (log) *log << rpe::trial_to_json(r).dump() << '\n' << std::flush;
    std::cerr << r.env << ' ' << rpe::to_string(r.sampler) << " n=" << r.n << " trial " << r.trial << ": "
              << r.outcome << ' ' << r.stats.elapsed_s << " s\n";
  });
  const auto rows = rpe::summarize(records, spec.timeout_s);
  if (a.csv.empty()) {
    rpe::write_csv(std::cout, rows);
  } else {
    std::ofstream out(a.csv);
    if (!out) throw rpe::InputError("cannot write " + a.csv);
    rpe::write_csv(out, rows);
  }
  return kOk;
}

struct ValidateArgs {
  std::string env;
  std::string solution;
  int grid{200};
};

int cmd_validate(const ValidateArgs& a) {
  const rpe::Environment env = rpe::load_environment(a.env);
  const rpe::Solution solution = rpe::load_solution(a.solution);
  for (const rpe::Jpc& w : solution.waypoints) {
    for (const rpe::Point& p : w.positions) {
      if (!rpe::contains_point(env, p)) throw rpe::InputError("a waypoint position lies outside the environment");
    }
  }
  if (solution.waypoints.front().size() < 2) throw rpe::InputError("a 1-robust solution needs at least 2 pursuers");
  rpe::CheckOptions options;
  options.grid = a.grid;
  const rpe::CheckReport report = rpe::check_solution(env, solution, 1, options);
  for (const auto& v : report.verdicts) {
    std::cout << "exclude " << *v.excluded << ": " << (v.passed ? "pass" : "fail") << " (" << v.residual_cells
              << " contaminated cells)\n";
  }
  if (!report.passed()) {
    return fail("RobustnessFailure", "excluded=" + std::to_string(report.first_failure().value_or(0)) +
                                         " leaves contamination behind",
                kRobustnessFailure);
  }
  return kOk;
}

struct WebArgs {
  std::string env;
  std::uint64_t seed{0};
  std::size_t n{3};
  int coverage_grid{200};
  std::string out;
  std::string svg;
};

int cmd_web(const WebArgs& a) {
  const rpe::Environment env = rpe::load_environment(a.env);
  rpe::WebOptions options;
  options.coverage_grid = a.coverage_grid;
  const rpe::Web web = rpe::build_web(env, a.seed, options);
  const rpe::VisibilityGraph graph = rpe::build_visibility_graph(env, web);
  const std::vector<std::size_t> walk = rpe::dfs_walk(graph, rpe::pick_walk_root(graph.size(), a.seed));
  const nlohmann::json doc = rpe::web_to_json(web, graph, walk, a.n);
  if (a.out.empty()) {
    std::cout << doc.dump(2) << '\n';
  } else {
    rpe::write_json(a.out, doc);
  }
  if (!a.svg.empty()) {
    const std::vector<rpe::Point> pts = web.points();
    rpe::SvgLayers layers;
    layers.web_points = pts;
    layers.walk = walk;
    write_text(a.svg, rpe::render_svg(env, layers));
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Plans pursuer paths that clear a polygonal environment even if one pursuer fails."};
  app.require_subcommand(1);

  SolveArgs solve;
  auto* s = app.add_subcommand("solve", "Plan a 1-failure-robust solution");
  s->add_option("--env", solve.env, "Environment JSON file")->required();
  s->add_option("--n", solve.n, "Number of pursuers")->check(CLI::Range(2, 64));
  s->add_option("--sampler", solve.sampler, "Sampler: rcs or ws")->check(CLI::IsMember({"rcs", "ws"}));
  s->add_option("--seed", solve.seed, "Random seed");
  s->add_option("--timeout", solve.timeout, "Wall-clock budget in seconds")->check(CLI::PositiveNumber);
  s->add_flag("--no-cache", solve.no_cache, "Recompute influence relations on every propagation");
  s->add_option("--coverage-grid", solve.coverage_grid, "Coverage grid resolution for web construction")
      ->check(CLI::Range(2, 4000));
  s->add_option("--out", solve.out, "Solution JSON output");
  s->add_option("--svg", solve.svg, "SVG output (empty to skip)");
  s->add_option("--dump-graph", solve.dump_graph, "Write the final graph as JSON");

  BenchArgs bench;
  auto* b = app.add_subcommand("bench", "Run seeded trials and summarise them as CSV");
  b->add_option("--env", bench.envs, "Environment JSON file (repeatable)")->required();
  b->add_option("--n", bench.n, "Pursuer counts (repeatable)");
  b->add_option("--sampler", bench.samplers, "Samplers (repeatable)")->check(CLI::IsMember({"rcs", "ws"}));
  b->add_option("--trials", bench.trials, "Trials per cell")->check(CLI::PositiveNumber);
  b->add_option("--timeout", bench.timeout, "Per-trial budget in seconds")->check(CLI::PositiveNumber);
  b->add_option("--seed", bench.seed, "Base seed; trial i uses seed + i");
  b->add_flag("--no-cache", bench.no_cache, "Recompute influence relations on every propagation");
  b->add_option("--coverage-grid", bench.coverage_grid, "Coverage grid resolution")->check(CLI::Range(2, 4000));
  b->add_option("--workers", bench.workers, "Parallel trials")->check(CLI::PositiveNumber);
  b->add_option("--csv", bench.csv, "CSV output (default: stdout)");
  b->add_option("--log", bench.log, "JSON-lines trial log");

  ValidateArgs validate;
  auto* v = app.add_subcommand("validate", "Check a solution against every single-pursuer failure");
  v->add_option("--env", validate.env, "Environment JSON file")->required();
  v->add_option("--solution", validate.solution, "Solution JSON file")->required();
  v->add_option("--grid", validate.grid, "Checker grid resolution")->check(CLI::Range(2, 4000));

  WebArgs web;
  auto* w = app.add_subcommand("web", "Dump a sparse web, its walk and RCS samples");
  w->add_option("--env", web.env, "Environment JSON file")->required();
  w->add_option("--seed", web.seed, "Web seed");
  w->add_option("--n", web.n, "Robots for the listed RCS samples")->check(CLI::Range(1, 64));
  w->add_option("--coverage-grid", web.coverage_grid, "Coverage grid resolution")->check(CLI::Range(2, 4000));
  w->add_option("--out", web.out, "JSON output (default: stdout)");
  w->add_option("--svg", web.svg, "SVG output");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    return fail("UsageError", e.what(), kInputError);
  }

  try {
    if (*s) return cmd_solve(solve);
    if (*b) return cmd_bench(bench);
    if (*v) return cmd_validate(validate);
    if (*w) return cmd_web(web);
  } catch (const rpe::InputError& e) {
    return fail("InputError", e.what(), kInputError);
  } catch (const rpe::GeometryError& e) {
    return fail("GeometryError", e.what(), kInputError);
  } catch (const rpe::SamplingError& e) {
    return fail(rpe::to_string(e.code()), e.what(), kInputError);
  } catch (const rpe::RspegError& e) {
    return fail(rpe::to_string(e.code()), e.what(), kInputError);
  } catch (const std::invalid_argument& e) {
    return fail("InvalidArgument", e.what(), kInputError);
  }
  return kInputError;
}
