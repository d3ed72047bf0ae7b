#include "rpe/planner.hpp"

#include <chrono>

namespace rpe {

const char* to_string(Outcome outcome) { return outcome == Outcome::Solution ? "solution" : "timeout"; }

Planner::Planner(const Environment& env, PlanConfig config) : env_(&env), config_(std::move(config)) {
  if (config_.n < 2) throw std::invalid_argument("n must be at least 2, got " + std::to_string(config_.n));
  if (!(config_.timeout_s > 0.0)) throw std::invalid_argument("timeout must be positive");
  if (config_.root && config_.root->size() != config_.n) {
    throw std::invalid_argument("root configuration has " + std::to_string(config_.root->size()) +
                                " positions, expected " + std::to_string(config_.n));
  }
}

namespace {

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

}  // namespace

PlanResult Planner::run() {
  const Clock::time_point start = Clock::now();
  const Deadline deadline = Deadline::after(config_.timeout_s);
  WebOptions web;
  web.coverage_grid = config_.coverage_grid;
  SampleStream stream(*env_, config_.sampler, config_.n, config_.seed, web);

  GraphOptions options;
  options.cache_relations = config_.caching;
  std::optional<LabelRef> clear;
  std::size_t samples = 0;
  try {
    Jpc root = config_.root ? *config_.root : stream.next(deadline);
    ++samples;
    graph_ = std::make_unique<Rspeg>(*env_, std::move(root), options);
    clear = graph_->find_all_clear();
    while (!clear) {
      deadline.check();
      const Jpc w = stream.next(deadline);
      ++samples;
      clear = graph_->add_sample(w, deadline).all_clear;
    }
  } catch (const TimeoutError&) {
  }

  PlanResult result;
  result.stats.elapsed_s = seconds_since(start);
  result.stats.samples = samples;
  result.stats.webs = stream.webs_built();
  if (graph_) {
    const GraphCounters& c = graph_->counters();
    result.stats.vertices = graph_->vertices().size();
    result.stats.edges = graph_->edges().size();
    result.stats.labels_stored = graph_->live_label_count();
    result.stats.labels_created = c.labels_added;
    result.stats.labels_pruned = c.labels_pruned;
    result.stats.relations_computed = c.relations_computed;
    result.stats.label_propagations = c.label_propagations;
    result.stats.skipped_edges = c.skipped_edges;
  }
  if (!clear) {
    result.outcome = Outcome::Timeout;
    return result;
  }

  Solution solution = graph_->extract_solution(clear->vertex, clear->label);
  const Clock::time_point check_start = Clock::now();
  CheckReport report = check_solution(*env_, solution, 1, config_.check);
  result.stats.validation_s = seconds_since(check_start);
  if (!report.passed()) {
    const std::size_t i = report.first_failure().value_or(0);
    throw SoundnessError("extracted solution leaves contamination when pursuer " + std::to_string(i) + " fails", i);
  }
  result.outcome = Outcome::Solution;
  result.solution = std::move(solution);
  result.check = std::move(report);
  return result;
}

PlanResult plan(const Environment& env, const PlanConfig& config) { return Planner(env, config).run(); }

}  // namespace rpe
