#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>

#include "rpe/checker.hpp"
#include "rpe/rspeg.hpp"
#include "rpe/sampling.hpp"

namespace rpe {

struct PlanConfig {
  std::size_t n{3};
  SamplerKind sampler{SamplerKind::Rcs};
  std::uint64_t seed{0};
  double timeout_s{600.0};
  bool caching{true};
  int coverage_grid{200};
  std::optional<Jpc> root;  // defaults to the sampler's first configuration
  CheckOptions check;
};

enum class Outcome { Solution, Timeout };

const char* to_string(Outcome outcome);

struct PlanStats {
  double elapsed_s{0.0};     // planning time, validation excluded
  double validation_s{0.0};  // time spent in check_solution
  std::size_t vertices{0};
  std::size_t edges{0};
  std::size_t labels_stored{0};  // live labels at the end
  std::size_t labels_created{0};
  std::size_t labels_pruned{0};
  std::size_t relations_computed{0};
  std::size_t label_propagations{0};
  std::size_t skipped_edges{0};
  std::size_t samples{0};  // configurations drawn, root included
  std::size_t webs{0};
};

struct PlanResult {
  Outcome outcome{Outcome::Timeout};
  std::optional<Solution> solution;
  std::optional<CheckReport> check;
  PlanStats stats;
};

/// An extracted solution failed independent validation. Always a bug.
class SoundnessError : public std::logic_error {
 public:
  SoundnessError(const std::string& what, std::size_t excluded) : std::logic_error(what), excluded_(excluded) {}
  std::size_t excluded() const noexcept { return excluded_; }

 private:
  std::size_t excluded_;
};

/// One planning run. Keeps the graph so callers can inspect or dump it.
class Planner {
 public:
  Planner(const Environment& env, PlanConfig config);
  Planner(Environment&&, PlanConfig) = delete;

  PlanResult run();
  const Rspeg* graph() const { return graph_.get(); }

 private:
  const Environment* env_;
  PlanConfig config_;
  std::unique_ptr<Rspeg> graph_;
};

PlanResult plan(const Environment& env, const PlanConfig& config);

}  // namespace rpe
