#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"
#include "rpe/planner.hpp"

namespace rpe {

struct BenchmarkSpec {
  std::vector<std::filesystem::path> environments;
  std::vector<std::size_t> n_values;
  std::vector<SamplerKind> samplers;
  std::size_t trials{1};
  double timeout_s{600.0};
  std::uint64_t base_seed{0};
  bool caching{true};
  int coverage_grid{200};
  std::size_t workers{1};
};

struct TrialRecord {
  std::string env;
  SamplerKind sampler{SamplerKind::Rcs};
  std::size_t n{0};
  std::size_t trial{0};
  std::uint64_t seed{0};
  bool caching{true};
  std::string outcome;  // solution, timeout or error
  std::string error;
  PlanStats stats;
};

struct BenchmarkRow {
  std::string env;
  SamplerKind sampler{SamplerKind::Rcs};
  std::size_t n{0};
  std::size_t trials{0};
  double success_rate{0.0};
  double time_mean{0.0};
  double time_std{0.0};
  double vertices_mean{0.0};
  double vertices_std{0.0};
  double edges_mean{0.0};
  double edges_std{0.0};
};

/// Environment name used in reports: the file stem.
std::string env_name(const std::filesystem::path& path);

/// Runs every (env, sampler, n, trial) combination; trial i uses base_seed + i.
/// A failing trial is recorded with outcome "error" and the sweep continues.
/// `on_trial` is called once per finished trial, serialised across workers.
std::vector<TrialRecord> run_benchmark(const BenchmarkSpec& spec,
                                       const std::function<void(const TrialRecord&)>& on_trial = {});

/// One row per (env, sampler, n) in first-seen order. Planning time of trials
/// without a solution counts as `timeout_s`.
std::vector<BenchmarkRow> summarize(const std::vector<TrialRecord>& records, double timeout_s);

void write_csv(std::ostream& out, const std::vector<BenchmarkRow>& rows);

nlohmann::json trial_to_json(const TrialRecord& record);

}  // namespace rpe
