#include "rpe/bench.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <map>
#include <mutex>
#include <optional>
#include <thread>

#include "rpe/environment_io.hpp"
#include "rpe/serialize.hpp"

namespace rpe {

std::string env_name(const std::filesystem::path& path) { return path.stem().string(); }

namespace {

struct Job {
  std::size_t env;
  SamplerKind sampler;
  std::size_t n;
  std::size_t trial;
};

TrialRecord run_trial(const Environment& env, const std::string& name, const BenchmarkSpec& spec, const Job& job) {
  TrialRecord r;
  r.env = name;
  r.sampler = job.sampler;
  r.n = job.n;
  r.trial = job.trial;
  r.seed = spec.base_seed + job.trial;
  r.caching = spec.caching;
  PlanConfig cfg;
  cfg.n = job.n;
  cfg.sampler = job.sampler;
  cfg.seed = r.seed;
  cfg.timeout_s = spec.timeout_s;
  cfg.caching = spec.caching;
  cfg.coverage_grid = spec.coverage_grid;
  try {
    const PlanResult result = plan(env, cfg);
    r.outcome = to_string(result.outcome);
    r.stats = result.stats;
  } catch (const std::exception& e) {
    r.outcome = "error";
    r.error = e.what();
  }
  return r;
}

struct Moments {
  double mean{0.0};
  double std{0.0};
};

// Sample standard deviation; zero for a single trial.
Moments moments(const std::vector<double>& xs) {
  Moments m;
  if (xs.empty()) return m;
  for (double x : xs) m.mean += x;
  m.mean /= static_cast<double>(xs.size());
  if (xs.size() < 2) return m;
  double ss = 0.0;
  for (double x : xs) ss += (x - m.mean) * (x - m.mean);
  m.std = std::sqrt(ss / static_cast<double>(xs.size() - 1));
  return m;
}

std::string fixed(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.4f", v);
  return buf;
}

}  // namespace

std::vector<TrialRecord> run_benchmark(const BenchmarkSpec& spec,
                                       const std::function<void(const TrialRecord&)>& on_trial) {
  if (spec.trials < 1) throw std::invalid_argument("a benchmark needs at least one trial per cell");
  std::vector<Environment> envs;
  std::vector<std::string> names;
  for (const auto& path : spec.environments) {
    envs.push_back(load_environment(path));
    names.push_back(env_name(path));
  }
  std::vector<Job> jobs;
  for (std::size_t e = 0; e < envs.size(); ++e) {
    for (SamplerKind s : spec.samplers) {
      for (std::size_t n : spec.n_values) {
        for (std::size_t t = 0; t < spec.trials; ++t) jobs.push_back(Job{e, s, n, t});
      }
    }
  }

  std::vector<std::optional<TrialRecord>> done(jobs.size());
  std::atomic<std::size_t> next{0};
  std::mutex report;
  auto worker = [&] {
    for (std::size_t j = next++; j < jobs.size(); j = next++) {
      TrialRecord r = run_trial(envs[jobs[j].env], names[jobs[j].env], spec, jobs[j]);
      std::lock_guard lock(report);
      if (on_trial) on_trial(r);
      done[j] = std::move(r);
    }
  };
  const std::size_t workers = std::max<std::size_t>(1, std::min(spec.workers, jobs.size()));
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  std::vector<TrialRecord> out;
  out.reserve(done.size());
  for (auto& r : done) out.push_back(std::move(*r));
  return out;
}

std::vector<BenchmarkRow> summarize(const std::vector<TrialRecord>& records, double timeout_s) {
  std::vector<BenchmarkRow> rows;
  std::vector<std::vector<const TrialRecord*>> groups;
  for (const TrialRecord& r : records) {
    std::size_t g = 0;
    while (g < rows.size() && !(rows[g].env == r.env && rows[g].sampler == r.sampler && rows[g].n == r.n)) ++g;
    if (g == rows.size()) {
      BenchmarkRow row;
      row.env = r.env;
      row.sampler = r.sampler;
      row.n = r.n;
      rows.push_back(row);
      groups.emplace_back();
    }
    groups[g].push_back(&r);
  }
  for (std::size_t g = 0; g < rows.size(); ++g) {
    std::vector<double> times, vertices, edges;
    std::size_t successes = 0;
    for (const TrialRecord* r : groups[g]) {
      const bool ok = r->outcome == "solution";
      successes += ok ? 1 : 0;
      times.push_back(ok ? r->stats.elapsed_s : timeout_s);
      vertices.push_back(static_cast<double>(r->stats.vertices));
      edges.push_back(static_cast<double>(r->stats.edges));
    }
    BenchmarkRow& row = rows[g];
    row.trials = groups[g].size();
    row.success_rate = static_cast<double>(successes) / static_cast<double>(row.trials);
    const Moments t = moments(times), v = moments(vertices), e = moments(edges);
    row.time_mean = t.mean;
    row.time_std = t.std;
    row.vertices_mean = v.mean;
    row.vertices_std = v.std;
    row.edges_mean = e.mean;
    row.edges_std = e.std;
  }
  return rows;
}

void write_csv(std::ostream& out, const std::vector<BenchmarkRow>& rows) {
  out << "# planning time statistics include trials without a solution, counted at the timeout value\n";
  out << "# standard deviations are sample standard deviations over all trials of the row\n";
  out << "env,sampler,n,trials,success_rate,time_mean_s,time_std_s,vertices_mean,vertices_std,edges_mean,edges_std\n";
  for (const BenchmarkRow& r : rows) {
    out << r.env << ',' << to_string(r.sampler) << ',' << r.n << ',' << r.trials << ',' << fixed(r.success_rate)
        << ',' << fixed(r.time_mean) << ',' << fixed(r.time_std) << ',' << fixed(r.vertices_mean) << ','
        << fixed(r.vertices_std) << ',' << fixed(r.edges_mean) << ',' << fixed(r.edges_std) << '\n';
  }
}

nlohmann::json trial_to_json(const TrialRecord& r) {
  nlohmann::json out{{"env", r.env},         {"sampler", to_string(r.sampler)}, {"n", r.n},
                     {"trial", r.trial},     {"seed", r.seed},                  {"caching", r.caching},
                     {"outcome", r.outcome}, {"stats", stats_to_json(r.stats)}};
  if (!r.error.empty()) out["error"] = r.error;
  return out;
}

}  // namespace rpe
