#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "rpe/bench.hpp"
#include "rpe/environment_io.hpp"
#include "rpe/svg.hpp"
#include "support.hpp"

namespace rpe {
namespace {

namespace fs = std::filesystem;
using test::run_command;

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("rpe_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }
  static std::string rpe(const std::string& args) { return std::string(RPE_CLI_PATH) + " " + args; }
  static std::string env(const std::string& name) { return test::env_path(name).string(); }

  fs::path dir_;
};

nlohmann::json schema() { return nlohmann::json::parse(test::read_file(fs::path(RPE_DOCS_DIR) / "solution.schema.json")); }

TEST_F(Cli, ConvexSolveWritesOneWaypoint) {
  const auto r = run_command(rpe("solve --env " + env("convex_room") + " --n 2 --out " + path("s.json") + " --svg " +
                                 path("s.svg")));
  ASSERT_EQ(r.exit_code, 0) << r.err;
  const auto doc = nlohmann::json::parse(test::read_file(path("s.json")));
  EXPECT_EQ(doc["waypoints"].size(), 1u);
  EXPECT_EQ(test::schema_errors(schema(), doc), std::vector<std::string>{});
  EXPECT_NE(test::read_file(path("s.svg")).find("<svg"), std::string::npos);
}

TEST_F(Cli, LRoomSolutionMatchesSchemaAndValidates) {
  const auto r = run_command(rpe("solve --env " + env("l_room") + " --n 2 --seed 7 --out " + path("s.json") +
                                 " --svg " + path("s.svg") + " --dump-graph " + path("g.json")));
  ASSERT_EQ(r.exit_code, 0) << r.err;
  const auto doc = nlohmann::json::parse(test::read_file(path("s.json")));
  EXPECT_EQ(test::schema_errors(schema(), doc), std::vector<std::string>{});
  EXPECT_EQ(doc["outcome"], "solution");
  EXPECT_TRUE(doc["check"]["passed"].get<bool>());
  const auto graph = nlohmann::json::parse(test::read_file(path("g.json")));
  EXPECT_EQ(graph["vertices"].size(), doc["stats"]["vertices"].get<std::size_t>());

  const auto v = run_command(rpe("validate --env " + env("l_room") + " --solution " + path("s.json")));
  EXPECT_EQ(v.exit_code, 0) << v.err;
  EXPECT_NE(v.out.find("exclude 1: pass"), std::string::npos);
}

TEST_F(Cli, SchemaCheckerFlagsBrokenDocuments) {
  nlohmann::json doc = {{"outcome", "maybe"}, {"waypoints", {{{1.0, 2.0}}}}};
  const auto errors = test::schema_errors(schema(), doc);
  EXPECT_GE(errors.size(), 4u);
}

TEST_F(Cli, MissingEnvironmentIsAnInputError) {
  const auto r = run_command(rpe("solve --env " + path("nope.json") + " --out " + path("s.json")));
  EXPECT_EQ(r.exit_code, 1);
  EXPECT_NE(r.err.find("nope.json"), std::string::npos);
  EXPECT_EQ(r.err.rfind("error: InputError:", 0), 0u) << r.err;
  EXPECT_EQ(std::count(r.err.begin(), r.err.end(), '\n'), 1);
}

TEST_F(Cli, InvalidGeometryIsAnInputError) {
  std::ofstream(path("bowtie.json")) << R"({"outer": [[0,0],[1,1],[1,0],[0,1]], "holes": []})";
  const auto r = run_command(rpe("solve --env " + path("bowtie.json")));
  EXPECT_EQ(r.exit_code, 1);
  EXPECT_NE(r.err.find("SelfIntersecting"), std::string::npos) << r.err;
}

TEST_F(Cli, UsageErrorsExitWithOne) {
  EXPECT_EQ(run_command(rpe("")).exit_code, 1);
  EXPECT_EQ(run_command(rpe("solve --env " + env("l_room") + " --n 1")).exit_code, 1);
  EXPECT_EQ(run_command(rpe("solve --env " + env("l_room") + " --sampler grid")).exit_code, 1);
}

TEST_F(Cli, TimeoutExitsWithTwo) {
  const auto r = run_command(rpe("solve --env " + env("wing_rooms") + " --n 3 --timeout 0.05 --out " + path("s.json")));
  EXPECT_EQ(r.exit_code, 2) << r.err;
  EXPECT_EQ(r.err.rfind("error: Timeout:", 0), 0u) << r.err;
  const auto doc = nlohmann::json::parse(test::read_file(path("s.json")));
  EXPECT_EQ(doc["outcome"], "timeout");
  EXPECT_EQ(test::schema_errors(schema(), doc), std::vector<std::string>{});
}

TEST_F(Cli, NonRobustSolutionExitsWithThree) {
  const std::string fixture = (test::data_dir() / "fixtures" / "non_robust_l_room.json").string();
  const auto r = run_command(rpe("validate --env " + env("l_room") + " --solution " + fixture));
  EXPECT_EQ(r.exit_code, 3);
  EXPECT_NE(r.err.find("excluded=1"), std::string::npos) << r.err;
  EXPECT_NE(r.out.find("exclude 1: fail"), std::string::npos);
}

TEST_F(Cli, TruncatedSolutionExitsWithOne) {
  std::ofstream(path("cut.json")) << R"({"outcome": "solution", "waypoints": [[[3.9, 0.5], [2.0,)";
  const auto r = run_command(rpe("validate --env " + env("l_room") + " --solution " + path("cut.json")));
  EXPECT_EQ(r.exit_code, 1);
  EXPECT_EQ(r.err.rfind("error: InputError:", 0), 0u) << r.err;
}

TEST_F(Cli, SvgIsDeterministicPerSeed) {
  const std::string args = " --env " + env("l_room") + " --n 2 --seed 3 ";
  ASSERT_EQ(run_command(rpe("solve" + args + "--out " + path("a.json") + " --svg " + path("a.svg"))).exit_code, 0);
  ASSERT_EQ(run_command(rpe("solve" + args + "--out " + path("b.json") + " --svg " + path("b.svg"))).exit_code, 0);
  EXPECT_EQ(test::read_file(path("a.svg")), test::read_file(path("b.svg")));
}

TEST_F(Cli, WebDumpDescribesTheWalk) {
  const auto r = run_command(rpe("web --env " + env("hooked_hole") + " --seed 2 --n 3 --svg " + path("w.svg")));
  ASSERT_EQ(r.exit_code, 0) << r.err;
  const auto doc = nlohmann::json::parse(r.out);
  const std::size_t d = doc["d"];
  EXPECT_EQ(doc["walk"].size(), d);
  EXPECT_EQ(doc["spacing"].get<std::size_t>(), (d + 2) / 3);
  EXPECT_EQ(doc["rcs_samples"].size(), 1 + (2 * d + 2) / 3);
}

TEST_F(Cli, BenchWritesCsvAndTrialLog) {
  const auto r = run_command(rpe("bench --env " + env("convex_room") + " --n 2 --trials 3 --csv " + path("b.csv") +
                                 " --log " + path("b.jsonl")));
  ASSERT_EQ(r.exit_code, 0) << r.err;
  std::istringstream csv(test::read_file(path("b.csv")));
  std::istringstream golden(test::read_file(fs::path(RPE_GOLDEN_DIR) / "bench_rows.csv"));
  std::string line, expected;
  for (int k = 0; k < 3; ++k) {
    std::getline(csv, line);
    std::getline(golden, expected);
    EXPECT_EQ(line, expected);
  }
  std::getline(csv, line);
  EXPECT_EQ(line.rfind("convex_room,rcs,2,3,1.0000,", 0), 0u) << line;
  EXPECT_NE(line.find(",1.0000,0.0000,0.0000,0.0000"), std::string::npos) << line;

  std::istringstream log(test::read_file(path("b.jsonl")));
  std::size_t trials = 0;
  while (std::getline(log, line)) {
    const auto rec = nlohmann::json::parse(line);
    EXPECT_EQ(rec["outcome"], "solution");
    EXPECT_EQ(rec["seed"].get<std::size_t>(), trials);
    ++trials;
  }
  EXPECT_EQ(trials, 3u);
}

TEST(Bench, SummaryMatchesGoldenCsv) {
  auto rec = [](SamplerKind s, std::size_t trial, const char* outcome, double t, std::size_t v, std::size_t e) {
    TrialRecord r;
    r.env = "hooked_hole";
    r.sampler = s;
    r.n = 3;
    r.trial = trial;
    r.outcome = outcome;
    r.stats.elapsed_s = t;
    r.stats.vertices = v;
    r.stats.edges = e;
    return r;
  };
  const std::vector<TrialRecord> records{rec(SamplerKind::Rcs, 0, "solution", 1.0, 9, 30),
                                         rec(SamplerKind::Ws, 0, "solution", 2.5, 7, 18),
                                         rec(SamplerKind::Rcs, 1, "solution", 3.0, 12, 40),
                                         rec(SamplerKind::Rcs, 2, "timeout", 10.2, 15, 50)};
  std::ostringstream out;
  write_csv(out, summarize(records, 10.0));
  EXPECT_EQ(out.str(), test::read_file(fs::path(RPE_GOLDEN_DIR) / "bench_rows.csv"));
}

TEST(Bench, FailingTrialsAreRecordedNotFatal) {
  BenchmarkSpec spec;
  spec.environments = {test::env_path("l_room")};
  spec.n_values = {1};
  spec.samplers = {SamplerKind::Rcs};
  spec.trials = 2;
  const auto records = run_benchmark(spec);
  ASSERT_EQ(records.size(), 2u);
  for (const auto& r : records) {
    EXPECT_EQ(r.outcome, "error");
    EXPECT_FALSE(r.error.empty());
  }
}

TEST(Bench, EnvironmentNameIsTheFileStem) { EXPECT_EQ(env_name("/a/b/wing_rooms.json"), "wing_rooms"); }

TEST(Svg, RenderingDependsOnlyOnInputs) {
  const Environment env = test::load_env("two_holes");
  const Solution s{{Jpc{{{1, 1}, {11, 9}}}, Jpc{{{1, 9}, {11, 1}}}}};
  SvgLayers layers;
  layers.solution = &s;
  const std::string a = render_svg(env, layers), b = render_svg(env, layers);
  EXPECT_EQ(a, b);
  EXPECT_NE(a.find("#d62728"), std::string::npos);
  EXPECT_NE(a.find("#1f77b4"), std::string::npos);
}

}  // namespace
}  // namespace rpe
